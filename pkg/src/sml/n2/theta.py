"""Theta functions with characteristics and the Dedekind eta function.

Convention::

    theta[s, t](z, tau) = sum_n exp(pi i (n+s)^2 tau + 2 pi i (n+s)(z+t))

so ``theta[s+1, t] = theta[s, t]``, ``theta[s, t+1] = exp(2 pi i s) theta[s, t]``
and ``theta[s, t](z+1, tau) = exp(2 pi i s) theta[s, t](z, tau)``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from ..errors import DomainError

TRUNCATION_EPS = 1e-16


@dataclass(frozen=True)
class ThetaChar:
    s: float
    t: float


@dataclass(frozen=True)
class ModularPoint:
    tau: complex
    z: complex = 0j

    def __post_init__(self):
        if complex(self.tau).imag <= 0:
            raise DomainError(f"Im(tau) must be positive, got {self.tau}")

    @property
    def q(self) -> complex:
        return cmath.exp(2j * math.pi * self.tau)

    @property
    def y(self) -> complex:
        return cmath.exp(2j * math.pi * self.z)

    @classmethod
    def from_nome(cls, q_abs: float, z: complex = 0j) -> "ModularPoint":
        """Purely imaginary ``tau`` with ``|q| = q_abs``."""
        return cls(tau=1j * (-math.log(q_abs) / (2 * math.pi)), z=z)


def _check_tau(tau: complex) -> complex:
    tau = complex(tau)
    if tau.imag <= 0:
        raise DomainError(f"Im(tau) must be positive, got {tau}")
    return tau


def theta_terms(tau: complex, z: complex = 0j, eps: float = TRUNCATION_EPS) -> int:
    """Cutoff ``R`` on ``|n+s|`` so that every omitted term is below ``eps``.

    A term at ``|n+s| = r`` has modulus at most
    ``exp(-pi Im(tau) r^2 + 2 pi r |Im z|)``; ``R`` is the first radius past
    the peak where that drops below ``eps``.
    """
    tau = _check_tau(tau)
    a = math.pi * tau.imag
    b = 2 * math.pi * abs(complex(z).imag)
    # solve a r^2 - b r = -log(eps)
    c = -math.log(eps)
    r = (b + math.sqrt(b * b + 4 * a * c)) / (2 * a)
    return int(math.ceil(r)) + 1


def theta_tail_bound(tau: complex, z: complex, terms: int) -> float:
    """Upper bound on the omitted part of the series beyond ``|n+s| > terms``."""
    tau = _check_tau(tau)
    a = math.pi * tau.imag
    b = 2 * math.pi * abs(complex(z).imag)
    r = float(terms)
    if r <= b / (2 * a):
        return math.inf
    # geometric majorant on each side, ratio taken at the first omitted radius
    first = math.exp(-a * r * r + b * r)
    ratio = math.exp(-a * (2 * r + 1) + b)
    return 2 * first / (1 - ratio)


def theta(chr: ThetaChar, pt: ModularPoint, terms: int | None = None) -> complex:
    """``theta[s, t](z, tau)`` summed over ``|n + s| <= terms``."""
    return theta_raw(chr.s, chr.t, pt.z, pt.tau, terms)


def theta_raw(s: float, t: float, z: complex, tau: complex, terms: int | None = None) -> complex:
    tau = _check_tau(tau)
    if terms is None:
        terms = theta_terms(tau, z)
    lo = math.ceil(-terms - s)
    hi = math.floor(terms - s)
    nu = np.arange(lo, hi + 1) + s
    expo = 1j * np.pi * nu * nu * tau + 2j * np.pi * nu * (z + t)
    return complex(np.sum(np.exp(expo)))


def eta_terms(tau: complex, eps: float = TRUNCATION_EPS) -> int:
    tau = _check_tau(tau)
    qa = math.exp(-2 * math.pi * tau.imag)
    return max(1, int(math.ceil(math.log(eps) / math.log(qa))))


def eta_tail_bound(tau: complex, terms: int) -> float:
    """Relative error bound of truncating ``prod (1 - q^n)`` after ``terms`` factors."""
    tau = _check_tau(tau)
    qa = math.exp(-2 * math.pi * tau.imag)
    tail = qa ** (terms + 1) / (1 - qa)
    return math.expm1(tail / (1 - tail)) if tail < 1 else math.inf


def eta(tau: complex, terms: int | None = None) -> complex:
    """``q^(1/24) prod_{n=1}^{terms} (1 - q^n)``."""
    tau = _check_tau(tau)
    if terms is None:
        terms = eta_terms(tau)
    q = cmath.exp(2j * math.pi * tau)
    n = np.arange(1, terms + 1)
    prod = np.prod(1 - q**n)
    return complex(cmath.exp(2j * math.pi * tau / 24) * prod)


def big_theta(chr: ThetaChar, pt: ModularPoint, terms: int | None = None) -> complex:
    """``theta[s, t](z, tau) / eta(tau)^3``."""
    return theta(chr, pt, terms) / eta(pt.tau) ** 3


def big_theta_raw(s, t, z, tau) -> complex:
    return theta_raw(s, t, z, tau) / eta(tau) ** 3
