"""Chiral Potts rapidities, Boltzmann weights and row-to-row transfer matrices."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, InvalidConfigError, PoleError
from .weyl import LatticeConfig, basis_digits, root_of_unity

COUPLING_TOL = 1e-12


@dataclass(frozen=True)
class Coupling:
    k: float
    kprime: float

    def __post_init__(self):
        if abs(self.k**2 + self.kprime**2 - 1.0) > COUPLING_TOL:
            raise InvalidConfigError(
                f"k**2 + k'**2 = {self.k**2 + self.kprime**2!r}, expected 1"
            )

    @classmethod
    def from_kprime(cls, kprime: float) -> "Coupling":
        if abs(kprime) > 1:
            raise DomainError(f"|k'| must be <= 1, got {kprime}")
        return cls(k=math.sqrt(1.0 - kprime**2), kprime=float(kprime))


@dataclass(frozen=True)
class RapidityPoint:
    """Projective point ``(a:b:c:d)`` normalized so the largest component has modulus 1."""

    a: complex
    b: complex
    c: complex
    d: complex
    coupling: Coupling
    N: int

    @classmethod
    def normalized(cls, a, b, c, d, coupling, N) -> "RapidityPoint":
        vec = np.array([a, b, c, d], dtype=complex)
        if not np.any(vec):
            raise InvalidConfigError("rapidity four-vector is identically zero")
        vec = vec / vec[np.argmax(np.abs(vec))]
        return cls(*(complex(v) for v in vec), coupling=coupling, N=int(N))

    @property
    def vector(self) -> np.ndarray:
        return np.array([self.a, self.b, self.c, self.d], dtype=complex)

    def powers(self) -> np.ndarray:
        """``(a**N, b**N, c**N, d**N)``."""
        return self.vector**self.N

    def to_dict(self) -> dict:
        return {
            "a": [self.a.real, self.a.imag],
            "b": [self.b.real, self.b.imag],
            "c": [self.c.real, self.c.imag],
            "d": [self.d.real, self.d.imag],
            "k": self.coupling.k,
            "kprime": self.coupling.kprime,
            "N": self.N,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "RapidityPoint":
        coupling = Coupling(k=float(data["k"]), kprime=float(data["kprime"]))
        comps = [complex(*data[key]) for key in "abcd"]
        return cls(*comps, coupling=coupling, N=int(data["N"]))


@dataclass(frozen=True)
class WeightTable:
    W: np.ndarray
    Wbar: np.ndarray

    def to_dict(self) -> dict:
        return {
            "W": [[complex(w).real, complex(w).imag] for w in self.W],
            "Wbar": [[complex(w).real, complex(w).imag] for w in self.Wbar],
        }


def curve_residual(p: RapidityPoint) -> np.ndarray:
    """Residuals of the four quartic relations defining the rapidity curve."""
    k, kp = p.coupling.k, p.coupling.kprime
    A, B, C, D = p.powers()
    return np.array(
        [
            k * A + kp * C - D,
            k * B + kp * D - C,
            A + kp * B - k * D,
            kp * A + B - k * C,
        ]
    )


def _root(value: complex, N: int, branch: int) -> complex:
    if value == 0:
        return 0j
    return complex(value) ** (1.0 / N) * root_of_unity(N, branch)


def sample_rapidity(
    coupling: Coupling,
    B: complex,
    D: complex,
    N: int,
    branch_a: int = 0,
    branch_b: int = 0,
    branch_c: int = 0,
    branch_d: int = 0,
) -> RapidityPoint:
    """Point on the curve with prescribed ``b**N = B`` and ``d**N = D``.

    Given ``k**2 + k'**2 = 1`` the four relations reduce to
    ``A = k D - k' B`` and ``C = k B + k' D``; the branch arguments pick the
    N-th roots (branch 0 is the principal root).
    """
    if B == 0 and D == 0:
        raise InvalidConfigError("(B, D) must not both vanish")
    k, kp = coupling.k, coupling.kprime
    A = k * D - kp * B
    C = k * B + kp * D
    return RapidityPoint.normalized(
        _root(A, N, branch_a),
        _root(B, N, branch_b),
        _root(C, N, branch_c),
        _root(D, N, branch_d),
        coupling,
        N,
    )


def random_rapidity(coupling: Coupling, N: int, rng: np.random.Generator) -> RapidityPoint:
    B, D = rng.normal(size=2) + 1j * rng.normal(size=2)
    branches = rng.integers(0, N, size=4)
    return sample_rapidity(coupling, complex(B), complex(D), N, *map(int, branches))


def superintegrable_point(
    coupling: Coupling, N: int, branch_ab: int = 0, branch_cd: int = 0
) -> RapidityPoint:
    """The point with ``a = b`` and ``c = d``, which sits at ``lambda = 1``."""
    k, kp = coupling.k, coupling.kprime
    if k == 0:
        raise DomainError("superintegrable point needs k != 0")
    A = k / (1.0 + kp)
    a = _root(A, N, branch_ab)
    c = root_of_unity(N, branch_cd)
    return RapidityPoint.normalized(a, a, c, c, coupling, N)


def _ratio_factors(p: RapidityPoint, q: RapidityPoint, js):
    w = root_of_unity(p.N)
    ap, bp, cp, dp = p.vector
    aq, bq, cq, dq = q.vector
    wj = np.array([w**j for j in js])
    w_num = dp * bq - ap * cq * wj
    w_den = bp * dq - cp * aq * wj
    wb_num = w * ap * dq - dp * aq * wj
    wb_den = cp * bq - bp * cq * wj
    return w_num, w_den, wb_num, wb_den


def weights(p: RapidityPoint, q: RapidityPoint, pole_tol: float = 1e-14) -> WeightTable:
    """Boltzmann weight tables ``W[n]``, ``Wbar[n]`` for ``n = 0..N-1`` with ``W[0] = Wbar[0] = 1``."""
    if p.N != q.N:
        raise InvalidConfigError("rapidities must share N")
    N = p.N
    js = np.arange(1, N)
    w_num, w_den, wb_num, wb_den = _ratio_factors(p, q, js)
    for name, den in (("b_p d_q - c_p a_q w^j", w_den), ("c_p b_q - b_p c_q w^j", wb_den)):
        bad = np.flatnonzero(np.abs(den) <= pole_tol)
        if bad.size:
            raise PoleError(f"weight denominator {name} vanishes at j={int(js[bad[0]])}")
    W = np.concatenate([[1.0 + 0j], np.cumprod(w_num / w_den)])
    Wbar = np.concatenate([[1.0 + 0j], np.cumprod(wb_num / wb_den)])
    return WeightTable(W=W, Wbar=Wbar)


def period_products(p: RapidityPoint, q: RapidityPoint) -> tuple[complex, complex]:
    """Products of the W and Wbar ratio factors over one full period ``j = 1..N``.

    Both equal 1 exactly when the weights are N-periodic.
    """
    js = np.arange(1, p.N + 1)
    w_num, w_den, wb_num, wb_den = _ratio_factors(p, q, js)
    return complex(np.prod(w_num / w_den)), complex(np.prod(wb_num / wb_den))


def transfer_matrix(p: RapidityPoint, q: RapidityPoint, L: int) -> np.ndarray:
    """``T[s, s'] = prod_l Wbar(s_l - s'_l) W(s_l - s'_{l+1})`` with ``s'_{L+1} = s'_1``."""
    cfg = LatticeConfig(p.N, L)
    tab = weights(p, q)
    N = cfg.N
    digits = basis_digits(N, L)
    T = np.ones((cfg.dim, cfg.dim), dtype=complex)
    for l in range(L):
        s = digits[:, l][:, None]
        same = digits[:, l][None, :]
        nxt = digits[:, (l + 1) % L][None, :]
        T *= tab.Wbar[(s - same) % N] * tab.W[(s - nxt) % N]
    return T


def hyperelliptic_coords(p: RapidityPoint) -> tuple[complex, complex, complex]:
    """``(t, lambda, residual)`` with ``t = ab/cd``, ``lambda = (d/c)**N``."""
    if p.c == 0 or p.d == 0:
        raise PoleError("hyperelliptic coordinates need c != 0 and d != 0")
    k, kp = p.coupling.k, p.coupling.kprime
    t = p.a * p.b / (p.c * p.d)
    lam = (p.d / p.c) ** p.N
    residual = t**p.N - (1 - kp * lam) * (1 - kp / lam) / k**2
    return complex(t), complex(lam), complex(residual)


def apply_R(p: RapidityPoint) -> RapidityPoint:
    """Curve automorphism ``(a, b, c, d) -> (b, w a, d, c)``."""
    w = root_of_unity(p.N)
    return RapidityPoint.normalized(p.b, w * p.a, p.d, p.c, p.coupling, p.N)


def order_parameter_conjecture(N: int, j: int, kprime: float) -> float:
    """Conjectured ``<Z_0^j> = (1 - k'^2)^(j (N - j) / (2 N^2))``."""
    if not 0 <= j <= N - 1:
        raise DomainError(f"j must lie in 0..{N - 1}")
    if abs(kprime) > 1:
        raise DomainError(f"|k'| must be <= 1, got {kprime}")
    exponent = j * (N - j) / (2 * N**2)
    if exponent == 0:
        return 1.0
    return (1.0 - kprime**2) ** exponent
