"""Superintegrable chiral Potts quantum chain and the Onsager algebra it generates."""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import HermiticityError, InvalidConfigError
from .weyl import (
    DEFAULT_TOL,
    LatticeConfig,
    commutator,
    fro,
    kron_all,
    make_clock,
    make_shift,
    root_of_unity,
    site_embed,
)


@dataclass(frozen=True)
class SIChainParams:
    N: int
    L: int
    kprime: float = 0.0

    def __post_init__(self):
        LatticeConfig(self.N, self.L)


def build_H0(N: int, L: int) -> np.ndarray:
    """``-2 sum_l sum_{n=1}^{N-1} X_l^n / (1 - w^-n)``."""
    cfg = LatticeConfig(N, L)
    X = make_shift(N)
    local = sum(
        np.linalg.matrix_power(X, n) / (1 - root_of_unity(N, -n)) for n in range(1, N)
    )
    return -2 * sum(site_embed(local, l, cfg) for l in range(1, L + 1))


def build_H1(N: int, L: int) -> np.ndarray:
    """``-2 sum_l sum_{n=1}^{N-1} Z_l^n Z_{l+1}^{N-n} / (1 - w^-n)``, with ``Z_{L+1} = Z_1``."""
    cfg = LatticeConfig(N, L)
    Z = make_clock(N)
    H = np.zeros((cfg.dim, cfg.dim), dtype=complex)
    for l in range(1, L + 1):
        nxt = l % L + 1
        for n in range(1, N):
            zn = site_embed(np.linalg.matrix_power(Z, n), l, cfg)
            zm = site_embed(np.linalg.matrix_power(Z, N - n), nxt, cfg)
            H += zn @ zm / (1 - root_of_unity(N, -n))
    return -2 * H


def build_H(N: int, L: int, kprime: float) -> np.ndarray:
    return build_H0(N, L) + kprime * build_H1(N, L)


def spin_shift(N: int, L: int) -> np.ndarray:
    """Global Z_N generator ``prod_l X_l``."""
    LatticeConfig(N, L)
    return kron_all([make_shift(N)] * L)


def seed_A(H0: np.ndarray, H1: np.ndarray, N: int):
    return -(2.0 / N) * H0, -(2.0 / N) * H1


def dolan_grady_residual(A0: np.ndarray, A1: np.ndarray) -> tuple[float, float]:
    """Frobenius residuals of ``[A1,[A1,[A1,A0]]] = 16 [A1,A0]`` and the same with roles swapped."""

    def triple(x, y):
        c = commutator(x, y)
        return fro(commutator(x, commutator(x, c)) - 16 * c)

    return triple(A1, A0), triple(A0, A1)


def dolan_grady_scale(A0, A1) -> tuple[float, float]:
    """Natural magnitudes ``||A0|| ||A1||^2`` and ``||A1|| ||A0||^2`` of the two residuals."""
    n0, n1 = fro(A0), fro(A1)
    return n0 * n1**2, n1 * n0**2


@dataclass
class OnsagerFamily:
    """Operators ``A_m`` for ``|m| <= M`` and ``G_m`` for ``1 <= m <= M``.

    ``G(0)`` is zero and ``G(-m) = -G(m)``.
    """

    A: dict[int, np.ndarray]
    G: dict[int, np.ndarray]
    M: int
    dim: int = field(init=False)

    def __post_init__(self):
        self.dim = self.A[0].shape[0]

    def g(self, m: int) -> np.ndarray:
        if m == 0:
            return np.zeros((self.dim, self.dim), dtype=complex)
        if m < 0:
            return -self.G[-m]
        return self.G[m]

    def has_a(self, m: int) -> bool:
        return m in self.A

    def has_g(self, m: int) -> bool:
        return m == 0 or abs(m) in self.G


def onsager_extend(A0, A1, M: int, tol: float = DEFAULT_TOL) -> OnsagerFamily:
    """Generate the window ``|m| <= M`` by the recursion through ``G_1 = [A1, A0]/4``."""
    if M < 1:
        raise InvalidConfigError(f"window M must be >= 1, got {M}")
    r1, r0 = dolan_grady_residual(A0, A1)
    s1, s0 = dolan_grady_scale(A0, A1)
    if r1 > tol * max(s1, 1.0) or r0 > tol * max(s0, 1.0):
        warnings.warn(
            f"Dolan-Grady residuals ({r1:.3e}, {r0:.3e}) exceed tolerance; "
            "the recursion need not close into an Onsager algebra",
            RuntimeWarning,
            stacklevel=2,
        )
    A0 = np.asarray(A0, dtype=complex)
    A1 = np.asarray(A1, dtype=complex)
    G1 = commutator(A1, A0) / 4
    A = {0: A0, 1: A1}
    for m in range(1, M):
        A[m + 1] = A[m - 1] - commutator(A[m], G1) / 2
    for m in range(0, -M, -1):
        A[m - 1] = A[m + 1] + commutator(A[m], G1) / 2
    G = {m: commutator(A[m], A0) / 4 for m in range(1, M + 1)}
    return OnsagerFamily(A=A, G=G, M=M)


@dataclass
class RelationReport:
    max_residual: float
    scale: float
    checked: int
    skipped: list = field(default_factory=list)


def onsager_relation_residuals(fam: OnsagerFamily) -> RelationReport:
    """Largest violation of the three Onsager relations inside the window.

    Relations whose index arithmetic leaves the window are listed in
    ``skipped`` rather than extrapolated. ``scale`` is ``max_m ||A_m||^3``,
    the size of the cubic terms ``[A_m, G_l]``.
    """
    M = fam.M
    worst = 0.0
    checked = 0
    skipped = []
    idx = range(-M, M + 1)
    for m in idx:
        for l in idx:
            if fam.has_g(m - l):
                r = fro(commutator(fam.A[m], fam.A[l]) - 4 * fam.g(m - l))
                worst = max(worst, r)
                checked += 1
            else:
                skipped.append(("[A,A]", m, l))
            if fam.has_g(l):
                if fam.has_a(m - l) and fam.has_a(m + l):
                    r = fro(commutator(fam.A[m], fam.g(l)) - 2 * (fam.A[m - l] - fam.A[m + l]))
                    worst = max(worst, r)
                    checked += 1
                else:
                    skipped.append(("[A,G]", m, l))
            if fam.has_g(m) and fam.has_g(l):
                worst = max(worst, fro(commutator(fam.g(m), fam.g(l))))
                checked += 1
    scale = max(fro(a) for a in fam.A.values()) ** 3
    return RelationReport(max_residual=worst, scale=scale, checked=checked, skipped=skipped)


def hermiticity_residual(H: np.ndarray) -> float:
    return fro(H - H.conj().T)


def spectrum(H: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    """Ascending real eigenvalues of a Hermitian operator."""
    H = np.asarray(H, dtype=complex)
    scale = max(fro(H), 1.0)
    r = hermiticity_residual(H)
    if r > tol * scale:
        raise HermiticityError(f"operator is not Hermitian: ||H - H^dag|| = {r:.3e}")
    vals = np.linalg.eigvals(H)
    if np.max(np.abs(vals.imag), initial=0.0) > tol * scale:
        raise HermiticityError("eigenvalues carry imaginary parts above tolerance")
    return np.sort(vals.real)
