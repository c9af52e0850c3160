"""Dense operator algebra on the tensor product of N-state sites.

Basis convention used by every module: site 1 is the leftmost tensor
factor, so a spin configuration ``(s_1, ..., s_L)`` sits at composite
index ``sum_l s_l * N**(L - l)`` (row-major, site 1 most significant).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import reduce

import numpy as np

from .errors import (
    CommutationError,
    DiagonalizationError,
    InvalidConfigError,
    SiteIndexError,
    SizeBudgetError,
)

MAX_DIM = 2000
DEFAULT_TOL = 1e-9


@dataclass(frozen=True)
class LatticeConfig:
    N: int
    L: int = 1
    max_dim: int = MAX_DIM

    def __post_init__(self):
        if int(self.N) != self.N or self.N < 2:
            raise InvalidConfigError(f"N must be an integer >= 2, got {self.N!r}")
        if int(self.L) != self.L or self.L < 1:
            raise InvalidConfigError(f"L must be an integer >= 1, got {self.L!r}")
        if self.dim > self.max_dim:
            raise SizeBudgetError(
                f"dimension N**L = {self.dim} exceeds the size budget {self.max_dim}"
            )

    @property
    def omega(self) -> complex:
        return root_of_unity(self.N)

    @property
    def dim(self) -> int:
        return self.N**self.L


def root_of_unity(N: int, power: int = 1) -> complex:
    """``exp(2 pi i power / N)`` with exact values at the quarter turns."""
    frac = (power % N) / N
    if frac == 0:
        return 1.0 + 0j
    if frac == 0.5:
        return -1.0 + 0j
    if frac == 0.25:
        return 1j
    if frac == 0.75:
        return -1j
    return complex(np.exp(2j * np.pi * frac))


def _check_N(N):
    if int(N) != N or N < 2:
        raise InvalidConfigError(f"N must be an integer >= 2, got {N!r}")


def make_shift(N: int) -> np.ndarray:
    """Cyclic shift ``|m> -> |m+1 mod N>``."""
    _check_N(N)
    return np.roll(np.eye(N, dtype=complex), 1, axis=0)


def make_clock(N: int, power: int = 1) -> np.ndarray:
    """Clock ``diag(1, w, ..., w**(N-1))`` with ``w = exp(2 pi i power / N)``."""
    _check_N(N)
    return np.diag([root_of_unity(N, power * m) for m in range(N)])


def site_embed(op: np.ndarray, l: int, cfg: LatticeConfig) -> np.ndarray:
    """Place the single-site ``op`` at site ``l`` (1-based) of the chain."""
    op = np.asarray(op)
    if op.shape != (cfg.N, cfg.N):
        raise InvalidConfigError(f"operator shape {op.shape} is not ({cfg.N}, {cfg.N})")
    if not 1 <= l <= cfg.L:
        raise SiteIndexError(f"site {l} outside 1..{cfg.L}")
    left = np.eye(cfg.N ** (l - 1))
    right = np.eye(cfg.N ** (cfg.L - l))
    return np.kron(np.kron(left, op), right).astype(complex)


def kron_all(ops) -> np.ndarray:
    return reduce(np.kron, ops)


def basis_digits(N: int, L: int) -> np.ndarray:
    """Array of shape ``(N**L, L)``; row ``i`` is the spin configuration at index ``i``."""
    return np.array(list(itertools.product(range(N), repeat=L)), dtype=int).reshape(N**L, L)


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b - b @ a


def fro(a) -> float:
    return float(np.linalg.norm(a))


def relative_commutator(a: np.ndarray, b: np.ndarray) -> float:
    """``||[a, b]||_F / (||a||_F ||b||_F)``, 0 when either operand vanishes."""
    denom = fro(a) * fro(b)
    if denom == 0.0:
        return 0.0
    return fro(commutator(a, b)) / denom


def is_normal(a: np.ndarray, tol: float = DEFAULT_TOL) -> bool:
    scale = max(fro(a) ** 2, 1e-300)
    return fro(a @ a.conj().T - a.conj().T @ a) <= tol * scale


def simultaneous_eigenbasis(family, tol: float = DEFAULT_TOL, seed: int = 0):
    """Common eigenbasis of a commuting family.

    Returns ``(basis, eigenvalues)`` where the columns of ``basis`` are joint
    eigenvectors and ``eigenvalues[i][j]`` is the eigenvalue of ``family[i]``
    on column ``j``.

    Degeneracies are split by diagonalizing a random real combination of the
    family drawn from ``numpy.random.default_rng(seed)``. For a normal family
    the combination is built from Hermitian and anti-Hermitian parts, so the
    basis comes out unitary. Non-normal families fall back to a general
    eigendecomposition; the basis is then only invertible, and eigenvalues are
    read off ``inv(basis) @ A @ basis``.

    Raises :class:`CommutationError` for a non-commuting pair and
    :class:`DiagonalizationError` when the conjugated members keep an
    off-diagonal residual above ``10 * tol`` relative to their norm.
    """
    family = [np.asarray(a, dtype=complex) for a in family]
    if not family:
        raise InvalidConfigError("empty operator family")
    dim = family[0].shape[0]
    for a in family:
        if a.shape != (dim, dim):
            raise InvalidConfigError("operators in the family must share one square shape")
    for i, j in itertools.combinations(range(len(family)), 2):
        r = relative_commutator(family[i], family[j])
        if r >= tol:
            raise CommutationError(
                f"operators {i} and {j} do not commute: relative norm {r:.3e}",
                pair=(i, j),
                norm=r,
            )

    rng = np.random.default_rng(seed)
    scale = max(fro(a) for a in family) or 1.0
    normal = all(is_normal(a, tol) for a in family)
    if normal:
        herm = np.zeros((dim, dim), dtype=complex)
        for a in family:
            c1, c2 = rng.uniform(0.5, 1.5, size=2)
            herm += c1 * (a + a.conj().T) / 2 + c2 * (a - a.conj().T) / 2j
        _, basis = np.linalg.eigh(herm / scale)
        inverse = basis.conj().T
    else:
        combo = sum(rng.uniform(0.5, 1.5) * a for a in family) / scale
        _, basis = np.linalg.eig(combo)
        basis = basis / np.linalg.norm(basis, axis=0)
        try:
            inverse = np.linalg.inv(basis)
        except np.linalg.LinAlgError as exc:
            raise DiagonalizationError("defective family: eigenvector matrix is singular") from exc

    eigenvalues = []
    for idx, a in enumerate(family):
        conj = inverse @ a @ basis
        diag = np.diag(conj).copy()
        off = fro(conj - np.diag(diag))
        if off >= 10 * tol * max(fro(a), 1e-300):
            raise DiagonalizationError(
                f"operator {idx} keeps off-diagonal residual {off:.3e} in the joint basis"
            )
        eigenvalues.append(diag)
    return basis, eigenvalues


def offdiagonal_residual(basis: np.ndarray, a: np.ndarray) -> float:
    """Frobenius norm of the off-diagonal part of ``a`` in ``basis``."""
    conj = np.linalg.solve(basis, a @ basis)
    return fro(conj - np.diag(np.diag(conj)))
