"""Finite linear groups, commuting-pair counts and the A-type hypersurface quotient."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import EnumerationError, InvalidConfigError

MAX_ORDER = 20000
ROUND_DIGITS = 9


def _key(mat: np.ndarray) -> tuple:
    r = np.round(mat, ROUND_DIGITS) + 0.0   # fold -0.0 into 0.0
    return tuple(np.concatenate([r.real.ravel(), r.imag.ravel()]) + 0.0)


@dataclass
class FiniteMatrixGroup:
    """Elements stored as an array of shape ``(order, d, d)``."""

    elements: np.ndarray
    name: str = ""

    def __post_init__(self):
        self.elements = np.asarray(self.elements, dtype=complex)
        self._index = {_key(g): i for i, g in enumerate(self.elements)}
        if len(self._index) != len(self.elements):
            raise InvalidConfigError("group elements are not distinct")

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def degree(self) -> int:
        return self.elements.shape[1]

    def index_of(self, mat) -> int:
        try:
            return self._index[_key(np.asarray(mat))]
        except KeyError:
            raise InvalidConfigError("matrix is not an element of the group") from None

    def contains(self, mat) -> bool:
        return _key(np.asarray(mat)) in self._index

    def multiplication_table(self) -> np.ndarray:
        n = self.order
        table = np.empty((n, n), dtype=int)
        for i, g in enumerate(self.elements):
            row = np.einsum("ab,jbc->jac", g, self.elements)
            for j in range(n):
                table[i, j] = self.index_of(row[j])
        return table

    def is_closed(self) -> bool:
        try:
            self.multiplication_table()
            for g in self.elements:
                self.index_of(np.linalg.inv(g))
        except InvalidConfigError:
            return False
        return self.contains(np.eye(self.degree))

    def is_special(self, tol: float = 1e-10) -> bool:
        return bool(np.all(np.abs(np.linalg.det(self.elements) - 1) < tol))


def generate_group(generators, name: str = "", max_order: int = MAX_ORDER) -> FiniteMatrixGroup:
    """Closure of ``generators`` under multiplication (breadth first)."""
    gens = [np.asarray(g, dtype=complex) for g in generators]
    if not gens:
        raise InvalidConfigError("need at least one generator")
    ident = np.eye(gens[0].shape[0], dtype=complex)
    seen = {_key(ident): ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for g in frontier:
            for s in gens:
                h = g @ s
                k = _key(h)
                if k not in seen:
                    seen[k] = h
                    nxt.append(h)
                    if len(seen) > max_order:
                        raise EnumerationError(f"group order exceeds {max_order}")
        frontier = nxt
    return FiniteMatrixGroup(np.array(list(seen.values())), name=name)


def quaternion_group() -> FiniteMatrixGroup:
    """Q8 in SL_2(C), generated by ``i sigma_z`` and ``i sigma_y``."""
    i_ = np.array([[1j, 0], [0, -1j]])
    j_ = np.array([[0, 1], [-1, 0]], dtype=complex)
    return generate_group([i_, j_], name="Q8")


def binary_dihedral_group(n: int) -> FiniteMatrixGroup:
    """Binary dihedral group of order ``4 n`` in SL_2(C)."""
    zeta = np.exp(1j * np.pi / n)
    a = np.diag([zeta, 1 / zeta])
    b = np.array([[0, 1], [-1, 0]], dtype=complex)
    return generate_group([a, b], name=f"BD{4 * n}")


def symmetric_group_matrices(n: int) -> FiniteMatrixGroup:
    """S_n as permutation matrices in GL_n(C)."""
    mats = []
    for perm in itertools.permutations(range(n)):
        m = np.zeros((n, n), dtype=complex)
        m[list(perm), list(range(n))] = 1
        mats.append(m)
    return FiniteMatrixGroup(np.array(mats), name=f"S{n}")


@dataclass
class AbelianDiagonalGroup:
    """A_r(n): diagonal ``g`` with ``g^(r+1) = 1`` and ``det g = 1``, stored as exponent vectors."""

    n: int
    r: int
    exponents: np.ndarray        # (order, n), entries in Z_{r+1}

    @property
    def order(self) -> int:
        return len(self.exponents)

    @property
    def modulus(self) -> int:
        return self.r + 1

    def matrices(self) -> np.ndarray:
        zeta = np.exp(2j * np.pi / self.modulus)
        diag = zeta ** self.exponents
        out = np.zeros((self.order, self.n, self.n), dtype=complex)
        idx = np.arange(self.n)
        out[:, idx, idx] = diag
        return out

    def as_matrix_group(self) -> FiniteMatrixGroup:
        return FiniteMatrixGroup(self.matrices(), name=f"A_{self.r}({self.n})")

    def is_closed(self) -> bool:
        mod = self.modulus
        weights = mod ** np.arange(self.n)
        codes = self.exponents @ weights
        for e in self.exponents:
            sums = ((self.exponents + e) % mod) @ weights
            if not np.all(np.isin(sums, codes)):
                return False
        return True


def build_Ar(n: int, r: int, max_order: int = MAX_ORDER) -> AbelianDiagonalGroup:
    if n < 2 or r < 1:
        raise InvalidConfigError(f"need n >= 2 and r >= 1, got n={n}, r={r}")
    mod = r + 1
    if mod ** (n - 1) > max_order:
        raise EnumerationError(f"|A_{r}({n})| = {mod ** (n - 1)} exceeds the budget {max_order}")
    vecs = [
        v for v in itertools.product(range(mod), repeat=n) if sum(v) % mod == 0
    ]
    return AbelianDiagonalGroup(n=n, r=r, exponents=np.array(vecs, dtype=int))


def commuting_pairs(G) -> int:
    """Number of ordered pairs ``(g, h)`` with ``gh = hg``."""
    if isinstance(G, AbelianDiagonalGroup):
        # diagonal matrices commute
        return G.order**2
    table = G.multiplication_table()
    return int(np.sum(table == table.T))


def orbifold_euler_linear(G) -> Fraction:
    """``(1/|G|) #{(g, h): gh = hg}``, the orbifold Euler number of ``C^n / G``."""
    return Fraction(commuting_pairs(G), G.order)


def conjugacy_classes(G: FiniteMatrixGroup) -> list[list[int]]:
    table = G.multiplication_table()
    n = G.order
    ident = G.index_of(np.eye(G.degree))
    inverse = np.empty(n, dtype=int)
    for i in range(n):
        inverse[i] = int(np.flatnonzero(table[i] == ident)[0])
    assigned = np.full(n, -1)
    classes = []
    for g in range(n):
        if assigned[g] >= 0:
            continue
        orbit = sorted({int(table[table[h, g], inverse[h]]) for h in range(n)})
        for x in orbit:
            assigned[x] = len(classes)
        classes.append(orbit)
    return classes


def class_and_rep_counts(G) -> tuple[int, int]:
    """Number of conjugacy classes and of irreducible representations.

    The class count comes from orbit enumeration; the irreducible count is
    equal to it by character theory.
    """
    if isinstance(G, AbelianDiagonalGroup):
        return G.order, G.order
    n_classes = len(conjugacy_classes(G))
    return n_classes, n_classes


@dataclass
class HypersurfaceCheck:
    x: complex
    y: tuple
    residual: complex
    invariance: float


def hypersurface_check(n: int, r: int, z, exponent=None) -> HypersurfaceCheck:
    """Invariants ``x = prod z_j``, ``y_j = z_j^(r+1)`` and the relation ``x^(r+1) = prod y_j``.

    Integer or Fraction inputs are evaluated exactly. ``exponent`` is an
    element of A_r(n) (exponent vector) used for the invariance check;
    by default ``(1, -1, 0, ..., 0)``.
    """
    z = list(z)
    if len(z) != n:
        raise InvalidConfigError(f"need {n} coordinates")
    mod = r + 1
    x = 1
    for v in z:
        x = x * v
    y = tuple(v**mod for v in z)
    prod_y = 1
    for v in y:
        prod_y = prod_y * v
    residual = x**mod - prod_y
    if exponent is None:
        exponent = [1, mod - 1] + [0] * (n - 2)
    exponent = [int(e) % mod for e in exponent]
    if sum(exponent) % mod:
        raise InvalidConfigError("exponent vector is not in A_r(n)")
    zeta = np.exp(2j * np.pi / mod)
    gz = [complex(v) * zeta**e for v, e in zip(z, exponent)]
    gx = np.prod(gz)
    gy = [v**mod for v in gz]
    scale = max(1.0, abs(complex(x)), max(abs(complex(v)) for v in y))
    inv = max([abs(gx - complex(x))] + [abs(a - complex(b)) for a, b in zip(gy, y)]) / scale
    return HypersurfaceCheck(x=x, y=y, residual=residual, invariance=float(inv))


def exceptional_divisor_count(r: int) -> int:
    if r < 1:
        raise InvalidConfigError("r must be >= 1")
    return r * (r + 1) * (r + 2) // 6
