"""Structure constants of the N=2 superconformal algebra in the NS sector.

Elements of the algebra are dictionaries ``{Mode: Fraction}``. The central
charge enters as the formal central basis element ``C``, so
``[L_m, L_n] = (m - n) L_{m+n} + (m^3 - m)/12 delta_{m,-n} C``. Everything is
exact rational arithmetic.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Callable, NamedTuple

from ..errors import InvalidConfigError

KINDS = ("L", "J", "Gplus", "Gminus", "C")
HALF = Fraction(1, 2)


class Mode(NamedTuple):
    kind: str
    index: Fraction | None = None

    def __repr__(self):
        if self.kind == "C":
            return "C"
        return f"{self.kind}_{self.index}"


def mode(kind: str, index=None) -> Mode:
    if kind not in KINDS:
        raise InvalidConfigError(f"unknown mode kind {kind!r}")
    if kind == "C":
        return Mode("C", None)
    idx = Fraction(index)
    if kind in ("L", "J") and idx.denominator != 1:
        raise InvalidConfigError(f"{kind} modes carry integer indices, got {idx}")
    if kind in ("Gplus", "Gminus") and (idx - HALF).denominator != 1:
        raise InvalidConfigError(f"G modes carry half-odd indices, got {idx}")
    return Mode(kind, idx)


C = Mode("C", None)


def parity(m: Mode) -> int:
    return 1 if m.kind in ("Gplus", "Gminus") else 0


def _add(out: dict, key: Mode, coeff) -> None:
    if coeff == 0:
        return
    v = out.get(key, Fraction(0)) + coeff
    if v == 0:
        out.pop(key, None)
    else:
        out[key] = v


def _table(x: Mode, y: Mode) -> dict | None:
    """Tabulated bracket entries; ``None`` when only the reversed order is tabulated."""
    out: dict = {}
    kx, ky = x.kind, y.kind
    if kx == "C" or ky == "C":
        return out
    m, n = x.index, y.index
    if kx == "L" and ky == "L":
        _add(out, Mode("L", m + n), m - n)
        if m == -n:
            _add(out, C, (m**3 - m) / 12)
        return out
    if kx == "J" and ky == "J":
        if m == -n:
            _add(out, C, m / 3)
        return out
    if kx == "L" and ky == "J":
        _add(out, Mode("J", m + n), -n)
        return out
    if kx == "L" and ky in ("Gplus", "Gminus"):
        _add(out, Mode(ky, m + n), m / 2 - n)
        return out
    if kx == "J" and ky in ("Gplus", "Gminus"):
        _add(out, Mode(ky, m + n), 1 if ky == "Gplus" else -1)
        return out
    if kx == ky and kx in ("Gplus", "Gminus"):
        return out
    if kx == "Gplus" and ky == "Gminus":
        p, q = m, n
        _add(out, Mode("L", p + q), Fraction(2))
        _add(out, Mode("J", p + q), p - q)
        if p == -q:
            _add(out, C, (p * p - Fraction(1, 4)) / 3)
        return out
    return None


def sca_bracket(x: Mode, y: Mode) -> dict:
    """Graded bracket of two modes: commutator, or anticommutator when both are G modes."""
    out = _table(x, y)
    if out is not None:
        return out
    rev = _table(y, x)
    sign = Fraction(1) if parity(x) and parity(y) else Fraction(-1)
    return {k: sign * v for k, v in rev.items()}


Bracket = Callable[[Mode, Mode], dict]


def bracket_elements(u: dict, v: dict, bracket: Bracket = sca_bracket) -> dict:
    out: dict = {}
    for mx, cx in u.items():
        for my, cy in v.items():
            for k, c in bracket(mx, my).items():
                _add(out, k, cx * cy * c)
    return out


def _parity_of(elem: dict) -> int:
    ps = {parity(m) for m in elem}
    if len(ps) > 1:
        raise InvalidConfigError("element is not homogeneous")
    return ps.pop() if ps else 0


def jacobi_defect(x: Mode, y: Mode, z: Mode, bracket: Bracket = sca_bracket) -> dict:
    """``[x,[y,z]] - [[x,y],z] - (-1)^{|x||y|} [y,[x,z]]``."""
    X, Y, Z = {x: Fraction(1)}, {y: Fraction(1)}, {z: Fraction(1)}
    out: dict = {}
    for k, c in bracket_elements(X, bracket_elements(Y, Z, bracket), bracket).items():
        _add(out, k, c)
    for k, c in bracket_elements(bracket_elements(X, Y, bracket), Z, bracket).items():
        _add(out, k, -c)
    sign = -1 if parity(x) and parity(y) else 1
    for k, c in bracket_elements(Y, bracket_elements(X, Z, bracket), bracket).items():
        _add(out, k, -sign * c)
    return out


def window_modes(window: int) -> list[Mode]:
    """``L_m, J_m`` with ``|m| <= window``, ``G^pm_p`` with ``|p| < window``, and ``C``."""
    if window < 1:
        raise InvalidConfigError("window must be >= 1")
    ints = range(-window, window + 1)
    halves = [Fraction(2 * j + 1, 2) for j in range(-window, window)]
    modes = [Mode("L", Fraction(m)) for m in ints]
    modes += [Mode("J", Fraction(m)) for m in ints]
    modes += [Mode("Gplus", p) for p in halves]
    modes += [Mode("Gminus", p) for p in halves]
    modes.append(C)
    return modes


def jacobi_residual(window: int, bracket: Bracket = sca_bracket) -> Fraction:
    """Largest absolute coefficient of the graded Jacobi defect over all mode triples in the window."""
    worst = Fraction(0)
    for x, y, z in itertools.product(window_modes(window), repeat=3):
        for c in jacobi_defect(x, y, z, bracket).values():
            worst = max(worst, abs(c))
    return worst
