"""Truncated formal series in ``q`` and ``y`` with rational exponents.

A factor is stored as a leading monomial ``coeff * q^qe * y^ye`` times a
unit series whose q-exponents are all ``>= 0``. Products of units are
truncated at a relative q-order, which is exact because no exponent is
negative.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction

from ..errors import ExpansionError


def _phase(x: Fraction) -> complex:
    """``exp(2 pi i x)`` for rational ``x``, exact at quarter turns."""
    r = x - math.floor(x)
    exact = {Fraction(0): 1 + 0j, Fraction(1, 4): 1j, Fraction(1, 2): -1 + 0j, Fraction(3, 4): -1j}
    if r in exact:
        return exact[r]
    return cmath.exp(2j * math.pi * float(r))


@dataclass
class Factor:
    lead_q: Fraction
    lead_y: Fraction
    lead_c: complex
    unit: dict = field(default_factory=dict)   # {(qe, ye): coeff}, qe >= 0


def mul_units(u: dict, v: dict, order: Fraction) -> dict:
    out: dict = {}
    for (q1, y1), c1 in u.items():
        if q1 > order:
            continue
        for (q2, y2), c2 in v.items():
            qe = q1 + q2
            if qe > order:
                continue
            key = (qe, y1 + y2)
            out[key] = out.get(key, 0j) + c1 * c2
    return out


def invert_unit(u: dict, order: Fraction) -> dict:
    rest = {k: -c for k, c in u.items() if k != (Fraction(0), Fraction(0))}
    if any(qe == 0 for qe, _ in rest):
        raise ExpansionError("unit series has several q^0 terms; inversion depends on |y|")
    if abs(u.get((Fraction(0), Fraction(0)), 0) - 1) > 1e-12:
        raise ExpansionError("unit series must start with 1")
    gap = min((qe for qe, _ in rest), default=None)
    out = {(Fraction(0), Fraction(0)): 1 + 0j}
    if gap is None:
        return out
    power = dict(out)
    for _ in range(int(order / gap) + 1):
        power = mul_units(power, rest, order)
        if not power:
            break
        for k, c in power.items():
            out[k] = out.get(k, 0j) + c
    return out


def theta_factor(s: Fraction, t: Fraction, K: int, with_z: bool, order: Fraction) -> Factor:
    """Formal ``theta[s, t](z or 0, K tau)`` as ``sum_nu q^(K nu^2 / 2) y^nu e^(2 pi i nu t)``."""
    K = Fraction(K)
    nu0 = s - math.floor(s + Fraction(1, 2))   # representative in [-1/2, 1/2)
    span = int(math.isqrt(int(2 * (order + 1) / K) + 1)) + 2
    terms = {}
    lead_q = K * nu0 * nu0 / 2
    for n in range(-span - 1, span + 2):
        nu = nu0 + n
        qe = K * nu * nu / 2 - lead_q
        if qe > order:
            continue
        ye = nu if with_z else Fraction(0)
        key = (qe, ye)
        terms[key] = terms.get(key, 0j) + _phase(nu * t)
    lead_y = nu0 if with_z else Fraction(0)
    lead_c = _phase(nu0 * t)
    unit = {}
    for (qe, ye), c in terms.items():
        key = (qe, ye - lead_y)
        unit[key] = unit.get(key, 0j) + c / lead_c
    unit = {k: c for k, c in unit.items() if abs(c) > 1e-14}
    if (Fraction(0), Fraction(0)) not in unit:
        raise ExpansionError("theta factor vanishes identically at leading order")
    return Factor(lead_q, lead_y, lead_c, unit)


def euler_factor(K: int, power: int, order: Fraction) -> dict:
    """Unit series of ``prod_{n>=1} (1 - q^(K n))^power``."""
    out = {(Fraction(0), Fraction(0)): 1 + 0j}
    single = {(Fraction(0), Fraction(0)): 1 + 0j}
    n = 1
    while K * n <= order:
        single = mul_units(single, {(Fraction(0), Fraction(0)): 1 + 0j, (Fraction(K * n), Fraction(0)): -1 + 0j}, order)
        n += 1
    if power >= 0:
        for _ in range(power):
            out = mul_units(out, single, order)
    else:
        inv = invert_unit(single, order)
        for _ in range(-power):
            out = mul_units(out, inv, order)
    return out


def combine(numer: list[Factor], denom: list[Factor], order: Fraction, prefactor: complex = 1 + 0j):
    """Leading monomial and unit series of ``prefactor * prod(numer) / prod(denom)``."""
    lead_q = sum((f.lead_q for f in numer), Fraction(0)) - sum((f.lead_q for f in denom), Fraction(0))
    lead_y = sum((f.lead_y for f in numer), Fraction(0)) - sum((f.lead_y for f in denom), Fraction(0))
    lead_c = prefactor
    unit = {(Fraction(0), Fraction(0)): 1 + 0j}
    for f in numer:
        lead_c *= f.lead_c
        unit = mul_units(unit, f.unit, order)
    for f in denom:
        lead_c /= f.lead_c
        unit = mul_units(unit, invert_unit(f.unit, order), order)
    return lead_q, lead_y, lead_c, unit
