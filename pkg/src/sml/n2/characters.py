"""Discrete-series data and theta-quotient characters of the N=2 algebra.

The character of label ``(k, l, m)`` in twist ``(a, b)`` is evaluated as

    e^{pi i (1/2 - (l+1)/K)} Th[1/2 + (l+1)/K, 1/2](0, K tau) Th[a, b](z, tau)
    -------------------------------------------------------------------------
    Th[1/2 + (l-m+1+2a)/(2K), b](z, K tau) Th[1/2 - (l+m+1-2a)/(2K), b](z, K tau)

with ``K = k + 2`` and ``Th = theta / eta^3``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from ..errors import ExtractionError, LabelError, PoleError
from . import series
from .theta import ModularPoint, eta, theta_raw, theta_terms

PRINTED = "printed"
QUARTER = "quarter"


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        return Fraction(x).limit_denominator(10**6)
    return Fraction(x)


@dataclass(frozen=True)
class DiscreteLabel:
    k: int
    l: int
    m: int

    def __post_init__(self):
        if self.k < 1:
            raise LabelError(f"k must be >= 1, got {self.k}")
        if (self.l - self.m) % 2:
            raise LabelError(f"l - m must be even, got l={self.l}, m={self.m}")
        if not abs(self.m) <= self.l <= self.k:
            raise LabelError(f"need |m| <= l <= k, got k={self.k}, l={self.l}, m={self.m}")

    @property
    def K(self) -> int:
        return self.k + 2


@dataclass(frozen=True)
class HWData:
    c: Fraction
    h: Fraction
    Q: Fraction

    @property
    def leading_exponent(self) -> Fraction:
        return self.h - self.c / 24


def hw_data(label: DiscreteLabel, convention: str = PRINTED) -> HWData:
    """Central charge, conformal weight and U(1) charge as exact rationals.

    ``convention="printed"`` gives ``h = (l^2 + 2l - m^2)/(k+2)``;
    ``"quarter"`` divides that by 4.
    """
    K = label.K
    c = Fraction(3 * label.k, K)
    h = Fraction(label.l**2 + 2 * label.l - label.m**2, K)
    if convention == QUARTER:
        h /= 4
    elif convention != PRINTED:
        raise ValueError(f"unknown convention {convention!r}")
    return HWData(c=c, h=h, Q=Fraction(label.m, K))


def labels(k: int) -> list[DiscreteLabel]:
    return [
        DiscreteLabel(k, l, m)
        for l in range(k + 1)
        for m in range(-l, l + 1)
        if (l - m) % 2 == 0
    ]


@dataclass(frozen=True)
class TwistPair:
    a: Fraction
    b: Fraction

    def __post_init__(self):
        object.__setattr__(self, "a", _frac(self.a))
        object.__setattr__(self, "b", _frac(self.b))
        for v in (self.a, self.b):
            if not Fraction(-1, 2) <= v <= Fraction(1, 2):
                raise LabelError(f"twist components must lie in [-1/2, 1/2], got {v}")


NS = TwistPair(Fraction(0), Fraction(0))
RAMOND = TwistPair(Fraction(-1, 2), Fraction(-1, 2))


def sector(name: str) -> TwistPair:
    key = name.upper()
    if key == "NS":
        return NS
    if key in ("R", "RAMOND"):
        return RAMOND
    raise LabelError(f"unknown sector {name!r}")


@dataclass(frozen=True)
class CharacterLayout:
    prefactor: complex
    s0: Fraction
    s1: Fraction
    s2: Fraction
    a: Fraction
    b: Fraction
    K: int


def layout(label: DiscreteLabel, twist: TwistPair) -> CharacterLayout:
    K = label.K
    l, m = label.l, label.m
    a, b = twist.a, twist.b
    s0 = Fraction(1, 2) + Fraction(l + 1, K)
    s1 = Fraction(1, 2) + (l - m + 1 + 2 * a) / (2 * K)
    s2 = Fraction(1, 2) - (l + m + 1 - 2 * a) / (2 * K)
    pref = cmath.exp(1j * math.pi * (0.5 - (l + 1) / K))
    return CharacterLayout(pref, s0, s1, s2, a, b, K)


def _theta_mass(s, t, z, tau, terms=None):
    """Theta values and the l1 mass of their terms; ``z`` may be an array."""
    z = np.asarray(z, dtype=complex)
    if terms is None:
        terms = theta_terms(tau, complex(np.max(np.abs(z.imag), initial=0.0)) * 1j)
    lo = math.ceil(-terms - s)
    hi = math.floor(terms - s)
    nu = np.arange(lo, hi + 1) + s
    vals = np.exp(1j * np.pi * nu * nu * tau + 2j * np.pi * np.multiply.outer(z + t, nu))
    return np.sum(vals, axis=-1), np.sum(np.abs(vals), axis=-1)


def character_grid(
    label: DiscreteLabel, twist: TwistPair, z, tau, pole_tol: float = 1e-12, terms: int | None = None
) -> np.ndarray:
    """Character at every ``z`` of an array, for one ``tau``.

    ``terms`` overrides the automatic cutoff on ``|n + s|`` in every theta factor.
    """
    lay = layout(label, twist)
    tau, K = complex(tau), lay.K
    z = np.asarray(z, dtype=complex)
    th0, _ = _theta_mass(float(lay.s0), 0.5, 0j, K * tau, terms)
    th_ab, _ = _theta_mass(float(lay.a), float(lay.b), z, tau, terms)
    th1, m1 = _theta_mass(float(lay.s1), float(lay.b), z, K * tau, terms)
    th2, m2 = _theta_mass(float(lay.s2), float(lay.b), z, K * tau, terms)
    for val, mass in ((th1, m1), (th2, m2)):
        if np.any(np.abs(val) <= pole_tol * mass):
            raise PoleError(f"denominator theta vanishes on the z grid at tau={tau}")
    # the four eta^-3 factors reduce to eta(K tau)^3 / eta(tau)^3
    eta_ratio = (eta(K * tau) / eta(tau)) ** 3
    return lay.prefactor * th0 * th_ab / (th1 * th2) * eta_ratio


def character(
    label: DiscreteLabel, twist: TwistPair, pt: ModularPoint, pole_tol: float = 1e-12, terms: int | None = None
) -> complex:
    return complex(character_grid(label, twist, complex(pt.z), pt.tau, pole_tol, terms))


def ns_character(label: DiscreteLabel, pt: ModularPoint) -> complex:
    """Neveu-Schwarz character, i.e. the quotient at twist ``(0, 0)``."""
    K = label.K
    tau, z = complex(pt.tau), complex(pt.z)
    s0 = 0.5 + (label.l + 1) / K
    s1 = 0.5 + (label.l - label.m + 1) / (2 * K)
    s2 = 0.5 - (label.l + label.m + 1) / (2 * K)
    num = theta_raw(s0, 0.5, 0j, K * tau) * theta_raw(0.0, 0.0, z, tau)
    den = theta_raw(s1, 0.0, z, K * tau) * theta_raw(s2, 0.0, z, K * tau)
    pref = cmath.exp(1j * math.pi * (0.5 - (label.l + 1) / K))
    return complex(pref * num / den * (eta(K * tau) / eta(tau)) ** 3)


def z_period_phase(label: DiscreteLabel, twist: TwistPair) -> complex:
    """Predicted ratio ``Ch(z + 1) / Ch(z)`` from the theta quasi-periodicities."""
    lay = layout(label, twist)
    return cmath.exp(2j * math.pi * float(lay.a - lay.s1 - lay.s2))


@dataclass
class Expansion:
    lead_exponent: Fraction
    lead_charge: Fraction
    terms: list                 # (exponent, charge, coefficient) sorted


def expand_character(label: DiscreteLabel, twist: TwistPair, orders: int | Fraction = 4,
                     cutoff: float = 1e-9) -> Expansion:
    """Formal ``q``/``y`` expansion up to ``orders`` above the leading q-power.

    Raises :class:`~sml.errors.ExpansionError` when a denominator theta has
    two dominant terms, since its inverse then depends on the annulus in
    ``y``.
    """
    lay = layout(label, twist)
    order = Fraction(orders)
    K = lay.K
    numer = [
        series.theta_factor(lay.s0, Fraction(1, 2), K, False, order),
        series.theta_factor(lay.a, lay.b, 1, True, order),
    ]
    denom = [
        series.theta_factor(lay.s1, lay.b, K, True, order),
        series.theta_factor(lay.s2, lay.b, K, True, order),
    ]
    lead_q, lead_y, lead_c, unit = series.combine(numer, denom, order, lay.prefactor)
    eta_unit = series.mul_units(
        series.euler_factor(K, 3, order), series.euler_factor(1, -3, order), order
    )
    unit = series.mul_units(unit, eta_unit, order)
    lead_q += Fraction(3 * K - 3, 24)
    terms = []
    for (qe, ye), c in unit.items():
        coeff = lead_c * c
        if abs(coeff) > cutoff:
            terms.append((lead_q + qe, lead_y + ye, complex(coeff)))
    terms.sort(key=lambda r: (r[0], r[1]))
    low = min(t[0] for t in terms)
    lead_charge = min((t for t in terms if t[0] == low), key=lambda r: -abs(r[2]))[1]
    return Expansion(lead_exponent=low, lead_charge=lead_charge, terms=terms)


@dataclass
class LeadingBehavior:
    label: DiscreteLabel
    twist: TwistPair
    exponent_estimates: dict            # |q| -> estimated leading exponent
    exponent: float
    stable: bool
    charge: float
    charge_fraction: float              # fractional part of the charges found
    charge_grid_ok: bool
    significant_charges: list
    expected: dict = field(default_factory=dict)     # convention -> h - c/24
    matching_conventions: list = field(default_factory=list)


def _fourier_modes(label, twist, q_abs, samples):
    zs = np.arange(samples) / samples
    tau = ModularPoint.from_nome(q_abs).tau
    f = character_grid(label, twist, zs, tau)
    ratios = character_grid(label, twist, zs[:8] + 1, tau) / f[:8]
    return zs, f, ratios


def leading_behavior(
    label: DiscreteLabel,
    twist: TwistPair = NS,
    q_levels=(1e-3, 1e-4),
    samples: int = 64,
    step: float = 0.5,
    stability_tol: float = 0.02,
    match_tol: float = 0.02,
) -> LeadingBehavior:
    """Extract the leading q-exponent and its y-charge from sampled character values.

    At each ``|q|`` the character is sampled on ``z = j / samples``. The
    common fractional charge comes from ``Ch(z + 1) / Ch(z)``; after removing
    it the remaining 1-periodic function is Fourier analysed and the dominant
    mode gives the leading charge. The exponent is the log-slope of that
    mode's modulus between ``|q|`` and ``step * |q|``. Estimates at the
    different levels must agree within ``stability_tol``.
    """
    estimates = {}
    charges = {}
    fracs = []
    spread = 0.0
    significant = set()
    for q_abs in q_levels:
        mags = []
        for level in (q_abs, q_abs * step):
            zs, f, ratios = _fourier_modes(label, twist, level, samples)
            angles = np.angle(ratios) / (2 * np.pi)
            frac = float(np.mod(round(float(angles[0]), 9), 1.0))
            dev = np.abs(np.mod(angles - frac + 0.5, 1.0) - 0.5)
            spread = max(spread, float(np.max(dev)))
            fracs.append(frac)
            g = np.fft.fft(f * np.exp(-2j * np.pi * frac * zs)) / samples
            n = int(np.argmax(np.abs(g)))
            mode = n if n < samples // 2 else n - samples
            peak = abs(g[n])
            for j in np.flatnonzero(np.abs(g) > 1e-6 * peak):
                jm = int(j) if j < samples // 2 else int(j) - samples
                significant.add(round(frac + jm, 9))
            mags.append((mode, peak))
        (m1, p1), (m2, p2) = mags
        if m1 != m2:
            raise ExtractionError(f"dominant charge moved between |q|={q_abs} and {q_abs * step}")
        estimates[q_abs] = math.log(p1 / p2) / math.log(1 / step)
        charges[q_abs] = round(fracs[-1] + m1, 6)
    values = list(estimates.values())
    stable = max(values) - min(values) < stability_tol and len(set(charges.values())) == 1
    if not stable:
        raise ExtractionError(f"leading exponent unstable across |q| levels: {estimates}")
    exponent = values[-1]
    charge = charges[q_levels[-1]]
    frac_charge = float(np.mod(fracs[-1], 1.0))
    Q = hw_data(label).Q
    grid_ok = spread < 1e-8 and abs(math.remainder(frac_charge - float(Q), 1.0)) < 1e-8
    expected = {conv: hw_data(label, conv).leading_exponent for conv in (PRINTED, QUARTER)}
    matching = [conv for conv, e in expected.items() if abs(float(e) - exponent) < match_tol]
    return LeadingBehavior(
        label=label,
        twist=twist,
        exponent_estimates=estimates,
        exponent=exponent,
        stable=stable,
        charge=charge,
        charge_fraction=frac_charge,
        charge_grid_ok=grid_ok,
        significant_charges=sorted(significant),
        expected=expected,
        matching_conventions=matching,
    )
