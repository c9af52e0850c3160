"""Verification suites run by ``sml verify``.

Each suite returns a :class:`~sml.report.Report`. Default tolerances are
the ones each property is specified at; a non-``None`` ``tol`` replaces
every non-exact tolerance in the suite.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from . import chiral_potts as cp
from . import fk_bethe as fk
from . import onsager as ons
from . import orbifold as orb
from .n2 import characters as ch
from .n2 import sca
from .errors import ExtractionError
from .n2.theta import ModularPoint, ThetaChar, eta, theta, theta_terms
from .report import Report
from .weyl import (
    LatticeConfig,
    fro,
    make_clock,
    make_shift,
    offdiagonal_residual,
    relative_commutator,
    root_of_unity,
    simultaneous_eigenbasis,
    site_embed,
)

KPRIME_GRID = (0.0, 0.25, 0.5, 0.75, 1.0)


class _Tol:
    def __init__(self, override):
        self.override = override

    def __call__(self, default: float) -> float:
        return default if self.override is None else float(self.override)


def _rc(rng):
    return complex(rng.normal(), rng.normal())


def weyl_suite(N: int = 3, L: int = 2, tol=None, seed: int = 0, **_) -> Report:
    T = _Tol(tol)
    rep = Report("weyl", config={"N": N, "L": L, "seed": seed})
    rng = np.random.default_rng(seed)
    for n in range(2, max(N, 8) + 1):
        X, Z = make_shift(n), make_clock(n)
        w = root_of_unity(n)
        rep.record("clock-shift relation", fro(Z @ X - w * X @ Z), T(1e-12), {"N": n})
        eye = np.eye(n)
        rep.record("shift^N = I", fro(np.linalg.matrix_power(X, n) - eye), T(1e-12), {"N": n})
        rep.record("clock^N = I", fro(np.linalg.matrix_power(Z, n) - eye), T(1e-12), {"N": n})
    cfg = LatticeConfig(N, L)
    op = rng.normal(size=(N, N)) + 1j * rng.normal(size=(N, N))
    worst = 0.0
    for l in range(1, L + 1):
        e = site_embed(op, l, cfg)
        worst = max(worst, abs(fro(e) - N ** ((L - 1) / 2) * fro(op)) / fro(op))
    rep.record("embedding scales the norm by N^((L-1)/2)", worst, T(1e-12), {"N": N, "L": L})
    fam = [ons.build_H(N, L, 0.5), ons.spin_shift(N, L)]
    basis, _ = simultaneous_eigenbasis(fam, seed=seed)
    rep.record(
        "joint eigenbasis of H(k') and prod X_l is unitary",
        fro(basis.conj().T @ basis - np.eye(cfg.dim)),
        T(1e-9),
        {"N": N, "L": L},
    )
    return rep


def chiral_potts_suite(N: int = 3, L: int = 2, kprime: float = 0.6, samples: int = 20,
                       tol=None, seed: int = 0, **_) -> Report:
    T = _Tol(tol)
    params = {"N": N, "L": L, "kprime": kprime, "samples": samples, "seed": seed}
    rep = Report("chiral-potts", config=params)
    rng = np.random.default_rng(seed)
    coup = cp.Coupling.from_kprime(kprime)
    pts = [cp.random_rapidity(coup, N, rng) for _ in range(2 * samples + 1)]
    rep.record(
        "sampled rapidities lie on the curve",
        max(np.max(np.abs(cp.curve_residual(p))) for p in pts),
        T(1e-12),
        {"N": N},
    )
    p = pts[0]
    per = 0.0
    for i in range(samples):
        a, b = pts[2 * i + 1], pts[2 * i + 2]
        pw, pwb = cp.period_products(a, b)
        per = max(per, abs(pw - 1), abs(pwb - 1))
    rep.record("weight periodicity over a full period", per, T(1e-10), {"N": N, "pairs": samples})
    rep.record(
        "T(p, p) = identity", fro(cp.transfer_matrix(p, p, L) - np.eye(N**L)), T(1e-10), {"N": N, "L": L}
    )
    worst = 0.0
    for i in range(samples):
        t1 = cp.transfer_matrix(p, pts[2 * i + 1], L)
        t2 = cp.transfer_matrix(p, pts[2 * i + 2], L)
        worst = max(worst, relative_commutator(t1, t2))
    rep.record("[T(p,q), T(p,q')] = 0", worst, T(1e-9), {"N": N, "L": L, "pairs": samples})
    t1 = cp.transfer_matrix(p, pts[1], L)
    t2 = cp.transfer_matrix(p, pts[2], L)
    basis, _ = simultaneous_eigenbasis([t1, t2], seed=seed)
    off = max(offdiagonal_residual(basis, t) / fro(t) for t in (t1, t2))
    rep.record("joint diagonalization of T(p,q), T(p,q')", off, T(1e-8), {"N": N, "L": L})
    hyp, rinv, rmap = 0.0, 0.0, 0.0
    w = root_of_unity(N)
    for q in pts:
        t, lam, res = cp.hyperelliptic_coords(q)
        scale = max(1.0, abs(t) ** N, abs(lam), abs(1 / lam))
        hyp = max(hyp, abs(res) / scale)
        r = cp.apply_R(q)
        tr, lr, resr = cp.hyperelliptic_coords(r)
        rinv = max(rinv, abs(resr) / scale, float(np.max(np.abs(cp.curve_residual(r)))))
        rmap = max(rmap, abs(tr - w * t) / max(1, abs(t)), abs(lr - 1 / lam) / max(1, abs(lam), abs(1 / lam)))
    rep.record("hyperelliptic relation on sampled points", hyp, T(1e-10), {"N": N})
    rep.record("R preserves the curves", rinv, T(1e-10), {"N": N})
    rep.record("R acts as (t, lambda) -> (w t, 1/lambda)", rmap, T(1e-10), {"N": N})
    if coup.k != 0:
        sp = cp.superintegrable_point(coup, N)
        t, lam, res = cp.hyperelliptic_coords(sp)
        expect = ((1 - coup.kprime) / coup.k) ** 2
        rep.record(
            "superintegrable point: lambda = 1, t^N = ((1-k')/k)^2",
            max(abs(lam - 1), abs(t**N - expect), float(np.max(np.abs(cp.curve_residual(sp))))),
            T(1e-12),
            {"N": N, "kprime": kprime},
        )
    return rep


def onsager_suite(N: int = 2, L: int = 3, kprime=None, M: int = 4, tol=None, seed: int = 0, **_) -> Report:
    T = _Tol(tol)
    grid = KPRIME_GRID if kprime is None else (float(kprime),)
    params = {"N": N, "L": L, "M": M, "kprime": list(grid)}
    rep = Report("onsager", config=params)
    H0, H1 = ons.build_H0(N, L), ons.build_H1(N, L)
    shift = ons.spin_shift(N, L)
    spectra = []
    for kp in grid:
        H = H0 + kp * H1
        scale = max(fro(H), 1.0)
        rep.record("H(k') Hermitian", ons.hermiticity_residual(H) / scale, T(1e-10), {"kprime": kp})
        vals = np.linalg.eigvals(H)
        rep.record("spectrum real", float(np.max(np.abs(vals.imag))) / scale, T(1e-10), {"kprime": kp})
        rep.record(
            "[H(k'), prod X_l] = 0", fro(H @ shift - shift @ H) / scale, T(1e-10), {"kprime": kp}
        )
        spectra.append({"N": N, "L": L, "kprime": kp, "M": M, "eigenvalues": ons.spectrum(H)})
    A0, A1 = ons.seed_A(H0, H1, N)
    r1, r0 = ons.dolan_grady_residual(A0, A1)
    s1, s0 = ons.dolan_grady_scale(A0, A1)
    rep.record("Dolan-Grady [A1,[A1,[A1,A0]]] = 16[A1,A0]", r1 / s1, T(1e-9), {"N": N, "L": L})
    rep.record("Dolan-Grady [A0,[A0,[A0,A1]]] = 16[A0,A1]", r0 / s0, T(1e-9), {"N": N, "L": L})
    fam = ons.onsager_extend(A0, A1, M)
    rel = ons.onsager_relation_residuals(fam)
    rep.record(
        "Onsager relations inside the window",
        rel.max_residual / rel.scale,
        T(1e-8),
        {"N": N, "L": L, "M": M, "checked": rel.checked, "skipped": len(rel.skipped)},
    )
    if N == 2:
        ising0 = -sum(site_embed(make_shift(2), l, LatticeConfig(2, L)) for l in range(1, L + 1))
        cfg = LatticeConfig(2, L)
        Z = make_clock(2)
        ising1 = -sum(site_embed(Z, l, cfg) @ site_embed(Z, l % L + 1, cfg) for l in range(1, L + 1))
        rep.record(
            "N=2 reduction to the Ising chain (exact)",
            max(np.max(np.abs(H0 - ising0)), np.max(np.abs(H1 - ising1))),
            0.0,
            {"L": L},
        )
    rep.notes["spectra"] = spectra
    return rep


def fk_suite(N: int = 3, L: int = 2, samples: int = 10, tol=None, seed: int = 0, **_) -> Report:
    T = _Tol(tol)
    rng = np.random.default_rng(seed)
    params = {"N": N, "L": L, "samples": samples, "seed": seed}
    rep = Report("fk-bethe", config=params)
    phases = np.exp(2j * np.pi * rng.uniform(size=3))
    U, V, W = fk.build_weyl_triple(N, *phases)
    res = fk.weyl_relation_residuals(U, V, W, root_of_unity(N))
    rep.record("Weyl triple relations", max(res.values()), T(1e-12), {"N": N})
    H = fk.build_HFK(fk.FKParams(0.7, 1.1, 0.4, *phases, P=1, N=N))
    rep.record("H_FK Hermitian", fro(H - H.conj().T) / fro(H), T(1e-12), {"N": N})
    hs = fk.InhomogeneitySet.random(N, L, rng)
    worst = 0.0
    for _ in range(samples):
        x1, x2 = _rc(rng), _rc(rng)
        worst = max(worst, relative_commutator(fk.transfer_FK(hs, x1), fk.transfer_FK(hs, x2)))
    rep.record("[T(x), T(x')] = 0", worst, T(1e-9), {"N": N, "L": L, "pairs": samples})
    gauge = 0.0
    for _ in range(samples):
        x = _rc(rng)
        xi = [_rc(rng) for _ in range(L)]
        gauge = max(gauge, fk.gauge_transfer_check(hs, x, xi) / fro(fk.transfer_FK(hs, x)))
    rep.record("gauge invariance of T(x)", gauge, T(1e-9), {"N": N, "L": L})
    rep.record(
        "T(0) closed form",
        fro(fk.transfer_FK(hs, 0) - fk.transfer_FK_at_zero(hs)) / fro(fk.transfer_FK_at_zero(hs)),
        T(1e-12),
        {"N": N, "L": L},
    )
    on, taus = 0.0, 0.0
    for i in range(samples):
        pt, _ = fk.sample_curve_point(hs, _rc(rng), root=i % 2, branches=rng.integers(0, N, size=L))
        on = max(on, fk.curve_relative_residual(pt, hs))
        for img in (fk.tau_plus(pt, N), fk.tau_minus(pt, N)):
            taus = max(taus, fk.curve_relative_residual(img, hs))
    rep.record("sampled spectral-curve points", on, T(1e-9), {"N": N, "L": L})
    rep.record("tau_+ and tau_- preserve the curve", taus, T(1e-9), {"N": N, "L": L})
    polys = fk.eigenvalue_polynomials(hs, seed=seed)
    rep.record("eigenvalue curves polynomial (held-out)", polys.heldout_residual, T(1e-8),
               {"N": N, "L": L, "degree": L})
    rep.record("one eigenbasis diagonalizes all T(x)", polys.offdiag_residual, T(1e-8), {"N": N, "L": L})
    tr = fk.trace_polynomial(hs)
    rep.record(
        "sum of Lambda_i = tr T(x)",
        float(np.max(np.abs(polys.coeffs.sum(axis=0) - tr))) / max(1.0, float(np.max(np.abs(tr)))),
        T(1e-8),
        {"N": N, "L": L},
    )
    return rep


def n2_suite(kmax: int = 3, window: int = 3, tol=None, **_) -> Report:
    T = _Tol(tol)
    rep = Report("n2", config={"kmax": kmax, "window": window})
    rep.record("graded Jacobi identity (exact)", float(sca.jacobi_residual(window)), 0.0, {"window": window})
    stab = 0.0
    for q_abs in (0.5, 0.1, 1e-3):
        for s, t in ((0, 0), (0.5, 0.5), (1 / 3, 0.25), (0.5, 0)):
            pt = ModularPoint.from_nome(q_abs, 0.137 + 0.05j)
            base = theta(ThetaChar(s, t), pt)
            n = theta_terms(pt.tau, pt.z)
            stab = max(stab, abs(theta(ThetaChar(s, t), pt, 2 * n) - base))
        tau = ModularPoint.from_nome(q_abs).tau
        stab = max(stab, abs(eta(tau, 400) - eta(tau)))
    rep.record("theta/eta truncation stability (terms doubled)", stab, T(1e-12), {"q": [0.5, 0.1, 1e-3]})
    odd = max(abs(theta(ThetaChar(0.5, 0.5), ModularPoint(tau))) for tau in (1j, 0.3 + 0.8j, 2j))
    rep.record("odd theta vanishes at z = 0", odd, T(1e-14), {})
    gamma14 = math.gamma(0.25)
    rep.record("eta(i) = Gamma(1/4) / (2 pi^(3/4))",
               abs(eta(1j) - gamma14 / (2 * math.pi**0.75)), T(1e-12), {})
    rep.record("theta[0,0](0, i) = pi^(1/4) / Gamma(3/4)",
               abs(theta(ThetaChar(0, 0), ModularPoint(1j)) - math.pi**0.25 / math.gamma(0.75)), T(1e-12), {})

    conventions = {}
    unstable, off_grid, mismatch = [], [], 0.0
    for k in range(1, kmax + 1):
        for lab in ch.labels(k):
            key = f"{lab.k},{lab.l},{lab.m}"
            try:
                lb = ch.leading_behavior(lab)
            except ExtractionError:
                unstable.append(key)
                continue
            formal = ch.expand_character(lab, ch.NS, 1)
            mismatch = max(mismatch, abs(lb.exponent - float(formal.lead_exponent)),
                           abs(lb.charge - float(formal.lead_charge)))
            if not lb.charge_grid_ok:
                off_grid.append(key)
            conventions[key] = {
                "exponent": lb.exponent,
                "exponent_by_q": {str(q): v for q, v in lb.exponent_estimates.items()},
                "charge": lb.charge,
                "formal_exponent": formal.lead_exponent,
                "printed": lb.expected[ch.PRINTED],
                "quarter": lb.expected[ch.QUARTER],
                "matching": lb.matching_conventions,
            }
    rep.flag("leading exponent stable across |q| in {1e-3, 1e-4}", not unstable, {"unstable": unstable})
    rep.flag("charges lie in Q + Z", not off_grid, {"off_grid": off_grid})
    rep.record("numeric leading term agrees with the formal expansion", mismatch, T(0.01), {"kmax": kmax})
    every = {conv: all(conv in v["matching"] for v in conventions.values())
             for conv in (ch.PRINTED, ch.QUARTER)}
    rep.notes["h_convention"] = {
        "labels": conventions,
        "matches_all_labels": every,
        "outcome": (
            "h = (l^2 + 2l - m^2) / (4 (k+2)) reproduces the leading q-exponent of every NS character; "
            "h = (l^2 + 2l - m^2) / (k+2) matches only where it vanishes"
            if every[ch.QUARTER] and not every[ch.PRINTED]
            else "see labels"
        ),
    }
    per, trunc = 0.0, 0.0
    pt = ModularPoint(1.3j, 0.137 + 0.211j)
    pt1 = ModularPoint(1.3j, pt.z + 1)
    for lab in ch.labels(min(kmax, 2)):
        for tw in (ch.NS, ch.RAMOND, ch.TwistPair(Fraction(1, 4), Fraction(-1, 8))):
            v = ch.character(lab, tw, pt)
            per = max(per, abs(ch.character(lab, tw, pt1) - ch.z_period_phase(lab, tw) * v) / abs(v))
            n = theta_terms(pt.tau * lab.K, pt.z)
            trunc = max(trunc, abs(ch.character(lab, tw, pt, terms=n + 10) - v) / abs(v))
    rep.record("character quasi-periodicity in z", per, T(1e-10), {})
    rep.record("character stable under terms + 10", trunc, T(1e-10), {})
    return rep


def orbifold_suite(rmax: int = 4, nmax: int = 5, tol=None, **_) -> Report:
    T = _Tol(tol)
    rep = Report("orbifold", config={"rmax": rmax, "nmax": nmax})
    table = {}
    for r in range(1, rmax + 1):
        for n in range(2, nmax + 1):
            G = orb.build_Ar(n, r)
            euler = orb.orbifold_euler_linear(G)
            classes, irreps = orb.class_and_rep_counts(G)
            ok = G.order == (r + 1) ** (n - 1) and euler == classes == irreps and G.is_closed()
            rep.flag(f"A_{r}({n}) order, closure and euler = classes = irreps", ok,
                     {"order": G.order, "euler": euler})
            table[f"A_{r}({n})"] = G.order
            if G.order <= 64:
                M = G.as_matrix_group()
                mc = orb.class_and_rep_counts(M)
                rep.flag(f"A_{r}({n}) matrix route agrees", orb.orbifold_euler_linear(M) == euler
                         and mc == (classes, irreps) and M.is_special(), {})
    for G in (orb.quaternion_group(), orb.binary_dihedral_group(3), orb.symmetric_group_matrices(3),
              orb.symmetric_group_matrices(4)):
        euler = orb.orbifold_euler_linear(G)
        classes, irreps = orb.class_and_rep_counts(G)
        rep.flag(f"{G.name}: euler = classes = irreps, closed", euler == classes == irreps and G.is_closed(),
                 {"order": G.order, "euler": euler})
    exact = orb.hypersurface_check(4, 1, [1, 2, 3, 4])
    rep.flag("hypersurface relation exact on integers", exact.residual == 0 and exact.x == 24, {})
    rng = np.random.default_rng(0)
    worst, inv = 0.0, 0.0
    for r in range(1, rmax + 1):
        for n in range(2, nmax + 1):
            z = rng.normal(size=n) + 1j * rng.normal(size=n)
            e = rng.integers(0, r + 1, size=n)
            e[-1] = (-e[:-1].sum()) % (r + 1)
            h = orb.hypersurface_check(n, r, z, e)
            worst = max(worst, abs(h.residual) / max(1.0, abs(h.x) ** (r + 1)))
            inv = max(inv, h.invariance)
    rep.record("hypersurface relation in floating point", worst, T(1e-10), {})
    rep.record("x, y_j invariant under A_r(n)", inv, T(1e-12), {})
    divisors = [orb.exceptional_divisor_count(r) for r in range(1, 5)]
    rep.flag("divisor counts r = 1..4 are 1, 4, 10, 20", divisors == [1, 4, 10, 20], {"counts": divisors})
    return rep


SUITES = {
    "weyl": weyl_suite,
    "chiral-potts": chiral_potts_suite,
    "onsager": onsager_suite,
    "fk-bethe": fk_suite,
    "n2": n2_suite,
    "orbifold": orbifold_suite,
}
