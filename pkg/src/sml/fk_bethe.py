"""Faddeev-Kashaev Hamiltonian, the chained L-operator and its spectral-curve data.

The L-operator at a site with parameter ``h = (a:b:c:d)`` is the 2x2 block

    [[a Z X, x b X],
     [x c Z, d    ]]

acting on an auxiliary C^2 with entries on C^N. Chains are indexed
``0..L-1`` here, site ``j`` sitting on tensor factor ``j + 1`` of the
quantum space.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import (
    CommutationError,
    DiagonalizationError,
    InvalidConfigError,
    PoleError,
    WeylRelationError,
)
from .weyl import (
    DEFAULT_TOL,
    LatticeConfig,
    fro,
    kron_all,
    make_clock,
    make_shift,
    relative_commutator,
    root_of_unity,
    simultaneous_eigenbasis,
    site_embed,
)

WEYL_TOL = 1e-12


@dataclass(frozen=True)
class FKParams:
    mu: float
    nu: float
    rho: float
    alpha: complex = 1.0
    beta: complex = 1.0
    gamma: complex = 1.0
    P: int = 1
    N: int = 3

    def __post_init__(self):
        if self.N < 2:
            raise InvalidConfigError("N must be >= 2")
        if math.gcd(self.P, self.N) != 1:
            raise InvalidConfigError(
                f"flux P/N = {self.P}/{self.N} must be in lowest terms so w is primitive"
            )

    @property
    def omega(self) -> complex:
        return root_of_unity(self.N, self.P)


def build_weyl_triple(N: int, alpha=1.0, beta=1.0, gamma=1.0, P: int = 1, tol: float = WEYL_TOL):
    """``U = alpha Z``, ``V = beta X``, ``W = gamma (Z X)^-1`` with pairwise Weyl relations.

    The relations ``UV = wVU``, ``VW = wWV``, ``WU = wUW`` and the N-th
    power identities are checked on construction.
    """
    Z = make_clock(N, P)
    X = make_shift(N)
    w = root_of_unity(N, P)
    zx_inv = np.linalg.inv(Z @ X)
    U, V, W = alpha * Z, beta * X, gamma * zx_inv
    scale = max(abs(alpha) * abs(beta), abs(beta) * abs(gamma), abs(gamma) * abs(alpha), 1.0)
    checks = {
        "UV = wVU": fro(U @ V - w * V @ U),
        "VW = wWV": fro(V @ W - w * W @ V),
        "WU = wUW": fro(W @ U - w * U @ W),
    }
    eye = np.eye(N)
    checks["U^N"] = fro(np.linalg.matrix_power(U, N) - alpha**N * eye) / max(abs(alpha) ** N, 1)
    checks["V^N"] = fro(np.linalg.matrix_power(V, N) - beta**N * eye) / max(abs(beta) ** N, 1)
    checks["W^N"] = fro(
        np.linalg.matrix_power(W, N) - gamma**N * np.linalg.matrix_power(zx_inv, N)
    ) / max(abs(gamma) ** N, 1)
    for name, r in checks.items():
        limit = tol * (scale * math.sqrt(N) if "w" in name else math.sqrt(N))
        if r > limit:
            raise WeylRelationError(f"Weyl relation {name} fails: residual {r:.3e}")
    return U, V, W


def weyl_relation_residuals(U, V, W, omega) -> dict[str, float]:
    return {
        "UV": fro(U @ V - omega * V @ U),
        "VW": fro(V @ W - omega * W @ V),
        "WU": fro(W @ U - omega * U @ W),
    }


def build_HFK(params: FKParams) -> np.ndarray:
    U, V, W = build_weyl_triple(params.N, params.alpha, params.beta, params.gamma, params.P)
    inv = np.linalg.inv
    return (
        params.mu * (U + inv(U))
        + params.nu * (V + inv(V))
        + params.rho * (W + inv(W))
    )


@dataclass(frozen=True)
class SiteParam:
    a: complex
    b: complex
    c: complex
    d: complex

    def __post_init__(self):
        if not any((self.a, self.b, self.c, self.d)):
            raise InvalidConfigError("site parameter four-vector is identically zero")


@dataclass(frozen=True)
class InhomogeneitySet:
    sites: tuple
    N: int

    def __post_init__(self):
        if len(self.sites) < 1:
            raise InvalidConfigError("need at least one site")
        LatticeConfig(self.N, len(self.sites))

    @property
    def L(self) -> int:
        return len(self.sites)

    @classmethod
    def random(cls, N: int, L: int, rng: np.random.Generator) -> "InhomogeneitySet":
        sites = []
        for _ in range(L):
            v = rng.normal(size=4) + 1j * rng.normal(size=4)
            sites.append(SiteParam(*(complex(x) for x in v)))
        return cls(tuple(sites), N)


@dataclass(frozen=True)
class CurvePoint:
    x: complex
    xi: tuple

    def to_row(self) -> list[float]:
        row = [self.x.real, self.x.imag]
        for v in self.xi:
            row += [v.real, v.imag]
        return row


def build_L(h: SiteParam, x: complex, N: int) -> np.ndarray:
    """L-operator as an array of shape ``(2, 2, N, N)``."""
    Z, X = make_clock(N), make_shift(N)
    out = np.empty((2, 2, N, N), dtype=complex)
    out[0, 0] = h.a * Z @ X
    out[0, 1] = x * h.b * X
    out[1, 0] = x * h.c * Z
    out[1, 1] = h.d * np.eye(N)
    return out


def _chain_trace(blocks_per_site, N: int) -> np.ndarray:
    """Trace over the auxiliary space of the ordered product of per-site 2x2 blocks."""
    L = len(blocks_per_site)
    cfg = LatticeConfig(N, L)
    dim = cfg.dim
    acc = [[np.eye(dim, dtype=complex), np.zeros((dim, dim), complex)],
           [np.zeros((dim, dim), complex), np.eye(dim, dtype=complex)]]
    for j, blk in enumerate(blocks_per_site):
        emb = [[site_embed(blk[r, s], j + 1, cfg) for s in range(2)] for r in range(2)]
        acc = [
            [acc[r][0] @ emb[0][s] + acc[r][1] @ emb[1][s] for s in range(2)]
            for r in range(2)
        ]
    return acc[0][0] + acc[1][1]


def transfer_FK(hs: InhomogeneitySet, x: complex) -> np.ndarray:
    """``T(x) = tr_aux(L_{h_0}(x) L_{h_1}(x) ... L_{h_{L-1}}(x))``."""
    return _chain_trace([build_L(h, x, hs.N) for h in hs.sites], hs.N)


def transfer_FK_at_zero(hs: InhomogeneitySet) -> np.ndarray:
    """Closed form ``(prod a_j) (ZX)^{(x)L} + (prod d_j) I`` of ``T(0)``."""
    N, L = hs.N, hs.L
    zx = make_clock(N) @ make_shift(N)
    pa = np.prod([h.a for h in hs.sites])
    pd = np.prod([h.d for h in hs.sites])
    return pa * kron_all([zx] * L) + pd * np.eye(N**L)


def gauge_matrix(xi: complex) -> np.ndarray:
    return np.array([[1.0, xi - 1.0], [1.0, xi]], dtype=complex)


def gauge_transfer_check(hs: InhomogeneitySet, x: complex, xi: Sequence[complex]) -> float:
    """Frobenius distance between the gauge-transformed trace and ``T(x)``.

    Site ``j`` is conjugated as ``g(xi_j) L_j g(xi_{j+1})^-1`` with
    ``xi_L = xi_0``.
    """
    if len(xi) != hs.L:
        raise InvalidConfigError(f"need {hs.L} gauge variables, got {len(xi)}")
    blocks = []
    for j, h in enumerate(hs.sites):
        g_left = gauge_matrix(xi[j])
        g_right_inv = np.linalg.inv(gauge_matrix(xi[(j + 1) % hs.L]))
        L = build_L(h, x, hs.N)
        blocks.append(np.einsum("ru,uvab,vs->rsab", g_left, L, g_right_inv))
    return fro(_chain_trace(blocks, hs.N) - transfer_FK(hs, x))


def _nth_powers(hs: InhomogeneitySet):
    N = hs.N
    return [(h.a**N, h.b**N, h.c**N, h.d**N) for h in hs.sites]


def curve_residual_FK(p: CurvePoint, hs: InhomogeneitySet, pole_tol: float = 1e-14) -> np.ndarray:
    """``xi_j^N - (-1)^N (xi_{j+1}^N a_j^N - x^N b_j^N) / (xi_{j+1}^N x^N c_j^N - d_j^N)``."""
    N, L = hs.N, hs.L
    if len(p.xi) != L:
        raise InvalidConfigError(f"curve point carries {len(p.xi)} xi values, need {L}")
    xN = p.x**N
    sign = (-1) ** N
    out = np.empty(L, dtype=complex)
    for j, (aN, bN, cN, dN) in enumerate(_nth_powers(hs)):
        uj = p.xi[j] ** N
        un = p.xi[(j + 1) % L] ** N
        den = un * xN * cN - dN
        if abs(den) <= pole_tol:
            raise PoleError(f"spectral curve relation has a pole at site {j}")
        out[j] = uj - sign * (un * aN - xN * bN) / den
    return out


def curve_relative_residual(p: CurvePoint, hs: InhomogeneitySet) -> float:
    """Largest curve residual, each relation scaled by ``max(1, |xi_j^N|)``."""
    res = curve_residual_FK(p, hs)
    scales = [max(1.0, abs(v) ** hs.N) for v in p.xi]
    return float(max(abs(r) / s for r, s in zip(res, scales)))


def _mobius(hs: InhomogeneitySet, xN: complex, j: int) -> np.ndarray:
    aN, bN, cN, dN = _nth_powers(hs)[j]
    s = (-1) ** hs.N
    return np.array([[s * aN, -s * xN * bN], [xN * cN, -dN]], dtype=complex)


def _apply_mobius(m, u):
    return (m[0, 0] * u + m[0, 1]) / (m[1, 0] * u + m[1, 1])


def sample_curve_point(
    hs: InhomogeneitySet,
    x: complex,
    root: int = 0,
    branches: Sequence[int] | None = None,
    xi0: complex | None = None,
) -> tuple[CurvePoint, float]:
    """Point of the spectral curve above ``x``.

    In ``u_j = xi_j^N`` each relation is a Moebius map ``u_j = M_j(u_{j+1})``.
    Closing the cycle makes ``u_0`` a fixed point of ``M_0 M_1 ... M_{L-1}``;
    ``root`` picks one of the two fixed points. Passing ``xi0`` instead
    prescribes ``xi_0`` and leaves the wrap-around relation unsolved.
    The remaining ``u_j`` follow backwards from ``u_0``, N-th roots taken on
    the requested ``branches``. Returns the point and its closure residual.
    """
    N, L = hs.N, hs.L
    xN = complex(x) ** N
    branches = list(branches) if branches is not None else [0] * L
    if len(branches) != L:
        raise InvalidConfigError(f"need {L} branch indices")
    mats = [_mobius(hs, xN, j) for j in range(L)]
    if xi0 is None:
        comp = np.eye(2, dtype=complex)
        for m in mats:
            comp = comp @ m
        c2, c1, c0 = comp[1, 0], comp[1, 1] - comp[0, 0], -comp[0, 1]
        if abs(c2) < 1e-300:
            u0 = -c0 / c1
        else:
            disc = np.sqrt(complex(c1 * c1 - 4 * c2 * c0))
            roots = [(-c1 + disc) / (2 * c2), (-c1 - disc) / (2 * c2)]
            u0 = roots[root % 2]
    else:
        u0 = complex(xi0) ** N
    u = [0j] * L
    u[0] = u0
    nxt = u0
    for j in range(L - 1, 0, -1):
        nxt = _apply_mobius(mats[j], nxt)
        u[j] = nxt
    xi = []
    for j in range(L):
        if j == 0 and xi0 is not None:
            xi.append(complex(xi0))
        else:
            xi.append(complex(u[j]) ** (1.0 / N) * root_of_unity(N, branches[j]))
    point = CurvePoint(x=complex(x), xi=tuple(xi))
    closure = float(abs(curve_residual_FK(point, hs)[0]))
    return point, closure


def _q_root(N: int) -> complex:
    return complex(np.exp(1j * np.pi / N))


def tau_plus(p: CurvePoint, N: int) -> CurvePoint:
    q = _q_root(N)
    return CurvePoint(x=q * p.x, xi=tuple(v / q for v in p.xi))


def tau_minus(p: CurvePoint, N: int) -> CurvePoint:
    q = _q_root(N)
    return CurvePoint(x=p.x / q, xi=tuple(v / q for v in p.xi))


def delta_minus(p: CurvePoint, hs: InhomogeneitySet) -> complex:
    L = hs.L
    out = 1.0 + 0j
    for j, h in enumerate(hs.sites):
        out *= h.d - p.x * p.xi[(j + 1) % L] * h.c
    return out


def delta_plus(p: CurvePoint, hs: InhomogeneitySet, pole_tol: float = 1e-14) -> complex:
    L = hs.L
    out = 1.0 + 0j
    for j, h in enumerate(hs.sites):
        den = p.xi[(j + 1) % L] * h.a - p.x * h.b
        if abs(den) <= pole_tol:
            raise PoleError(f"Delta_+ has a pole at site {j}")
        out *= p.xi[j] * (h.a * h.d - p.x**2 * h.b * h.c) / den
    return out


@dataclass
class BetheCandidate:
    """Eigenvalue polynomial (ascending coefficients) and a function on the curve."""

    Lambda: np.ndarray
    Q: Callable[[CurvePoint], complex]

    def lam(self, x: complex) -> complex:
        return complex(np.polynomial.polynomial.polyval(x, self.Lambda))


def bethe_residual(cand: BetheCandidate, p: CurvePoint, hs: InhomogeneitySet) -> complex:
    """``Lambda(x) Q(p) - Q(tau_- p) Delta_-(p) - Q(tau_+ p) Delta_+(p)``."""
    N = hs.N
    q_p = cand.Q(p)
    q_m = cand.Q(tau_minus(p, N))
    q_pl = cand.Q(tau_plus(p, N))
    if q_p is None or q_m is None or q_pl is None:
        raise InvalidConfigError("Q is undefined on part of the tau-orbit of p")
    return complex(
        cand.lam(p.x) * q_p - q_m * delta_minus(p, hs) - q_pl * delta_plus(p, hs)
    )


@dataclass
class EigenPolynomials:
    coeffs: np.ndarray          # (dim, L+1), ascending powers of x
    basis: np.ndarray
    heldout_residual: float
    offdiag_residual: float


def default_x_samples(L: int, radius: float = 1.0, phase: float = 0.3) -> list[complex]:
    """``L + 2`` points on a circle: ``L + 1`` for the fit, one held out."""
    n = L + 2
    return [radius * complex(np.exp(1j * (phase + 2 * np.pi * s / n))) for s in range(n)]


def eigenvalue_polynomials(
    hs: InhomogeneitySet,
    x_samples: Sequence[complex] | None = None,
    tol: float = 1e-8,
    seed: int = 0,
) -> EigenPolynomials:
    """Eigenvalue polynomials ``Lambda_i(x)`` of the commuting family ``T(x)``.

    One joint eigenbasis is computed for all samples; every eigenvalue curve
    is fitted by a polynomial of degree ``<= L`` on all samples but the last,
    which is held out to confirm the fit.
    """
    L = hs.L
    xs = list(x_samples) if x_samples is not None else default_x_samples(L)
    if len(xs) < L + 2 or len(set(xs)) != len(xs):
        raise InvalidConfigError(f"need at least {L + 2} distinct x samples")
    mats = [transfer_FK(hs, x) for x in xs]
    for i in range(1, len(mats)):
        r = relative_commutator(mats[0], mats[i])
        if r >= DEFAULT_TOL:
            raise CommutationError(f"T(x_0) and T(x_{i}) do not commute ({r:.3e})", (0, i), r)
    basis, eigs = simultaneous_eigenbasis(mats, tol=DEFAULT_TOL, seed=seed)
    eigs = np.array(eigs)                      # (samples, dim)
    fit_x = np.array(xs[:-1])
    vander = np.vander(fit_x, L + 1, increasing=True)
    coeffs, *_ = np.linalg.lstsq(vander, eigs[:-1], rcond=None)
    pred = np.vander(np.array([xs[-1]]), L + 1, increasing=True) @ coeffs
    scale = max(float(np.max(np.abs(eigs))), 1.0)
    heldout = float(np.max(np.abs(pred[0] - eigs[-1]))) / scale
    if heldout >= tol:
        raise DiagonalizationError(
            f"eigenvalue curves are not polynomials of degree <= {L}: held-out residual {heldout:.3e}"
        )
    conj_off = 0.0
    inv = np.linalg.inv(basis)
    for m in mats:
        c = inv @ m @ basis
        conj_off = max(conj_off, fro(c - np.diag(np.diag(c))) / max(fro(m), 1e-300))
    return EigenPolynomials(
        coeffs=coeffs.T.copy(), basis=basis, heldout_residual=heldout, offdiag_residual=conj_off
    )


def trace_polynomial(hs: InhomogeneitySet, x_samples: Sequence[complex] | None = None) -> np.ndarray:
    """Ascending coefficients of ``tr T(x)``, interpolated from traces alone."""
    L = hs.L
    xs = list(x_samples) if x_samples is not None else default_x_samples(L)
    traces = np.array([np.trace(transfer_FK(hs, x)) for x in xs])
    vander = np.vander(np.array(xs), L + 1, increasing=True)
    coeffs, *_ = np.linalg.lstsq(vander, traces, rcond=None)
    return coeffs
