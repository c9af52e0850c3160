from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sml import fk_bethe as fk
from sml.errors import InvalidConfigError, PoleError
from sml.weyl import fro, kron_all, make_clock, make_shift, relative_commutator, root_of_unity


@pytest.fixture
def hs(rng):
    return fk.InhomogeneitySet.random(3, 2, rng)


def test_weyl_triple_unit():
    U, V, W = fk.build_weyl_triple(3)
    res = fk.weyl_relation_residuals(U, V, W, root_of_unity(3))
    assert max(res.values()) < 1e-12
    assert np.allclose(np.linalg.matrix_power(U, 3), np.eye(3))


@settings(max_examples=25, deadline=None)
@given(st.integers(2, 7), st.floats(0, 2 * np.pi), st.floats(0, 2 * np.pi), st.floats(0, 2 * np.pi))
def test_weyl_triple_phases(N, a, b, c):
    U, V, W = fk.build_weyl_triple(N, np.exp(1j * a), np.exp(1j * b), np.exp(1j * c))
    assert max(fk.weyl_relation_residuals(U, V, W, root_of_unity(N)).values()) < 1e-12


def test_n2_self_inverse():
    U, _, _ = fk.build_weyl_triple(2)
    assert np.allclose(U + np.linalg.inv(U), 2 * make_clock(2))


def test_flux_must_be_coprime():
    with pytest.raises(InvalidConfigError):
        fk.FKParams(1, 1, 0, P=2, N=4)


def test_hamiltonian_reductions():
    p = fk.FKParams(0.7, 1.3, 0.0, N=5)
    H = fk.build_HFK(p)
    U, V = make_clock(5), make_shift(5)
    inv = np.linalg.inv
    assert np.allclose(H, 0.7 * (U + inv(U)) + 1.3 * (V + inv(V)))
    assert fro(H - H.conj().T) < 1e-12
    assert not np.any(fk.build_HFK(fk.FKParams(0, 0, 0, N=3)))


def test_L_operator():
    h = fk.SiteParam(1, 1, 1, 1)
    Lx = fk.build_L(h, 1.0, 2)
    Z, X = make_clock(2), make_shift(2)
    assert np.allclose(Lx[0, 0], Z @ X)
    assert np.allclose(Lx[0, 1], X)
    assert np.allclose(Lx[1, 0], Z)
    assert np.allclose(Lx[1, 1], np.eye(2))
    L0 = fk.build_L(fk.SiteParam(2, 3, 5, 7), 0, 3)
    assert not np.any(L0[0, 1]) and not np.any(L0[1, 0])


def test_transfer_at_zero(hs):
    assert np.allclose(fk.transfer_FK(hs, 0), fk.transfer_FK_at_zero(hs))


def test_transfer_commutes(rng):
    for N, L in [(3, 2), (2, 3)]:
        hs = fk.InhomogeneitySet.random(N, L, rng)
        for _ in range(5):
            x1, x2 = rng.normal(size=2) + 1j * rng.normal(size=2)
            assert relative_commutator(fk.transfer_FK(hs, x1), fk.transfer_FK(hs, x2)) < 1e-9


def test_transfer_polynomial_degree(hs):
    xs = fk.default_x_samples(hs.L + 2)          # L + 4 points
    mats = np.array([fk.transfer_FK(hs, x) for x in xs])
    V = np.vander(np.array(xs), hs.L + 1, increasing=True)
    coeffs, *_ = np.linalg.lstsq(V, mats.reshape(len(xs), -1), rcond=None)
    assert np.max(np.abs(V @ coeffs - mats.reshape(len(xs), -1))) < 1e-10


def test_gauge(hs, rng):
    assert np.linalg.det(fk.gauge_matrix(0.3 + 2j)) == pytest.approx(1)
    x = 0.4 - 0.9j
    xi = list(rng.normal(size=2) + 1j * rng.normal(size=2))
    assert fk.gauge_transfer_check(hs, x, xi) < 1e-9 * fro(fk.transfer_FK(hs, x))
    assert fk.gauge_transfer_check(hs, x, [1, 1]) < 1e-12 * fro(fk.transfer_FK(hs, x))
    with pytest.raises(InvalidConfigError):
        fk.gauge_transfer_check(hs, x, [1])


def test_curve_sampler_and_tau(hs, rng):
    for i in range(6):
        x = complex(rng.normal(), rng.normal())
        p, closure = fk.sample_curve_point(hs, x, root=i % 2, branches=[i % 3, (i + 1) % 3])
        assert fk.curve_relative_residual(p, hs) < 1e-10
        for img in (fk.tau_plus(p, 3), fk.tau_minus(p, 3)):
            assert fk.curve_relative_residual(img, hs) < 1e-9


def test_curve_sampler_free_xi0(hs):
    p, closure = fk.sample_curve_point(hs, 0.5 + 0.2j, xi0=0.7)
    assert p.xi[0] == 0.7
    # the L - 1 forward relations hold; only the wrap-around one is reported
    res = fk.curve_residual_FK(p, hs)
    assert np.all(np.abs(res[1:]) < 1e-10)
    assert closure == pytest.approx(abs(res[0]))


def test_off_curve(hs):
    p = fk.CurvePoint(0.3 + 0.1j, (0.9 - 0.4j, -1.1 + 0.2j))
    assert fk.curve_relative_residual(p, hs) > 1e-3


def test_tau_compositions():
    p = fk.CurvePoint(0.3 + 0.1j, (0.9 - 0.4j, -1.1 + 0.2j))
    N = 3
    w = root_of_unity(N)
    c = fk.tau_plus(fk.tau_minus(p, N), N)
    assert c.x == pytest.approx(p.x)
    assert np.allclose(c.xi, np.array(p.xi) / w)
    r = p
    for _ in range(2 * N):
        r = fk.tau_plus(r, N)
    assert r.x == pytest.approx(p.x)
    assert np.allclose(r.xi, p.xi)


def test_deltas(hs):
    p0 = fk.CurvePoint(0j, (0.5, 2.0))
    assert fk.delta_minus(p0, hs) == pytest.approx(np.prod([h.d for h in hs.sites]))
    p = fk.CurvePoint(0.3 + 0.1j, (0.9 - 0.4j, -1.1 + 0.2j))
    expect = 1
    for j, h in enumerate(hs.sites):
        nxt = p.xi[(j + 1) % 2]
        expect *= p.xi[j] * (h.a * h.d - p.x**2 * h.b * h.c) / (nxt * h.a - p.x * h.b)
    assert fk.delta_plus(p, hs) == pytest.approx(expect)
    h = hs.sites[0]
    bad = fk.CurvePoint(1.0, (0.3, h.b / h.a))
    with pytest.raises(PoleError):
        fk.delta_plus(bad, hs)


def test_bethe_residual_structure(hs):
    p = fk.CurvePoint(0.3 + 0.1j, (0.9 - 0.4j, -1.1 + 0.2j))
    zero = fk.BetheCandidate(np.array([1.0, 2.0, 3.0]), lambda pt: 0)
    assert fk.bethe_residual(zero, p, hs) == 0

    def Q(pt):
        return pt.x + 2 * pt.xi[0]

    def Q2(pt):
        return 2 * Q(pt)

    lam = np.array([0.3, -1.0, 0.5j])
    r1 = fk.bethe_residual(fk.BetheCandidate(lam, Q), p, hs)
    assert fk.bethe_residual(fk.BetheCandidate(lam, Q2), p, hs) == pytest.approx(2 * r1)
    eps = 1e-3
    shifted = fk.bethe_residual(fk.BetheCandidate(lam + np.array([eps, 0, 0]), Q), p, hs)
    assert shifted - r1 == pytest.approx(eps * Q(p))


@pytest.mark.parametrize("N,L", [(3, 2), (2, 3)])
def test_eigenvalue_polynomials(N, L, rng):
    hs = fk.InhomogeneitySet.random(N, L, rng)
    polys = fk.eigenvalue_polynomials(hs)
    assert polys.coeffs.shape == (N**L, L + 1)
    assert polys.heldout_residual < 1e-8
    tr = fk.trace_polynomial(hs)
    assert np.allclose(polys.coeffs.sum(axis=0), tr, atol=1e-8 * max(1, np.max(np.abs(tr))))
    zx = make_clock(N) @ make_shift(N)
    closed = np.prod([h.a for h in hs.sites]) * kron_all([zx] * L) + np.prod([h.d for h in hs.sites]) * np.eye(N**L)
    at_zero = np.sort_complex(np.round(polys.coeffs[:, 0], 8))
    assert np.allclose(at_zero, np.sort_complex(np.round(np.linalg.eigvals(closed), 8)), atol=1e-7)
