from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sml import orbifold as orb
from sml.errors import EnumerationError, InvalidConfigError


def test_A1_2():
    G = orb.build_Ar(2, 1)
    assert sorted(map(tuple, G.exponents)) == [(0, 0), (1, 1)]
    mats = G.as_matrix_group().elements
    assert any(np.allclose(m, -np.eye(2)) for m in mats)


@pytest.mark.parametrize("r", range(1, 5))
@pytest.mark.parametrize("n", range(2, 6))
def test_Ar_counts(r, n):
    G = orb.build_Ar(n, r)
    assert G.order == (r + 1) ** (n - 1)
    assert G.is_closed()
    assert orb.orbifold_euler_linear(G) == G.order
    assert orb.class_and_rep_counts(G) == (G.order, G.order)


def test_A2_3_matrix_route():
    G = orb.build_Ar(3, 2).as_matrix_group()
    assert G.order == 9
    assert G.is_special() and G.is_closed()
    assert orb.commuting_pairs(G) == 81
    assert orb.class_and_rep_counts(G) == (9, 9)


def test_Ar_budget():
    with pytest.raises(EnumerationError):
        orb.build_Ar(10, 4, max_order=1000)
    with pytest.raises(InvalidConfigError):
        orb.build_Ar(1, 2)


@pytest.mark.parametrize(
    "G,order,euler",
    [
        (orb.quaternion_group(), 8, 5),
        (orb.binary_dihedral_group(3), 12, 6),
        (orb.symmetric_group_matrices(3), 6, 3),
        (orb.symmetric_group_matrices(4), 24, 5),
    ],
    ids=["Q8", "BD12", "S3", "S4"],
)
def test_nonabelian_groups(G, order, euler):
    assert G.order == order and G.is_closed()
    assert orb.orbifold_euler_linear(G) == euler
    assert orb.class_and_rep_counts(G) == (euler, euler)


def test_q8_pairs():
    assert orb.commuting_pairs(orb.quaternion_group()) == 40


def test_trivial_group():
    G = orb.FiniteMatrixGroup(np.eye(2)[None])
    assert orb.orbifold_euler_linear(G) == 1
    assert orb.class_and_rep_counts(G) == (1, 1)


def test_q8_class_sizes():
    sizes = sorted(len(c) for c in orb.conjugacy_classes(orb.quaternion_group()))
    assert sizes == [1, 1, 2, 2, 2]


def test_not_closed():
    G = orb.FiniteMatrixGroup(np.array([np.eye(2), np.diag([1j, -1j])]))
    assert not G.is_closed()


def test_generate_budget():
    irrational = np.diag([np.exp(2j), np.exp(-2j)])
    with pytest.raises(EnumerationError):
        orb.generate_group([irrational], max_order=50)


def test_hypersurface_exact():
    h = orb.hypersurface_check(4, 1, [1, 2, 3, 4])
    assert h.x == 24 and h.y == (1, 4, 9, 16) and h.residual == 0
    h = orb.hypersurface_check(3, 2, [Fraction(1, 2), Fraction(2, 3), 5])
    assert h.residual == 0


@settings(max_examples=40, deadline=None)
@given(
    st.integers(2, 5),
    st.integers(1, 4),
    st.lists(st.complex_numbers(max_magnitude=3), min_size=5, max_size=5),
    st.lists(st.integers(0, 4), min_size=5, max_size=5),
)
def test_hypersurface_invariance(n, r, zs, es):
    es = es[: n - 1]
    es.append(-sum(es))
    h = orb.hypersurface_check(n, r, zs[:n], es)
    assert abs(h.residual) <= 1e-10 * max(1.0, abs(h.x) ** (r + 1))
    assert h.invariance < 1e-12


def test_hypersurface_rejects_non_element():
    with pytest.raises(InvalidConfigError):
        orb.hypersurface_check(3, 2, [1, 2, 3], [1, 0, 0])


def test_divisor_counts():
    assert [orb.exceptional_divisor_count(r) for r in range(1, 5)] == [1, 4, 10, 20]
    with pytest.raises(InvalidConfigError):
        orb.exceptional_divisor_count(0)
