import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from relgl.rings import (make_zmod, make_product, product_projections,
                         make_triangular, triangular_e12, make_local_f2,
                         quotient_ring, ring_from_descriptor,
                         verify_ring_axioms, RingConstructionError)


ALL_RINGS = [make_zmod(4), make_zmod(12), make_triangular(2),
             make_local_f2(), make_product(make_zmod(2), make_zmod(3))]


@pytest.mark.parametrize("R", ALL_RINGS, ids=lambda R: str(R.descriptor))
def test_axioms(R):
    assert verify_ring_axioms(R) == []


def test_zmod_tables_match_integers():
    R = make_zmod(7)
    for a in range(7):
        for b in range(7):
            assert R.add_e(a, b) == (a + b) % 7
            assert R.mul_e(a, b) == (a * b) % 7


def test_commutativity_is_computed():
    assert make_zmod(8).commutative
    assert not make_triangular(2).commutative
    assert make_local_f2().commutative  # xy = yx = 0 in this quotient


@given(st.integers(min_value=2, max_value=40))
@settings(max_examples=25, deadline=None)
def test_zmod_units_are_coprime_residues(m):
    R = make_zmod(m)
    expected = [a for a in range(m) if np.gcd(a, m) == 1]
    assert R.unit_indices() == expected


def test_triangular_e12_squares_to_zero():
    T = make_triangular(2)
    e = triangular_e12(T)
    assert T.mul_e(e, e) == T.zero_index
    # e12 does not commute with everything
    assert any(T.mul_e(e, x) != T.mul_e(x, e) for x in range(T.size))


def test_product_projections_are_homs():
    R2, R3 = make_zmod(2), make_zmod(3)
    P = make_product(R2, R3)
    p1, p2 = product_projections(P, R2, R3)
    assert p1.is_valid() and p2.is_valid()
    assert P.size == 6


def test_quotient_ring_of_zmod():
    R = make_zmod(12)
    Q, hom = quotient_ring(R, [0, 4, 8])
    assert Q.size == 4
    assert hom.is_valid()
    assert verify_ring_axioms(Q) == []
    # the projection collapses exactly the ideal
    assert hom(4) == hom(0) == hom(8)
    assert hom(1) != hom(0)


def test_quotient_rejects_non_ideal():
    R = make_zmod(12)
    with pytest.raises(RingConstructionError):
        quotient_ring(R, [0, 5])


def test_local_f2_structure():
    R = make_local_f2()
    assert R.size == 8
    # units are exactly 1 + nilpotent part
    assert len(R.unit_indices()) == 4
    # x*y = 0
    assert R.mul_e(2, 4) == 0


def test_ring_from_descriptor_roundtrip():
    for R in ALL_RINGS:
        S = ring_from_descriptor(R.descriptor)
        assert S.size == R.size
        assert np.array_equal(S.add, R.add)
        assert np.array_equal(S.mul, R.mul)


def test_inverse_table():
    R = make_zmod(9)
    for u in R.unit_indices():
        assert R.mul_e(u, R.inverse_of(u)) == R.one_index
    with pytest.raises(RingConstructionError):
        R.inverse_of(3)
