from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from hmfweights.errors import NegativeValuation, NotSquarefree, PrimeUnramified
from hmfweights.quadfield import QuadField

FIELDS = [(3, 3), (5, 5), (2, 2), (3, 2), (13, 13), (6, 3), (7, 7)]


def _window_oracle(K, bound):
    # all x + y sqrt D with 2x, 2y integers, filtered by integrality and positivity
    out = set()
    for x2 in range(1, bound + 1):
        for y2 in range(-bound, bound + 1):
            z = K.elt(Fraction(x2, 2), Fraction(y2, 2))
            if K.is_integral(z) and z.is_totally_positive() and z.trace() <= bound:
                out.add(K.basis_key(z))
    return out


def _residue_oracle(K, z):
    hits = [r for r in range(K.p) if (z - r).is_zero() or K.valuation(z - r) > 0]
    assert len(hits) == 1
    return hits[0]


def test_examples_d3():
    K = QuadField(3, 3)
    assert K.valuation(K.sqrtD) == 1
    assert K.valuation(K.elt(6, 1)) == 1
    assert K.residue(K.elt(2, 1)) == 2


def test_d5_and_d3_p2():
    assert QuadField(5, 5).disc == 5
    assert QuadField(3, 2).disc == 12


def test_constructor_errors():
    with pytest.raises(NotSquarefree):
        QuadField(12, 3)
    with pytest.raises(PrimeUnramified):
        QuadField(3, 5)
    with pytest.raises(PrimeUnramified):
        QuadField(5, 4)


def test_value_power_product_examples():
    K = QuadField(3, 3)
    x = K.elt(6, 1)
    assert K.value_power_product(x, 1, 1) == 0
    assert K.value_power_product(x, 0, 0) == 1
    assert K.value_power_product(x, 1, -1) == 2
    with pytest.raises(NegativeValuation):
        K.value_power_product(x, -1, -1)


@pytest.mark.parametrize("D,p", FIELDS)
def test_window_matches_brute_force(D, p):
    K = QuadField(D, p)
    assert set(K.window(24, include_zero=False)) == _window_oracle(K, 24)
    assert K.window(24)[0] == (0, 0)


@settings(max_examples=150, deadline=None)
@given(st.sampled_from(FIELDS), st.integers(-30, 30), st.integers(-30, 30))
def test_key_arithmetic_matches_exact(field, a, b):
    K = QuadField(*field)
    u = (a, b)
    z = K.from_basis(u)
    assert K.key_norm(u) == z.norm()
    assert K.key_trace(u) == z.trace()
    assert K.from_basis(K.key_conj(u)) == z.conj()
    w = (b - 1, a + 2)
    assert K.from_basis(K.key_mul(u, w)) == z * K.from_basis(w)
    if u != (0, 0):
        assert K.key_valuation(u) == K.valuation(z)
        if K.valuation(z) >= 0:
            assert K.key_residue(u) == K.residue(z) == _residue_oracle(K, z)
        q = K.key_div(K.key_mul(u, w), u)
        assert q == w or w == (0, 0) and q == (0, 0)


def test_residue_mod_degree_one_prime():
    K = QuadField(3, 3)
    pi = (4, 1)  # norm 13
    for u in [(1, 0), (0, 1), (5, 7), (4, 1)]:
        r = K.residue_mod(u, pi)
        diff = K.from_basis(u) - r
        assert diff.is_zero() or K.divides(K.from_basis(pi), diff)
