from fractions import Fraction

import pytest
import sympy
from hypothesis import assume, given, settings, strategies as st

from hmfweights.embeddings import EmbeddingSet, PrimeDatum, build_embedding_set, inert_quadratic, ramified_quadratic
from hmfweights.errors import DimensionMismatch
from hmfweights.weight_lattice import (
    WeightVector,
    dual_weight,
    frobenius_weight_shift,
    hasse_compare,
    hasse_matrix,
    hasse_weight,
    in_min_cone,
    is_irreducible_weight,
    lambda_class,
    lambda_equal,
    lattice_index,
    parse_vector,
    theta_shift,
)

R3 = ramified_quadratic(3)
I3 = inert_quadratic(3)


def W(eset, *c):
    return WeightVector(eset, c)


def _sympy_matrix(eset):
    return sympy.Matrix(hasse_matrix(eset).rows())


configs = st.tuples(
    st.sampled_from([2, 3, 5, 7]),
    st.lists(st.tuples(st.integers(1, 3), st.integers(1, 3)), min_size=1, max_size=2),
).map(lambda c: EmbeddingSet([PrimeDatum(f"p{n}", c[0], f, e) for n, (f, e) in enumerate(c[1])]))


def weights(eset, lo=-6, hi=12):
    return st.lists(st.integers(lo, hi), min_size=eset.d, max_size=eset.d).map(
        lambda v: WeightVector(eset, tuple(v)))


def test_hasse_weights():
    s1, s2 = R3.embeddings
    assert hasse_weight(R3, s1) == W(R3, -1, 3)
    assert hasse_weight(R3, s2) == W(R3, 1, -1)
    t1, t2 = I3.embeddings
    assert hasse_weight(I3, t1) == W(I3, -1, 3)
    assert hasse_weight(I3, t2) == W(I3, 3, -1)


def test_theta_shift():
    t, m = theta_shift(R3, "p1", 0)
    assert t == W(R3, 1, 1) and m == W(R3, 0, -1)
    assert W(R3, 1, 2) + t == W(R3, 2, 3)
    t, _ = theta_shift(I3, "p1", 0)
    assert t == W(I3, 1, 3)


def test_frobenius_shift():
    k2, _ = frobenius_weight_shift(R3, "p1", W(R3, 1, 2), WeightVector.zero(R3))
    assert k2 == W(R3, 2, 3)
    z = WeightVector.zero(R3)
    assert frobenius_weight_shift(R3, "p1", z, z) == (z, z)


@given(st.sampled_from([2, 3, 5, 7]), st.integers(-9, 9), st.integers(-9, 9))
def test_frobenius_shift_ramified_formula(p, k1, k2):
    s = ramified_quadratic(p)
    kk, _ = frobenius_weight_shift(s, "p1", W(s, k1, k2), WeightVector.zero(s))
    assert kk == W(s, k2, p * k1)


def test_cone_examples():
    assert in_min_cone(W(R3, 1, 2), positive=True)
    assert not in_min_cone(W(R3, 1, 4), positive=True)
    z = WeightVector.zero(R3)
    assert in_min_cone(z) and not in_min_cone(z, positive=True)


def test_compare_examples():
    res = hasse_compare(W(R3, 2, 4), W(R3, 0, 0))
    assert res.r == (3, 5) and res.comparable and res.le
    res = hasse_compare(W(R3, 1, 2), W(R3, 1, 1))
    assert res.r == (Fraction(1, 2), Fraction(1, 2))
    assert res.comparable and not res.le
    assert hasse_compare(W(R3, 4, 1), W(R3, 4, 1)).r == (0, 0)


def test_lattice_index_examples():
    assert lattice_index(R3) == 2
    assert lattice_index(I3) == 8
    assert lattice_index(build_embedding_set([(2, 1, 1), (2, 1, 1)])) == 1


@settings(max_examples=60, deadline=None)
@given(configs)
def test_determinant_matches_sympy(eset):
    assert abs(_sympy_matrix(eset).det()) == lattice_index(eset)


@settings(max_examples=60, deadline=None)
@given(configs.flatmap(lambda s: st.tuples(weights(s), weights(s))))
def test_solve_matches_sympy(pair):
    hi, lo = pair
    r = hasse_compare(hi, lo).r
    want = _sympy_matrix(hi.eset).LUsolve(sympy.Matrix((hi - lo).coords))
    assert [sympy.Rational(x.numerator, x.denominator) for x in r] == list(want)


@settings(max_examples=60, deadline=None)
@given(configs.flatmap(lambda s: weights(s, 0, 4)))
def test_reconstruction(rvec):
    # k = sum r_sigma h_sigma decomposes back to r
    eset = rvec.eset
    k = WeightVector.zero(eset)
    for s, c in zip(eset.embeddings, rvec.coords):
        k = k + c * hasse_weight(eset, s)
    assert hasse_compare(k, WeightVector.zero(eset)).r == rvec.coords


def test_lambda_examples():
    assert lambda_class(W(R3, -1, 3)) == lambda_class(W(R3, 0, 0))
    assert lambda_class(W(R3, -1, 3)).exponent("p1") == 0
    assert lambda_class(W(R3, 0, 1)).exponent("p1") == 1
    assert lambda_class(W(I3, -1, 3)).exponent("p1") == 0
    assert lambda_equal(W(R3, -1, 3), W(R3, 0, 0))
    assert not lambda_equal(W(R3, 0, 0), W(R3, 0, 1))


@settings(max_examples=100, deadline=None)
@given(configs.flatmap(lambda s: st.tuples(weights(s), weights(s))))
def test_lambda_kernel_is_hasse_lattice(pair):
    m, n = pair
    assert (lambda_class(m) == lambda_class(n)) == lambda_equal(m, n)


@settings(max_examples=60, deadline=None)
@given(configs.flatmap(lambda s: st.tuples(weights(s), st.sampled_from(s.embeddings))))
def test_hasse_weights_have_trivial_lambda(pair):
    m, sigma = pair
    assert lambda_class(m + hasse_weight(m.eset, sigma)) == lambda_class(m)


@settings(max_examples=100, deadline=None)
@given(configs.flatmap(lambda s: weights(s, 0, 15)))
def test_min_cone_lies_in_rational_hasse_cone(k):
    assume(in_min_cone(k))
    assert hasse_compare(k, WeightVector.zero(k.eset)).comparable


def test_irreducible_examples():
    assert is_irreducible_weight(W(R3, 2, 4))
    assert not is_irreducible_weight(W(R3, 3, 3))
    assert is_irreducible_weight(WeightVector.constant(I3, 2))


def test_dual_weight():
    k, m = W(R3, 2, 2), W(R3, -1, -1)
    assert dual_weight(k, m) == (k, m)
    assert dual_weight(W(R3, 2, 3), W(R3, 0, 0)) == (W(R3, 2, 3), W(R3, -2, -3))


def test_parse_and_dimension_errors():
    assert parse_vector(R3, "1, -2") == W(R3, 1, -2)
    with pytest.raises(DimensionMismatch):
        parse_vector(R3, "1,2,3")
    with pytest.raises(DimensionMismatch):
        W(R3, 1, 2) + W(I3, 1, 2)


@settings(max_examples=60, deadline=None)
@given(configs.flatmap(lambda s: st.tuples(weights(s), st.sampled_from(s.embeddings))))
def test_theta_moves_lambda_by_minus_p_power(pair):
    m, sigma = pair
    eset = m.eset
    q = eset.prime(sigma.prime_id)
    _, shift = theta_shift(eset, q.prime_id, sigma.i)
    mod = q.p ** q.f - 1
    before = lambda_class(m).exponent(q.prime_id)
    after = lambda_class(m + shift).exponent(q.prime_id)
    assert (after - before + q.p ** sigma.i) % max(mod, 1) == 0
