import pytest
from hypothesis import given, settings, strategies as st
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_add, gf_mul, gf_rem

from hmfweights.finite_field import GF, is_prime, prime_power

QS = [2, 3, 4, 5, 7, 8, 9, 25, 27]


def _to_poly(F, a):
    # sympy wants dense big-endian coefficient lists
    digits = F._digits(a)
    return [ZZ(c) for c in reversed(digits)]


def _from_poly(F, coeffs):
    coeffs = [int(c) for c in coeffs]
    little = list(reversed(coeffs)) + [0] * F.k
    return F._undigits(little[: F.k])


def test_prime_helpers():
    assert [n for n in range(20) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19]
    assert prime_power(27) == (3, 3)
    with pytest.raises(Exception):
        prime_power(12)


@pytest.mark.parametrize("q", QS)
def test_arithmetic_matches_polynomial_oracle(q):
    F = GF(q)
    mod = [ZZ(c) for c in reversed(F.modulus)]
    for a in F.elements():
        for b in F.elements():
            pa, pb = _to_poly(F, a), _to_poly(F, b)
            assert F.add(a, b) == _from_poly(F, gf_add(pa, pb, F.p, ZZ))
            prod = gf_rem(gf_mul(pa, pb, F.p, ZZ), mod, F.p, ZZ)
            assert F.mul(a, b) == _from_poly(F, prod)


@pytest.mark.parametrize("q", QS)
def test_generator_is_primitive(q):
    F = GF(q)
    seen = {F.pow(F.generator, n) for n in range(q - 1)}
    assert seen == set(F.units())


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(QS), st.data())
def test_field_axioms(q, data):
    F = GF(q)
    a, b, c = (data.draw(st.integers(0, q - 1)) for _ in range(3))
    assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
    assert F.add(a, F.neg(a)) == 0
    assert F.sub(F.add(a, b), b) == a
    if a:
        assert F.mul(a, F.inv(a)) == 1
        assert F.pow(a, q - 1) == 1
        assert F.div(F.mul(b, a), a) == b


def test_inverse_of_zero_raises():
    with pytest.raises(ZeroDivisionError):
        GF(9).inv(0)


def test_rank():
    F = GF(3)
    assert F.rank([[1, 2], [2, 1]]) == 1
    assert F.rank([[1, 0], [0, 1]]) == 2
