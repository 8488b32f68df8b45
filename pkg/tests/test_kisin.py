import itertools

import pytest
from hypothesis import given, settings, strategies as st
from sympy import GF as SymGF
from sympy.polys.matrices import DomainMatrix

from hmfweights import kisin
from hmfweights.errors import FieldMismatch, TruncationTooSmall
from hmfweights.finite_field import GF


def _oracle_dim(s, t, a, b, p, support, N):
    """dim V - dim(V cap coboundaries) in F_p[u]/u^N, ranks taken by sympy."""
    K = SymGF(p)
    cob = []
    for k in range(N):
        row = [0] * N
        if t + p * k < N:
            row[t + p * k] += b
        if s + k < N:
            row[s + k] -= a
        cob.append(row)
    mono = [[1 if d == e else 0 for d in range(N)] for e in support]

    def rank(rows):
        if not rows:
            return 0
        return DomainMatrix([[K(x) for x in r] for r in rows], (len(rows), N), K).rank()

    inter = len(support) + rank(cob) - rank(mono + cob)
    return len(support) - inter


def _support(s, t, a, b, p):
    S = set(kisin.y_support(s, t))
    exc = kisin.exceptional_degree(s, t, a, b, p)
    if exc is not None:
        S.add(exc)
    return sorted(S)


def test_allowed_st():
    for w in range(2, 6):
        assert {(s, t) for s, t, _ in kisin.allowed_st(w - 1, 0)} == {(w - 1, 0), (0, w - 1)}
    n = 3
    pairs = {frozenset((s, t)) for s, t, _ in kisin.allowed_st(n, 1)}
    assert pairs == {frozenset((n, 1)), frozenset((n + 1, 0))}
    assert kisin.allowed_st(0, 0) == [(0, 0, 0)]


def test_y_support():
    for n in range(2, 6):
        assert kisin.y_support(n, 1, n, convention="interval") == {0, 1}
        assert kisin.y_support(n, 1, n) == {1}
    assert kisin.y_support(1, 1, 1) == {0}


def test_exceptional_degree():
    assert kisin.exceptional_degree(3, 1, 2, 2, 3) == 4
    assert kisin.exceptional_degree(3, 1, 1, 2, 3) is None
    assert kisin.exceptional_degree(2, 1, 1, 1, 3) is None


@pytest.mark.parametrize("p", [3, 5])
def test_ext_dimension_examples(p):
    for n in range(2, p):
        for a, b in itertools.product(range(1, p), repeat=2):
            assert kisin.ext_dimension(n, 1, a, b, p) == 1
    for a, b in itertools.product(range(1, p), repeat=2):
        assert kisin.ext_dimension(1, 1, a, b, p) == (2 if a == b else 1)
        if a != b:
            assert kisin.ext_dimension(p, 1, a, b, p) == 1


@settings(max_examples=80, deadline=None)
@given(st.sampled_from([2, 3, 5]), st.data())
def test_ext_dimension_matches_oracle(p, data):
    s = data.draw(st.integers(0, p + 1))
    t = data.draw(st.integers(0, p + 1))
    a = data.draw(st.integers(1, p - 1)) if p > 2 else 1
    b = data.draw(st.integers(1, p - 1)) if p > 2 else 1
    N = kisin.default_truncation(max(s, t), p)
    assert kisin.ext_dimension(s, t, a, b, p) == _oracle_dim(s, t, a, b, p, _support(s, t, a, b, p), N)


def test_enumerate_examples():
    reps = kisin.enumerate_extension_classes(2, 1, 1, 1, 3)
    assert len(reps) == 3
    assert all(kisin.degree(y) <= 1 for y in reps)
    assert len(kisin.enumerate_extension_classes(1, 1, 1, 1, 3)) == 9


def test_split_shape_class_count():
    # a != b leaves only the split class; a = b adds the exceptional degree 0
    assert kisin.enumerate_extension_classes(0, 0, 1, 2, 3) == [()]
    assert len(kisin.enumerate_extension_classes(0, 0, 1, 1, 3)) == 3


def test_enumeration_is_over_fq():
    assert len(kisin.enumerate_extension_classes(1, 1, 1, 1, 9)) == 81


def test_truncation_errors():
    with pytest.raises(TruncationTooSmall):
        kisin.ext_dimension(3, 1, 1, 1, 3, N=2)


def test_representatives_are_in_normal_form():
    F = GF(5)
    for y in kisin.enumerate_extension_classes(5, 1, 2, 2, 5):
        shape = kisin.RankTwoExtensionShape.make(F, 5, 1, 2, 2, list(y))
        assert shape.in_normal_form()


@pytest.mark.parametrize("q", [3, 5, 9])
def test_morphism_families(q):
    F = GF(q)
    for a, b in itertools.product(F.units(), repeat=2):
        for c in F.elements():
            for fam in (kisin.family_w_p, kisin.family_w_p1):
                src, tgt, mor = fam(F, a, b, c, c if a == b else 0)
                assert kisin.check_phi_morphism(mor, src, tgt)
                if c:
                    assert not kisin.check_phi_morphism(kisin.perturbed_morphism(F), src, tgt)


def test_identity_morphism():
    F = GF(5)
    shape = kisin.RankTwoExtensionShape.make(F, 3, 1, 2, 4, {1: 3, 3: 1})
    assert kisin.check_phi_morphism(kisin.identity_morphism(F), shape, shape)


def test_morphism_needs_enough_truncation():
    F = GF(3)
    src, tgt, mor = kisin.family_w_p(F, 1, 1, 1, 0)
    with pytest.raises(TruncationTooSmall):
        kisin.check_phi_morphism(mor, src, tgt, N=2)
    assert kisin.check_phi_morphism(mor, src, tgt, N=50)
    with pytest.raises(FieldMismatch):
        kisin.check_phi_morphism(kisin.identity_morphism(GF(9)), src, tgt)


def test_twist_shift():
    F = GF(3)
    for w in range(2, 5):
        sh = kisin.twist_shift(kisin.RankTwoExtensionShape.make(F, w - 1, 0, 1, 2, {0: 1}))
        assert (sh.s, sh.t, sh.y) == (w, 1, (0, 1))
    split = kisin.twist_shift(kisin.RankTwoExtensionShape.make(F, 2, 0, 1, 1))
    assert split.y == ()


@pytest.mark.parametrize("n", [1, 2, 3])
def test_twist_preserves_ext_dimension(n):
    for a, b in itertools.product((1, 2), repeat=2):
        assert kisin.ext_dimension(n, 0, a, b, 3) == kisin.ext_dimension(n + 1, 1, a, b, 3, r=n + 1)
