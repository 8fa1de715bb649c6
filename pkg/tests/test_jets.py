import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from invbilin.fibers import LineFiber, make_fiber
from invbilin.jets import (FieldMonomial, JetKey, JetVector, act_field, act_slot, act_su_pair,
                           act_sum, bracket, jet_basis, key_weight, monomials)


def _random_field(rng, n, maxdeg=3):
    deg = rng.randint(0, maxdeg)
    a = rng.choice(monomials(n, deg))
    return FieldMonomial(a, rng.randrange(n))


def _random_vector(rng, f1, f2, d):
    keys = jet_basis(f1, f2, d)
    terms = {}
    for _ in range(3):
        terms[rng.choice(keys)] = Fraction(rng.randint(-3, 3))
    return JetVector(f1, f2, d, terms)


FIBERS = {
    1: lambda: (LineFiber(Fraction(2, 3)), LineFiber(Fraction(-1, 2))),
    2: lambda: (make_fiber(2, (1, -1)), make_fiber(2, (Fraction(1, 2), Fraction(1, 2)))),
    3: lambda: (make_fiber(3, (1, 0, 0)), make_fiber(3, (0, 0, -1))),
}


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from([1, 2, 3]))
def test_commutator_fidelity(seed, n):
    rng = random.Random(seed)
    f1, f2 = FIBERS[n]()
    xi, eta = _random_field(rng, n), _random_field(rng, n)
    d = rng.randint(2, 4)
    v = _random_vector(rng, f1, f2, d)
    lhs = act_sum(bracket(xi, eta), v)
    rhs = act_field(xi, act_field(eta, v)) - act_field(eta, act_field(xi, v))
    assert lhs.terms == rhs.terms


def test_bracket_formula():
    # [x^2 d, x^3 d] = x^4 d in one variable
    assert bracket(FieldMonomial((2,), 0), FieldMonomial((3,), 0)) == [(1, FieldMonomial((4,), 0))]
    assert bracket(FieldMonomial((1, 0), 1), FieldMonomial((0, 1), 0)) == \
        [(-1, FieldMonomial((0, 1), 1)), (1, FieldMonomial((1, 0), 0))]


def test_weights_are_preserved_by_linear_fields():
    f1, f2 = FIBERS[2]()
    for key in jet_basis(f1, f2, 2)[:20]:
        v = JetVector(f1, f2, 2, {key: 1})
        w = act_field(FieldMonomial((1, 0), 0), v)
        assert w.terms == {key: key_weight(key, f1, f2)[0]} or not key_weight(key, f1, f2)[0]


def test_jet_basis_weight_filter():
    f1, f2 = FIBERS[2]()
    nu = (Fraction(-1, 2), Fraction(-1, 2))
    keys = jet_basis(f1, f2, 2, nu)
    assert keys
    for k in keys:
        assert key_weight(k, f1, f2) == nu
    assert len(keys) < len(jet_basis(f1, f2, 2))


def test_act_slot_only_touches_one_side():
    f1, f2 = make_fiber(2, (1, -1)), make_fiber(2, (1, 0))
    v = JetVector(f1, f2, 0, {JetKey((0, 0), (0, 0), 0, 0): 1})
    assert act_slot(1, 0, 1, v).terms == {JetKey((0, 0), (0, 0), 1, 0): 1}
    assert act_slot(1, 0, 2, v).terms == {JetKey((0, 0), (0, 0), 0, 1): 1}


def test_jet_vector_rejects_wrong_degree():
    f1, f2 = FIBERS[1]()
    with pytest.raises(ValueError):
        JetVector(f1, f2, 2, {JetKey((1,), (0,), 0, 0): 1})


def _poly(coeffs):
    return lambda i: sum(Fraction(c) * Fraction(i) ** k for k, c in enumerate(coeffs))


@pytest.mark.parametrize("P", [[1], [0, 1], [2, -1, 3]])
def test_su_pair_relations(P):
    lam, mu, s = 4, 5, 3
    f1 = make_fiber(2, (lam, 0))
    f2 = make_fiber(2, (mu, 0))
    u = act_su_pair(s, P, f1, f2)
    p = _poly(P)
    # x+ (s; P) = (s - 1; P(i) - P(i + 1))
    xp = act_slot(0, 1, 1, u) + act_slot(0, 1, 2, u)
    assert xp == act_su_pair(s - 1, lambda i: p(i) - p(i + 1), f1, f2)
    # x'- (s; P) = (s + 1; i (i - lam - 1) P(i - 1))
    assert act_slot(1, 0, 1, u) == act_su_pair(s + 1, lambda i: i * (i - lam - 1) * p(i - 1), f1, f2)
    # x''- (s; P) = (s + 1; -(i + mu - s)(i - s - 1) P(i))
    assert act_slot(1, 0, 2, u) == act_su_pair(
        s + 1, lambda i: -(i + mu - s) * (i - s - 1) * p(i), f1, f2)
