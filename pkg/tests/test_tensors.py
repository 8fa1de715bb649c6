import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from invbilin import tensors as T
from invbilin.tensors import (Dual, Forms, Function, Polyvectors, Product, SymTensors,
                              TensorField, VectorFieldPoly)

seeds = st.integers(0, 10**6)
dims = st.sampled_from([1, 2, 3])

KINDS = [Function(), Forms(1), Forms(2), Polyvectors(1), Polyvectors(2), SymTensors(2),
         T.vvform(1), Dual(T.vvform(1)), Product(Forms(1), SymTensors(1))]


def _kind_ok(kind, n):
    return bool(kind.keys(n))


@settings(max_examples=60, deadline=None)
@given(seeds, dims, st.sampled_from(KINDS))
def test_lie_derivative_is_a_representation(seed, n, kind):
    if not _kind_ok(kind, n):
        return
    rng = random.Random(seed)
    s = T.random_field(rng, n, kind, 3, twist=Fraction(rng.randint(-3, 3), 2))
    xi, eta = T.random_vector_field(rng, n, 2), T.random_vector_field(rng, n, 2)
    lhs = T.lie_derivative(T.vector_bracket(xi, eta), s)
    rhs = T.lie_derivative(xi, T.lie_derivative(eta, s)) - T.lie_derivative(eta, T.lie_derivative(xi, s))
    assert lhs == rhs


@settings(max_examples=60, deadline=None)
@given(seeds, dims, st.integers(0, 2))
def test_d_squared_is_zero(seed, n, p):
    if p > n:
        return
    rng = random.Random(seed)
    w = T.random_field(rng, n, Forms(p), 4)
    assert T.ext_d(T.ext_d(w)).is_zero()


@settings(max_examples=50, deadline=None)
@given(seeds, dims, st.integers(0, 2))
def test_cartan_formula(seed, n, p):
    if p > n:
        return
    rng = random.Random(seed)
    w = T.random_field(rng, n, Forms(p), 3)
    xi = T.random_vector_field(rng, n, 2)
    X = xi.as_polyvector()
    cartan = T.ext_d(T.contract(X, w)) + T.contract(X, T.ext_d(w)) if p > 0 else \
        T.contract(X, T.ext_d(w))
    assert cartan == T.lie_derivative(xi, w)


@settings(max_examples=50, deadline=None)
@given(seeds, st.sampled_from([2, 3]), st.integers(0, 2), st.integers(0, 2))
def test_wedge_leibniz_for_d(seed, n, p, q):
    if p + q + 1 > n:
        return
    rng = random.Random(seed)
    a, b = T.random_field(rng, n, Forms(p), 3), T.random_field(rng, n, Forms(q), 3)
    lhs = T.ext_d(T.wedge(a, b))
    rhs = T.wedge(T.ext_d(a), b) + T.wedge(a, T.ext_d(b)).scale((-1) ** p)
    assert lhs == rhs


@settings(max_examples=50, deadline=None)
@given(seeds, st.sampled_from([2, 3]), st.integers(1, 2), st.integers(1, 2), st.integers(1, 2))
def test_schouten_graded_jacobi(seed, n, a, b, c):
    if max(a, b, c) > n:
        return
    rng = random.Random(seed)
    X = T.random_field(rng, n, Polyvectors(a), 2, terms=3)
    Y = T.random_field(rng, n, Polyvectors(b), 2, terms=3)
    Z = T.random_field(rng, n, Polyvectors(c), 2, terms=3)
    br = T.schouten
    lhs = br(X, br(Y, Z))
    rhs = br(br(X, Y), Z) + br(Y, br(X, Z)).scale((-1) ** ((a - 1) * (b - 1)))
    assert lhs == rhs


@settings(max_examples=40, deadline=None)
@given(seeds, dims)
def test_schouten_on_vector_fields_is_lie_bracket(seed, n):
    rng = random.Random(seed)
    xi, eta = T.random_vector_field(rng, n, 3), T.random_vector_field(rng, n, 3)
    assert T.schouten(xi.as_polyvector(), eta.as_polyvector()) == \
        T.vector_bracket(xi, eta).as_polyvector()


@settings(max_examples=40, deadline=None)
@given(seeds, dims)
def test_poisson_on_linear_momenta_is_lie_bracket(seed, n):
    rng = random.Random(seed)
    xi, eta = T.random_vector_field(rng, n, 3), T.random_vector_field(rng, n, 3)
    lhs = T.poisson(T.vector_as_symtensor(xi), T.vector_as_symtensor(eta))
    rhs = T.vector_as_symtensor(T.vector_bracket(xi, eta))
    assert lhs == rhs


@settings(max_examples=40, deadline=None)
@given(seeds, st.sampled_from([2, 3]), st.integers(1, 2), st.integers(1, 2))
def test_frolicher_nijenhuis_graded_antisymmetry(seed, n, k, l):
    rng = random.Random(seed)
    K = T.random_field(rng, n, T.vvform(k), 2, terms=3)
    L = T.random_field(rng, n, T.vvform(l), 2, terms=3)
    assert T.frolicher_nijenhuis(K, L) == T.frolicher_nijenhuis(L, K).scale(-((-1) ** (k * l)))


def test_div_polyvector_example():
    X = TensorField(2, Polyvectors(2), {(0, 1): {(1, 0): 1}})
    assert T.div_polyvector(X) == TensorField(2, Polyvectors(1), {(1,): {(0, 0): 1}})


@pytest.mark.parametrize("kind,n,expected", [
    (Product(Forms(1), Forms(1)), 3, {(2, 0, 0): 6, (1, 1, 0): 3}),
    (T.vvform(2), 3, {(1, 1, -1): 6, (1, 0, 0): 3}),
    (Product(Forms(2), Forms(2)), 3, {(2, 2, 0): 6, (2, 1, 1): 3}),
])
def test_decompositions(kind, n, expected):
    got = {tuple(int(x) for x in hw): len(basis) for hw, basis in T.decomposition(kind, n)}
    assert sorted(got, reverse=True) == T.highest_weights(kind, n)
    assert got == expected


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_projection_is_idempotent_and_equivariant(seed):
    rng = random.Random(seed)
    kind, n = Product(Forms(1), Forms(1)), 2
    s = T.random_field(rng, n, kind, 2)
    xi = T.random_vector_field(rng, n, 2)
    for hw in T.highest_weights(kind, n):
        p = T.project(s, hw)
        assert T.project(p, hw) == p
        assert T.project(T.lie_derivative(xi, s), hw) == T.lie_derivative(xi, p)


def test_traceless_part():
    rng = random.Random(3)
    K = T.random_field(rng, 3, T.vvform(2), 2, terms=6)
    P = T.traceless_part(K)
    assert T.vv_trace(P).is_zero()
    assert T.traceless_part(P) == P


def test_field_arithmetic_checks_compatibility():
    a = TensorField(2, Forms(1), {(0,): {(1, 0): 1}}, twist=1)
    b = TensorField(2, Forms(1), {(0,): {(1, 0): 1}}, twist=0)
    with pytest.raises(ValueError, match="incompatible"):
        a + b
    with pytest.raises(ValueError):
        T.lie_derivative(VectorFieldPoly.monomial((1,), 0), a)
