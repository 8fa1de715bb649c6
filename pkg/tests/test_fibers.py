import itertools
from fractions import Fraction

import pytest

from invbilin.fibers import (LineFiber, PlaneFiber, TensorFiber, TruncationError, act_generator,
                             make_fiber, partition_hw_vector, weyl_dimension)


def _op(f, a, b, vec):
    return f.act_vec(a, b, vec)


def _sub(u, v):
    out = dict(u)
    for k, c in v.items():
        out[k] = out.get(k, 0) - c
    return {k: c for k, c in out.items() if c}


def _check_gl_relations(f, indices):
    n = f.n
    for a, b, c, d in itertools.product(range(n), repeat=4):
        for k in indices:
            v = {k: Fraction(1)}
            lhs = _sub(_op(f, a, b, _op(f, c, d, v)), _op(f, c, d, _op(f, a, b, v)))
            rhs = {}
            if b == c:
                rhs = _op(f, a, d, v)
            if a == d:
                rhs = _sub(rhs, _op(f, c, b, v))
            assert lhs == rhs, (a, b, c, d, k)


@pytest.mark.parametrize("w", [(2, 0), (0, -1), (3, 3), (Fraction(5, 2), Fraction(1, 2))])
def test_plane_fiber_finite_relations(w):
    f = make_fiber(2, w)
    assert f.finite and f.dim == int(w[0] - w[1]) + 1
    _check_gl_relations(f, f.indices())


def test_plane_fiber_infinite_relations_below_truncation():
    f = PlaneFiber(Fraction(2, 3), 0, truncation=6)
    assert not f.finite
    _check_gl_relations(f, range(5))


def test_plane_fiber_truncation_error():
    f = PlaneFiber(Fraction(1, 2), 0, truncation=2)
    with pytest.raises(TruncationError, match="truncation exceeded") as err:
        f.act(1, 0, 2)
    assert err.value.needed == 3
    with pytest.raises(ValueError):
        PlaneFiber(Fraction(1, 2), 0)


def test_plane_fiber_bracket_value():
    f = PlaneFiber(Fraction(2, 3), 0, truncation=5)
    v = {2: Fraction(1)}
    xp = act_generator("x+", f, act_generator("x-", f, v))
    xm = act_generator("x-", f, act_generator("x+", f, v))
    assert _sub(xp, xm) == {2: Fraction(2, 3) - 4}


@pytest.mark.parametrize("w,dim", [((0, -1, -1), 3), ((2, 1, 0), 8), ((3, 1, -2), 42),
                                   ((1, 1, 1), 1), ((2, 0, 0), 6)])
def test_tensor_fiber_dimension(w, dim):
    f = make_fiber(3, w)
    assert f.dim == dim == weyl_dimension(w)
    _check_gl_relations(f, f.indices())


def test_tensor_fiber_dual_slots():
    # Λ²(id*) in dimension 3 has highest weight (0, -1, -1)
    hw = {(1, 2): 1, (2, 1): -1}
    f = TensorFiber(3, 0, 2, 0, hw)
    assert f.dim == 3
    assert f.weight(0) == (0, -1, -1)


def test_tensor_fiber_rejects_non_highest():
    with pytest.raises(ValueError, match="not highest"):
        TensorFiber(3, 1, 0, 0, {(1,): 1})


def test_make_fiber_requires_dominant_integral():
    with pytest.raises(ValueError, match="dominant integral"):
        make_fiber(3, (0, 1, 0))
    with pytest.raises(ValueError):
        make_fiber(2, (0, 0, 0))


def test_partition_vector_is_highest():
    for part in [(2, 1), (1, 1, 1), (3,), (2, 2)]:
        f = TensorFiber(3 if len(part) <= 3 else 4, sum(part), 0, 0, partition_hw_vector(part))
        assert f.weight(0)[:len(part)] == tuple(part)


def test_line_fiber():
    f = LineFiber(Fraction(2, 3))
    assert f.dim == 1 and f.act(0, 0, 0) == {0: Fraction(2, 3)}
    assert LineFiber(0).act(0, 0, 0) == {}
