import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from invbilin.exact import (Line, ParamPoly, SparseMat, fmt_q, kernel_basis,
                            minor_vanishing_locus, parse_rational, rank, rational_roots, rref)

fractions = st.fractions(max_denominator=50).filter(lambda q: abs(q) < 10**6)


@given(fractions)
def test_rational_roundtrip(q):
    assert parse_rational(fmt_q(q)) == q


@pytest.mark.parametrize("bad", ["", "1/0", "x", "1/2/3", "1.5.2"])
def test_parse_rational_rejects(bad):
    with pytest.raises((ValueError, ZeroDivisionError)):
        parse_rational(bad)


def _random_matrix(rng, rows, cols, density=0.5):
    ent = {}
    for r in range(rows):
        for c in range(cols):
            if rng.random() < density:
                ent[(r, c)] = Fraction(rng.randint(-5, 5), rng.choice([1, 1, 2, 3]))
    return SparseMat(rows, cols, ent)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 7), st.integers(1, 7))
def test_kernel_rank_duality(seed, rows, cols):
    rng = random.Random(seed)
    M = _random_matrix(rng, rows, cols)
    ker = kernel_basis(M)
    assert rank(M) + len(ker) == cols
    for v in ker:
        assert all(x == 0 for x in M.apply(v))
    # oracle
    assert len(ker) == len(sympy.Matrix(M.to_dense()).nullspace())


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_kernel_basis_is_canonical(seed):
    rng = random.Random(seed)
    M = _random_matrix(rng, 4, 6)
    rows = M.to_dense()
    rng.shuffle(rows)
    # add a combination of rows: same row space, same kernel
    extra = [sum(r[c] for r in rows) for c in range(6)]
    M2 = SparseMat.from_dense(rows + [extra])
    assert kernel_basis(M) == kernel_basis(M2)


def test_kernel_basis_shape():
    M = SparseMat.from_dense([[1, 2, 3], [2, 4, 6]])
    ker = kernel_basis(M)
    assert ker == [[1, 0, Fraction(-1, 3)], [0, 1, Fraction(-2, 3)]]
    assert ker == rref([[-2, 1, 0], [-3, 0, 1]], 3)
    for v in ker:
        assert M.apply(v) == [0, 0]


def test_sparse_mat_bounds():
    with pytest.raises(IndexError):
        SparseMat(2, 2, {(2, 0): Fraction(1)})


def test_parampoly_matches_sympy():
    l, m = ParamPoly.var("l"), ParamPoly.var("m")
    p = (l * 2 - 1) * (m + Fraction(1, 3)) ** 2 - l * m + 5
    L, Mm = sympy.symbols("l m")
    expr = (2 * L - 1) * (Mm + sympy.Rational(1, 3)) ** 2 - L * Mm + 5
    assert sympy.expand(p.to_sympy() - expr) == 0
    assert ParamPoly.from_sympy(expr) == p
    assert p.eval((Fraction(1, 2), 3)) == Fraction(1, 2) * 0 - Fraction(3, 2) + 5


def test_rational_roots():
    l = ParamPoly.var("l")
    p = (l * 3 - 2) * (l + 4) * (l * l - 2)
    assert rational_roots(p) == {Fraction(2, 3), Fraction(-4)}
    with pytest.raises(ValueError, match="identically zero"):
        rational_roots(ParamPoly({}))


def test_locus_lines():
    l, m = ParamPoly.var("l"), ParamPoly.var("m")
    loc = minor_vanishing_locus([[l, 0], [0, m]], 2)
    assert sorted(str(x) for x in loc.lines) == sorted([str(Line(1, 0, 0)), str(Line(0, 1, 0))])
    assert not loc.points


def test_locus_point_and_residual():
    l, m = ParamPoly.var("l"), ParamPoly.var("m")
    loc = minor_vanishing_locus([[l - 1], [m]], 1)
    assert loc.points == [(Fraction(1), Fraction(0))]
    loc = minor_vanishing_locus([[l * l - 2], [m]], 1)
    assert not loc.points and loc.residual


def test_locus_whole_plane_when_too_few_rows():
    l = ParamPoly.var("l")
    loc = minor_vanishing_locus([[l, 1]], 2)
    assert loc.whole_plane


def test_locus_requires_two_variables():
    with pytest.raises(ValueError, match="unsupported"):
        minor_vanishing_locus([[ParamPoly.var("l", ("l",))]], 1, ("l",))
