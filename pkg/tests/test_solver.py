import random
from fractions import Fraction as F

import pytest

from invbilin.fibers import LineFiber, TruncationError
from invbilin.fixtures import N2_D1, to_internal
from invbilin.jets import JetKey
from invbilin.solver import (delta, divergence_free_fields, generator_fields, n1_parametric_locus,
                             nu_candidates, rational_range, scan, singular_vectors, solve_point)


def test_n1_d3_kernel_at_origin():
    r = solve_point(1, (0,), (0,), 3)
    assert r.kernel_dim() == 1
    v = r.results[0].kernel[0]
    assert v.terms == {JetKey((2,), (1,), 0, 0): 1, JetKey((1,), (2,), 0, 0): -1}


def test_n1_d3_half_half_empty_though_deltas_vanish():
    assert all(delta(i, 3, F(1, 2), F(1, 2)) == 0 for i in (1, 2))
    assert solve_point(1, (F(1, 2),), (F(1, 2),), 3).kernel_dim() == 0


def test_n1_d1_dimensions():
    assert solve_point(1, (0,), (0,), 1).kernel_dim() == 2
    assert solve_point(1, (F(2, 7),), (-3,), 1).kernel_dim() == 1


@pytest.mark.parametrize("seed", range(8))
def test_minimal_and_full_generators_agree(seed):
    rng = random.Random(seed)
    l, m = F(rng.randint(-6, 6), 3), F(rng.randint(-6, 6), 3)
    d = rng.randint(1, 4)
    f1, f2 = LineFiber(l), LineFiber(m)
    assert singular_vectors(f1, f2, d, None, "minimal") == singular_vectors(f1, f2, d, None, "full")


def test_n1_locus_degree2_lines():
    loc = n1_parametric_locus(2).locus
    assert sorted((ln.a, ln.b, ln.c) for ln in loc.lines) == [(0, 1, 0), (1, 0, 0), (1, 1, 1)]
    assert not loc.points and not loc.whole_plane


def test_n1_locus_certificates():
    loc = n1_parametric_locus(3)
    assert len(loc.certificates) == 4
    assert all(len(b) == 1 for b in loc.certificates.values())


@pytest.mark.parametrize("fx", N2_D1, ids=lambda f: f.id)
def test_n2_degree1_families(fx):
    r = solve_point(2, fx.w1, fx.w2, 1, fx.nu)
    assert r.kernel_dim() == fx.kernel_dim


def test_n2_degree2_row1_exact():
    r = solve_point(2, (0, 0), (0, 0), 2, (-1, -1))
    (v,) = r.results[0].kernel
    got = {(k.alpha1, k.alpha2, k.i, k.j): c for k, c in v.terms.items()}
    assert got == to_internal([(1, (1, 0), 0, (0, 1), 0), (-1, (0, 1), 0, (1, 0), 0)])


def test_n3_degree1_two_operators_on_functions():
    r = solve_point(3, (0, 0, 0), (0, 0, 0), 1, (0, 0, -1))
    assert r.kernel_dim() == 2


def test_svect_enlarges_kernel_at_divdiv_point():
    full = solve_point(2, (1, 0), (1, 0), 4, (-1, -1), generator_set="full")
    svect = solve_point(2, (1, 0), (1, 0), 4, (-1, -1), generator_set="svect")
    assert full.kernel_dim() == 0 and svect.kernel_dim() == 1


def test_divergence_free_fields_are_divergence_free():
    for n, k in [(2, 2), (2, 3), (3, 2)]:
        for combo in divergence_free_fields(n, k):
            div = {}
            for c, f in combo:
                if f.a[f.b]:
                    m = tuple(x - (t == f.b) for t, x in enumerate(f.a))
                    div[m] = div.get(m, 0) + c * f.a[f.b]
            assert not any(div.values())


def test_generator_sets():
    assert len(generator_fields(1, "minimal")) == 2
    assert len(generator_fields(2, "minimal")) == 3
    with pytest.raises(ValueError):
        generator_fields(2, "bogus")


def test_truncation_error_names_bound():
    with pytest.raises(TruncationError) as err:
        solve_point(2, (F(1, 2), 0), (0, 0), 2, (F(-3, 2), 0), truncation=1)
    assert err.value.needed == 2


def test_nu_candidates_balanced_subset():
    allnu = nu_candidates(2, (2, 0), (1, 0), 2)
    bal = nu_candidates(2, (2, 0), (1, 0), 2, "balanced")
    assert set(bal) <= set(allnu) and bal
    assert all(sum(nu) == 1 for nu in allnu)


def test_scan_is_order_stable_and_parallel_safe():
    grid = [((l,), (m,)) for l in rational_range(-1, 1, F(1, 2)) for m in (0, F(2, 3))]
    a = scan(1, 3, grid, jobs=1)
    b = scan(1, 3, grid, jobs=2)
    assert [p.to_json() for p in a.points] == [p.to_json() for p in b.points]


def test_rational_range_is_exact_and_inclusive():
    r = rational_range(-1, 1, F(1, 3))
    assert r[0] == -1 and r[-1] == 1 and len(r) == 7
    with pytest.raises(ValueError):
        rational_range(0, 1, 0)
