"""Reference classification data, with stable identifiers.

Printed singular vectors use the basis v_i = (x-)^i v_0, which is i! times
the basis used by the fibers here; ``to_internal`` converts.  Entries that
are transcribed literally but fail the singularity equations carry a
``correction`` with the smallest change that makes them singular.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Callable, Sequence

from .exact import Q, fmt_q

F = Fraction


def _pt(p) -> str:
    return f"({fmt_q(Q(p[0]))},{fmt_q(Q(p[1]))})"


# ---------------------------------------------------------------------------
# n = 1 loci

N1_LOCI = {
    1: {"whole_plane": True, "lines": [], "points": []},
    2: {"whole_plane": False, "lines": [(1, 0, 0), (0, 1, 0), (1, 1, 1)], "points": []},
    3: {"whole_plane": False, "lines": [],
        "points": [(F(0), F(0)), (F(0), F(2)), (F(2, 3), F(2, 3)), (F(2), F(0))]},
    4: {"whole_plane": False, "lines": [], "points": []},
    5: {"whole_plane": False, "lines": [], "points": []},
    6: {"whole_plane": False, "lines": [], "points": []},
}

# all Delta_i vanish here but there is no operator
N1_D3_EMPTY_POINT = (F(1, 2), F(1, 2))


def n1_fixture_ids(d: int, l, m) -> list[str]:
    l, m = Q(l), Q(m)
    data = N1_LOCI.get(d)
    if data is None:
        return []
    out = []
    if data["whole_plane"]:
        out.append(f"n1.d{d}.plane")
    for a, b, c in data["lines"]:
        if a * l + b * m == c:
            out.append(f"n1.d{d}.line({a}l+{b}m={c})")
    if (l, m) in data["points"]:
        out.append(f"n1.d{d}.point{_pt((l, m))}")
    if d == 3 and (l, m) == N1_D3_EMPTY_POINT:
        out.append("n1.d3.empty(1/2,1/2)")
    return out


# ---------------------------------------------------------------------------
# n = 2, degree 1 families


@dataclass(frozen=True)
class DimFixture:
    id: str
    w1: tuple
    w2: tuple
    nu: tuple
    degree: int
    kernel_dim: int


N2_D1 = [
    DimFixture("n2.d1.P3", (2, 0), (2, 0), (3, 0), 1, 1),
    DimFixture("n2.d1.P1(s=1)", (0, -1), (3, 1), (2, 0), 1, 1),
    DimFixture("n2.d1.P2", (1, 0), (F(1, 2), F(-1, 3)), (F(1, 2), F(-1, 3)), 1, 1),
    DimFixture("n2.d1.P2(integral)", (1, 0), (3, 1), (3, 1), 1, 1),
    DimFixture("n2.d1.P4(s=1)", (2, 1), (3, 2), (4, 3), 1, 1),
    DimFixture("n2.d1.P4(s=0)", (F(1, 3), F(1, 3)), (F(1, 2), F(1, 2)), (F(5, 6), F(-1, 6)), 1, 1),
    DimFixture("n2.d1.P1(s=0)", (0, 0), (3, 1), (3, 0), 1, 1),
    DimFixture("n2.d1.two(l=-1,m=0)", (0, -1), (1, 0), (0, -1), 1, 2),
    DimFixture("n2.d1.two(l=0,m=-1)", (1, 0), (0, -1), (0, -1), 1, 2),
    DimFixture("n2.d1.two(l=m=-1)", (0, -1), (0, -1), (-1, -2), 1, 2),
    DimFixture("n2.d1.two(l=m=0)", (0, 0), (0, 0), (0, -1), 1, 2),
]


# ---------------------------------------------------------------------------
# printed singular vectors


Term = tuple  # (coef, alpha1, i, alpha2, j)


@dataclass
class VectorFixture:
    id: str
    w1: tuple
    w2: tuple
    nu: tuple
    degree: int
    printed: list
    correction: list | None = None
    note: str = ""


def to_internal(terms: Sequence[Term]) -> dict:
    """Printed terms -> {(alpha1, alpha2, i, j): coefficient} in the fiber basis."""
    out: dict = {}
    for c, a1, i, a2, j in terms:
        key = (tuple(a1), tuple(a2), i, j)
        out[key] = out.get(key, 0) + Q(c) * factorial(i) * factorial(j)
    return {k: v for k, v in out.items() if v}


def _row4(m):
    m = Q(m)
    return VectorFixture(f"n2.d2.row4(m={fmt_q(m)})", (0, -1), (m, m), (m - 1, m - 2), 2, [
        (m, (1, 1), 0, (0, 0), 0), (1, (1, 0), 0, (0, 1), 0),
        (m, (0, 2), 1, (0, 0), 0), (1, (0, 1), 1, (0, 1), 0)])


def _row4p(l):
    l = Q(l)
    return VectorFixture(f"n2.d2.row4'(l={fmt_q(l)})", (l, l), (0, -1), (l - 1, l - 2), 2, [
        (1, (0, 1), 0, (1, 0), 0), (l, (0, 0), 0, (1, 1), 0),
        (1, (0, 1), 0, (0, 1), 1), (l, (0, 0), 0, (0, 2), 1)])


def _row5(m):
    m = Q(m)
    return VectorFixture(f"n2.d2.row5(m={fmt_q(m)})", (0, -1), (m + 1, m), (m - 1, m - 1), 2, [
        (m + 1, (2, 0), 0, (0, 0), 0), (1, (1, 0), 0, (1, 0), 0),
        (m + 1, (1, 1), 0, (0, 0), 1), (m + 1, (1, 1), 1, (0, 0), 0),
        (1, (1, 0), 0, (0, 1), 1), (1, (0, 1), 1, (1, 0), 0),
        (m + 1, (0, 2), 1, (0, 0), 1), (1, (0, 1), 1, (0, 1), 1)])


def _row6(l, printed=True):
    l = Q(l)
    mid = 2 * l + 1 if printed else 2 * l - 1
    return [(l - 1, (1, 1), 0, (0, 0), 0), (l - 1, (1, 0), 0, (0, 1), 0),
            (l, (0, 1), 0, (1, 0), 0), (l, (0, 0), 0, (1, 1), 0),
            (l - 1, (0, 2), 0, (0, 0), 1), (mid, (0, 1), 0, (0, 1), 1),
            (l, (0, 0), 0, (0, 2), 1)]


def _row6_fixture(l):
    l = Q(l)
    return VectorFixture(f"n2.d2.row6(l={fmt_q(l)})", (l, l), (1 - l, -l), (0, -1), 2,
                         _row6(l, True), _row6(l, False),
                         "coefficient of d'2 v0 ⊗ d''2 w1 is printed as 2l+1; the singular "
                         "vector has 2l-1, as in the n=1 analogue")


N2_D2 = [
    VectorFixture("n2.d2.row1", (0, 0), (0, 0), (-1, -1), 2, [
        (1, (1, 0), 0, (0, 1), 0), (-1, (0, 1), 0, (1, 0), 0)]),
    VectorFixture("n2.d2.row2", (0, 0), (0, 0), (0, -2), 2, [
        (1, (0, 1), 0, (0, 1), 0)]),
    # the unindexed "w" in the printed display is forced to w0 and w1 by weight
    VectorFixture("n2.d2.row3", (0, 0), (1, -1), (-1, -1), 2, [
        (2, (2, 0), 0, (0, 0), 0), (2, (1, 0), 0, (1, 0), 0),
        (2, (1, 1), 0, (0, 0), 1), (1, (1, 0), 0, (0, 1), 1),
        (1, (0, 1), 0, (1, 0), 1), (1, (0, 2), 0, (0, 0), 2),
        (1, (0, 1), 0, (0, 1), 2)]),
    _row4(2), _row4(F(1, 2)), _row4p(2), _row4p(F(-1, 3)),
    _row5(2), _row5(F(1, 3)),
    _row6_fixture(2), _row6_fixture(F(1, 3)),
]

_T1_PRINTED = [
    (1, (1, 1), 0, (1, 0), 0), (-1, (1, 0), 0, (1, 1), 0), (1, (0, 2), 1, (1, 0), 0),
    (1, (1, 1), 0, (0, 1), 1), (-1, (1, 0), 0, (0, 2), 1), (-1, (0, 1), 1, (1, 1), 1),
    (-1, (0, 1), 1, (0, 2), 1)]
_T1_CORRECTED = [
    (1, (1, 1), 0, (1, 0), 0), (-1, (1, 0), 0, (1, 1), 0), (1, (0, 2), 1, (1, 0), 0),
    (1, (1, 1), 0, (0, 1), 1), (-1, (1, 0), 0, (0, 2), 1), (-1, (0, 1), 1, (1, 1), 0),
    (-1, (0, 1), 1, (0, 2), 1), (1, (0, 2), 1, (0, 1), 1)]

# the printed "w2" in the 13th term does not exist in a 2-dimensional fiber;
# it is read as w1, the only index of the right weight
_T1D_PRINTED = [
    (2, (2, 1), 0, (0, 0), 0), (1, (1, 1), 0, (1, 0), 0), (2, (2, 0), 0, (0, 1), 0),
    (1, (1, 0), 0, (1, 1), 0), (2, (1, 2), 0, (0, 0), 1), (3, (1, 1), 0, (0, 1), 1),
    (1, (1, 0), 0, (0, 2), 1), (1, (1, 2), 1, (0, 0), 0), (1, (0, 2), 1, (1, 0), 0),
    (2, (1, 1), 1, (0, 1), 0), (-1, (0, 1), 1, (1, 1), 0), (2, (0, 3), 1, (0, 0), 1),
    (3, (0, 2), 1, (0, 1), 1), (1, (0, 1), 1, (0, 2), 1)]
_T1D_CORRECTED = [t if (t[1], t[2], t[3], t[4]) not in
                  {((1, 2), 1, (0, 0), 0), ((0, 1), 1, (1, 1), 0)} else
                  ((2 if t[0] == 1 else 1), t[1], t[2], t[3], t[4]) for t in _T1D_PRINTED]

N2_D3 = [
    VectorFixture("n2.d3.T1", (0, -1), (0, -1), (-2, -3), 3, _T1_PRINTED, _T1_CORRECTED,
                  "the printed display has w1 in the sixth term where the weight forces w0, "
                  "and omits the term d'2^2 v1 ⊗ d''2 w1"),
    VectorFixture("n2.d3.T1dual", (0, -1), (2, 1), (0, -1), 3, _T1D_PRINTED, _T1D_CORRECTED,
                  "the printed display has coefficient 1 on d'1 d'2^2 v1 ⊗ w0 and -1 on "
                  "d'2 v1 ⊗ d''1 d''2 w0; the singular vector has 2 and +1"),
]

# point where the d=4 candidate d(Div X) ∧ d(Div Y) would live: vector
# fields on both sides, target 2-forms
N2_DIVDIV_POINT = {"w1": (1, 0), "w2": (1, 0), "nu": (-1, -1), "degree": 4}


def all_vector_fixtures() -> list[VectorFixture]:
    return N2_D2 + N2_D3


def n2_fixture_ids(w1, w2, d: int, nu=None) -> list[str]:
    w1 = tuple(Q(x) for x in w1)
    w2 = tuple(Q(x) for x in w2)
    nu = None if nu is None else tuple(Q(x) for x in nu)
    out = []
    for fx in N2_D1 + all_vector_fixtures():
        if fx.degree != d:
            continue
        if tuple(Q(x) for x in fx.w1) == w1 and tuple(Q(x) for x in fx.w2) == w2 and \
                (nu is None or tuple(Q(x) for x in fx.nu) == nu):
            out.append(fx.id)
    return out


def kernel_match(fx: VectorFixture, which: str = "printed") -> dict:
    """Solve at the fixture's weights and compare with the printed (or corrected)
    vector up to a scalar."""
    from .solver import solve_point
    terms = fx.printed if which == "printed" else fx.correction
    if terms is None:
        raise ValueError(f"{fx.id} has no {which} vector")
    want = to_internal(terms)
    res = solve_point(2, fx.w1, fx.w2, fx.degree, fx.nu)
    kernel = res.results[0].kernel
    out = {"id": fx.id, "which": which, "kernel_dim": len(kernel), "match": False}
    if len(kernel) == 1:
        got = {(k.alpha1, k.alpha2, k.i, k.j): c for k, c in kernel[0].terms.items()}
        if set(got) == set(want):
            ratios = {got[k] / want[k] for k in got}
            out["match"] = len(ratios) == 1
    return out
