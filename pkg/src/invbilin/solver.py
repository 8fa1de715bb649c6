"""Singular vectors of the bilinear jet module: vectors of a fixed weight nu
killed by the raising operators and by fields vanishing to second order.
"""
from __future__ import annotations

import itertools
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .exact import (Locus, ParamPoly, Q, SparseMat, fmt_q, kernel_basis,
                    minor_vanishing_locus)
from .fibers import Fiber, LineFiber, PlaneFiber, TruncationError, make_fiber
from .jets import (FieldMonomial, JetKey, JetVector, act_on_key, jet_basis,
                   key_weight, monomials)

# a constraint is a linear combination of monomial fields
FieldCombo = tuple  # tuple[tuple[Fraction, FieldMonomial], ...]

GENERATOR_SETS = ("minimal", "full", "svect")


def _unit(n, k):
    return tuple(int(t == k) for t in range(n))


def _mono(a, b, c=1):
    return ((Fraction(c), FieldMonomial(tuple(a), b)),)


def raising_fields(n: int) -> list:
    return [_mono(tuple(a + b for a, b in zip(_unit(n, i), (0,) * n)), j)
            for i in range(n) for j in range(i + 1, n)]


def homogeneous_fields(n: int, k: int) -> list:
    return [_mono(a, b) for a in monomials(n, k) for b in range(n)]


def divergence_free_fields(n: int, k: int) -> list:
    """Basis of divergence-free fields with homogeneous degree-k coefficients."""
    fields = [FieldMonomial(a, b) for a in monomials(n, k) for b in range(n)]
    targets = {m: r for r, m in enumerate(monomials(n, k - 1))} if k >= 1 else {}
    ent = {}
    for c, f in enumerate(fields):
        if f.a[f.b]:
            m = tuple(x - (t == f.b) for t, x in enumerate(f.a))
            ent[(targets[m], c)] = Fraction(f.a[f.b])
    M = SparseMat(max(len(targets), 1), len(fields), ent)
    out = []
    for vec in kernel_basis(M):
        out.append(tuple((c, fields[t]) for t, c in enumerate(vec) if c))
    return out


def generator_fields(n: int, which: str = "minimal") -> list:
    """Constraint fields.

    minimal: n=1 x^2 d, x^3 d; n=2 x1 d2, x2^2 d1, x2^2 d2; n>=3 as full.
    full: all raising x_i d_j (i<j) and all fields of degree 2 and 3.
    svect: raising fields and divergence-free fields of degree 2 and 3.
    """
    if which not in GENERATOR_SETS:
        raise ValueError(f"unknown generator set {which!r}")
    if which == "minimal" and n == 1:
        return [_mono((2,), 0), _mono((3,), 0)]
    if which == "minimal" and n == 2:
        return [_mono((1, 0), 1), _mono((0, 2), 0), _mono((0, 2), 1)]
    if which == "svect":
        return raising_fields(n) + divergence_free_fields(n, 2) + divergence_free_fields(n, 3)
    return raising_fields(n) + homogeneous_fields(n, 2) + homogeneous_fields(n, 3)


def render_combo(combo) -> str:
    return " + ".join(f"{fmt_q(c)}*{f}" for c, f in combo)


@dataclass
class SingularSystem:
    n: int
    d: int
    f1: Fiber
    f2: Fiber
    nu: tuple | None
    constraints: list
    columns: list[JetKey]
    row_labels: list
    entries: dict  # (row, col) -> scalar (Fraction or ParamPoly)

    @property
    def matrix(self) -> SparseMat:
        return SparseMat(len(self.row_labels), len(self.columns), self.entries)

    def dense(self) -> list[list]:
        out = [[0] * len(self.columns) for _ in self.row_labels]
        for (r, c), v in self.entries.items():
            out[r][c] = v
        return out


def _check_truncation(f: Fiber, keys: Sequence[JetKey], slot: int):
    if f.finite or not keys:
        return
    top = max(k.i if slot == 1 else k.j for k in keys)
    if top + 1 > f.truncation:
        raise TruncationError(
            f"fiber {slot} truncation {f.truncation} too small: need truncation >= {top + 1}",
            top + 1)


def assemble_system(f1: Fiber, f2: Fiber, d: int, nu: Sequence | None,
                    generator_set: str = "minimal") -> SingularSystem:
    if f1.n != f2.n:
        raise ValueError("fibers over different n")
    n = f1.n
    nu = None if nu is None else tuple(Q(x) for x in nu)
    cols = jet_basis(f1, f2, d, nu)
    _check_truncation(f1, cols, 1)
    _check_truncation(f2, cols, 2)
    constraints = generator_fields(n, generator_set)
    rows: dict = {}
    entries: dict = {}
    for c_idx, key in enumerate(cols):
        for g, combo in enumerate(constraints):
            img: dict = {}
            for coef, xi in combo:
                for k2, v in act_on_key(xi, key, f1, f2).items():
                    img[k2] = img.get(k2, 0) + coef * v
            for k2, v in img.items():
                if not v:
                    continue
                r = rows.setdefault((g, k2), len(rows))
                entries[(r, c_idx)] = v
    # order rows deterministically: by constraint, then key order
    labels = sorted(rows, key=lambda gk: (gk[0], [-x for x in gk[1].alpha1 + gk[1].alpha2],
                                          gk[1].i, gk[1].j))
    remap = {rows[lab]: r for r, lab in enumerate(labels)}
    entries = {(remap[r], c): v for (r, c), v in entries.items()}
    return SingularSystem(n, d, f1, f2, nu, constraints, cols, labels, entries)


def singular_vectors(f1: Fiber, f2: Fiber, d: int, nu: Sequence | None,
                     generator_set: str = "minimal") -> list[JetVector]:
    sysm = assemble_system(f1, f2, d, nu, generator_set)
    if not sysm.columns:
        return []
    out = []
    for vec in kernel_basis(sysm.matrix):
        terms = {k: c for k, c in zip(sysm.columns, vec) if c}
        out.append(JetVector(f1, f2, d, terms, sysm.nu))
    return out


# ---------------------------------------------------------------------------
# weight bookkeeping


def nu_from_s(w1: Sequence, w2: Sequence, d: int, s: int) -> tuple:
    """n=2 target weight (l1+m1-s, l2+m2+s-d)."""
    return (Q(w1[0]) + Q(w2[0]) - s, Q(w1[1]) + Q(w2[1]) + s - d)


def is_dominant(w: Sequence) -> bool:
    return all((Q(w[i]) - Q(w[i + 1])).denominator == 1 and Q(w[i]) >= Q(w[i + 1])
               for i in range(len(w) - 1))


def default_s_max(d: int) -> int:
    return 2 * d + 2


def _is_finite_plane(w) -> bool:
    lam = Q(w[0]) - Q(w[1])
    return lam.denominator == 1 and lam >= 0


def nu_candidates(n: int, w1: Sequence, w2: Sequence, d: int, policy: str = "all",
                  s_max: int | None = None) -> list[tuple]:
    """Target weights realized in degree d, in a fixed order."""
    if policy not in ("all", "balanced"):
        raise ValueError(f"unknown nu policy {policy!r}")
    w1 = tuple(Q(x) for x in w1)
    w2 = tuple(Q(x) for x in w2)
    if n == 1:
        out = [(w1[0] + w2[0] - d,)]
    elif n == 2:
        if _is_finite_plane(w1) and _is_finite_plane(w2):
            top = int(w1[0] - w1[1]) + int(w2[0] - w2[1]) + d
            if s_max is not None:
                top = min(top, s_max)
        else:
            top = default_s_max(d) if s_max is None else s_max
        out = [nu_from_s(w1, w2, d, s) for s in range(top + 1)]
    else:
        f1, f2 = make_fiber(n, w1), make_fiber(n, w2)
        seen = {}
        for key in jet_basis(f1, f2, d):
            seen.setdefault(key_weight(key, f1, f2), None)
        out = sorted(seen, reverse=True)
    total = sum(w1) + sum(w2) - d
    out = [nu for nu in out if sum(nu) == total]
    if policy == "balanced":
        out = [nu for nu in out if is_dominant(nu)]
    return out


def fibers_for(n: int, w1: Sequence, w2: Sequence, d: int, nu: Sequence,
               truncation: int | None = None) -> tuple[Fiber, Fiber]:
    """Build both fibers; infinite n=2 fibers get truncation s + d + 2."""
    if n == 2:
        s = Q(w1[0]) + Q(w2[0]) - Q(nu[0])
        if s.denominator != 1 or s < 0:
            auto = 0
        else:
            auto = int(s) + d + 2
        T = truncation if truncation is not None else auto
        return (make_fiber(2, w1, None if _is_finite_plane(w1) else T),
                make_fiber(2, w2, None if _is_finite_plane(w2) else T))
    return make_fiber(n, w1), make_fiber(n, w2)


@dataclass
class NuResult:
    nu: tuple
    kernel: list[JetVector]

    @property
    def kernel_dim(self) -> int:
        return len(self.kernel)


@dataclass
class PointResult:
    n: int
    d: int
    w1: tuple
    w2: tuple
    results: list[NuResult] = field(default_factory=list)
    error: str | None = None

    def kernel_dim(self, nu=None) -> int:
        if nu is None:
            return sum(r.kernel_dim for r in self.results)
        nu = tuple(Q(x) for x in nu)
        return sum(r.kernel_dim for r in self.results if r.nu == nu)

    def to_json(self, with_basis: bool = True) -> dict:
        out = {"weights": [[fmt_q(x) for x in self.w1], [fmt_q(x) for x in self.w2]],
               "density_weights": [[fmt_q(-x) for x in self.w1], [fmt_q(-x) for x in self.w2]],
               "degree": self.d,
               "results": []}
        for r in self.results:
            item = {"nu": [fmt_q(x) for x in r.nu], "kernel_dim": r.kernel_dim}
            if with_basis:
                item["basis"] = [v.to_json() for v in r.kernel]
            out["results"].append(item)
        out["error"] = self.error
        return out


def solve_point(n: int, w1: Sequence, w2: Sequence, d: int, nu: Sequence | None = None,
                generator_set: str = "minimal", nu_policy: str = "all",
                truncation: int | None = None, s_max: int | None = None) -> PointResult:
    w1 = tuple(Q(x) for x in w1)
    w2 = tuple(Q(x) for x in w2)
    if len(w1) != n or len(w2) != n:
        raise ValueError(f"weights must have {n} coordinates")
    res = PointResult(n, d, w1, w2)
    nus = [tuple(Q(x) for x in nu)] if nu is not None else \
        nu_candidates(n, w1, w2, d, nu_policy, s_max)
    for target in nus:
        f1, f2 = fibers_for(n, w1, w2, d, target, truncation)
        res.results.append(NuResult(target, singular_vectors(f1, f2, d, target, generator_set)))
    return res


# ---------------------------------------------------------------------------
# scans


@dataclass
class ScanReport:
    n: int
    d: int
    generator_set: str
    nu_policy: str
    points: list[PointResult]
    seconds: float = 0.0

    def nonzero(self) -> list[PointResult]:
        return [p for p in self.points if p.kernel_dim() > 0]


def _scan_task(args):
    n, d, w1, w2, gset, policy, s_max = args
    try:
        return solve_point(n, w1, w2, d, None, gset, policy, None, s_max)
    except (TruncationError, ValueError) as exc:
        res = PointResult(n, d, tuple(w1), tuple(w2))
        res.error = str(exc)
        return res


def default_jobs() -> int:
    try:
        return max(1, int(os.environ.get("INVBILIN_JOBS", "1")))
    except ValueError:
        return 1


def scan(n: int, d: int, grid: Sequence[tuple[Sequence, Sequence]], nu_policy: str = "all",
         generator_set: str = "minimal", jobs: int | None = None,
         s_max: int | None = None) -> ScanReport:
    """Solve every weight pair of ``grid``; results keep grid order."""
    jobs = default_jobs() if jobs is None else jobs
    tasks = [(n, d, tuple(Q(x) for x in w1), tuple(Q(x) for x in w2), generator_set,
              nu_policy, s_max) for w1, w2 in grid]
    t0 = time.perf_counter()
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            points = list(pool.map(_scan_task, tasks, chunksize=max(1, len(tasks) // (4 * jobs))))
    else:
        points = [_scan_task(t) for t in tasks]
    return ScanReport(n, d, generator_set, nu_policy, points, time.perf_counter() - t0)


def rational_range(start, stop, step) -> list[Fraction]:
    start, stop, step = Q(start), Q(stop), Q(step)
    if step <= 0:
        raise ValueError("grid step must be positive")
    out = []
    x = start
    while x <= stop:
        out.append(x)
        x += step
    return out


def n1_grid(values: Sequence) -> list[tuple[tuple, tuple]]:
    return [((l,), (m,)) for l in values for m in values]


# ---------------------------------------------------------------------------
# n = 1 parametric mode


def n1_parametric_system(d: int, generator_set: str = "full") -> SingularSystem:
    l = ParamPoly.var("l")
    m = ParamPoly.var("m")
    return assemble_system(LineFiber(l), LineFiber(m), d, None, generator_set)


@dataclass
class N1Locus:
    d: int
    locus: Locus
    certificates: dict  # point -> kernel basis (list of JetVector)

    def to_json(self) -> dict:
        def pt(p):
            return [fmt_q(p[0]), fmt_q(p[1])]

        cert = []
        for p, basis in self.certificates.items():
            cert.append({"point": pt(p), "kernel_dim": len(basis),
                         "basis": [v.to_json() for v in basis]})
        return {"degree": self.d,
                "whole_plane": self.locus.whole_plane,
                "lines": [{"l": fmt_q(ln.a), "m": fmt_q(ln.b), "c": fmt_q(ln.c),
                           "equation": str(ln)} for ln in self.locus.lines],
                "points": [pt(p) for p in self.locus.points],
                "curves": [str(c) for c in self.locus.curves],
                "non_rational_residual": [[str(p) for p in comp] for comp in self.locus.residual],
                "certificates": cert}


def n1_parametric_locus(d: int) -> N1Locus:
    """All rational (l, m) where the n=1 degree-d system has a nonzero kernel."""
    if not 1 <= d <= 6:
        raise ValueError("degree must be between 1 and 6")
    sysm = n1_parametric_system(d)
    k = len(sysm.columns)
    locus = minor_vanishing_locus(sysm.dense(), k)
    witnesses = list(locus.points)
    witnesses += [ln.witness() for ln in locus.lines]
    if locus.whole_plane:
        witnesses.append((Fraction(7, 5), Fraction(-3, 7)))
    certificates = {}
    for p in witnesses:
        f1, f2 = LineFiber(p[0]), LineFiber(p[1])
        certificates[p] = singular_vectors(f1, f2, d, None, "full")
    return N1Locus(d, locus, certificates)


def delta(i: int, d: int, l, m) -> Fraction:
    """(2l-i)(2l-i+1)(3m-j+1) + (2m-j)(2m-j+1)(3l-i+1) with j = d - i."""
    if not 1 <= i <= d - 1:
        raise ValueError(f"index i={i} outside 1..{d - 1}")
    l, m = Q(l), Q(m)
    j = d - i
    return (2 * l - i) * (2 * l - i + 1) * (3 * m - j + 1) + \
        (2 * m - j) * (2 * m - j + 1) * (3 * l - i + 1)
