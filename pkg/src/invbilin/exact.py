"""Exact arithmetic: rationals, polynomials in weight parameters, sparse
rational matrices and their kernels, rational roots, and the vanishing locus
of the maximal minors of a two-parameter polynomial matrix.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import sympy

Rational = Fraction


def Q(x) -> Fraction:
    """Coerce ints, Fractions and "p/q" strings to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return parse_rational(x)
    if isinstance(x, sympy.Rational):
        return Fraction(int(x.p), int(x.q))
    raise TypeError(f"not an exact rational: {x!r}")


def parse_rational(s: str) -> Fraction:
    s = s.strip()
    if not s:
        raise ValueError("empty rational")
    num, sep, den = s.partition("/")
    try:
        if sep:
            return Fraction(int(num), int(den))
        return Fraction(int(num))
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"bad rational {s!r}") from exc


def fmt_q(q) -> str:
    q = Q(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


# ---------------------------------------------------------------------------
# polynomials in the weight parameters


class ParamPoly:
    """Sparse polynomial with rational coefficients in named parameters.

    Immutable. Mixes with ints and Fractions under + - *, so code written
    for rational scalars also runs with symbolic weights.
    """

    __slots__ = ("variables", "terms", "_hash")

    def __init__(self, terms: Mapping[tuple, object] | None = None,
                 variables: Sequence[str] = ("l", "m")):
        self.variables = tuple(variables)
        clean = {}
        for e, c in (terms or {}).items():
            e = tuple(e)
            if len(e) != len(self.variables):
                raise ValueError("exponent length does not match variables")
            c = Q(c)
            if c:
                clean[e] = clean.get(e, 0) + c
                if not clean[e]:
                    del clean[e]
        self.terms = clean
        self._hash = None

    @classmethod
    def var(cls, name: str, variables: Sequence[str] = ("l", "m")) -> "ParamPoly":
        variables = tuple(variables)
        e = tuple(int(v == name) for v in variables)
        if sum(e) != 1:
            raise ValueError(f"unknown variable {name!r}")
        return cls({e: 1}, variables)

    @classmethod
    def const(cls, c, variables: Sequence[str] = ("l", "m")) -> "ParamPoly":
        return cls({(0,) * len(variables): c}, variables)

    def _coerce(self, other) -> "ParamPoly":
        if isinstance(other, ParamPoly):
            if other.variables != self.variables:
                raise ValueError("variable lists differ")
            return other
        return ParamPoly.const(Q(other), self.variables)

    def __add__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        t = dict(self.terms)
        for e, c in other.terms.items():
            t[e] = t.get(e, 0) + c
        return ParamPoly(t, self.variables)

    __radd__ = __add__

    def __neg__(self):
        return ParamPoly({e: -c for e, c in self.terms.items()}, self.variables)

    def __sub__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        t: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                t[e] = t.get(e, 0) + c1 * c2
        return ParamPoly(t, self.variables)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = ParamPoly.const(1, self.variables)
        for _ in range(k):
            out = out * self
        return out

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        try:
            other = self._coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.variables, frozenset(self.terms.items())))
        return self._hash

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def eval(self, point) -> Fraction:
        """Evaluate at a point given as a sequence or a name->value mapping."""
        if isinstance(point, Mapping):
            vals = [Q(point[v]) for v in self.variables]
        else:
            vals = [Q(v) for v in point]
        total = Fraction(0)
        for e, c in self.terms.items():
            term = c
            for v, k in zip(vals, e):
                if k:
                    term *= v ** k
            total += term
        return total

    def to_sympy(self):
        syms = sympy.symbols(self.variables)
        return sympy.Add(*[
            sympy.Rational(c.numerator, c.denominator)
            * sympy.Mul(*[s ** k for s, k in zip(syms, e)])
            for e, c in self.terms.items()])

    @classmethod
    def from_sympy(cls, expr, variables: Sequence[str] = ("l", "m")) -> "ParamPoly":
        syms = sympy.symbols(tuple(variables))
        poly = sympy.Poly(sympy.expand(expr), *syms)
        return cls({e: Q(c) for e, c in poly.terms()}, variables)

    def sorted_terms(self):
        # graded, then lexicographic with higher powers of the first variable first
        return sorted(self.terms.items(), key=lambda t: (-sum(t[0]), [-k for k in t[0]]))

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(f"{v}^{k}" for v, k in zip(self.variables, e) if k)
            parts.append(fmt_q(c) + ("*" + mono if mono else ""))
        return " + ".join(parts)

    def __repr__(self):
        return f"ParamPoly({self})"


# ---------------------------------------------------------------------------
# sparse matrices and kernels


@dataclass(frozen=True)
class SparseMat:
    rows: int
    cols: int
    entries: Mapping[tuple[int, int], Fraction] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for (r, c), v in self.entries.items():
            if not (0 <= r < self.rows and 0 <= c < self.cols):
                raise IndexError(f"entry ({r},{c}) outside {self.rows}x{self.cols}")
            v = Q(v)
            if v:
                clean[(r, c)] = v
        object.__setattr__(self, "entries", clean)

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence]) -> "SparseMat":
        nr = len(rows)
        nc = len(rows[0]) if nr else 0
        return cls(nr, nc, {(i, j): v for i, row in enumerate(rows)
                            for j, v in enumerate(row)})

    def to_dense(self) -> list[list[Fraction]]:
        out = [[Fraction(0)] * self.cols for _ in range(self.rows)]
        for (r, c), v in self.entries.items():
            out[r][c] = v
        return out

    def row_dicts(self) -> list[dict[int, Fraction]]:
        rows: list[dict] = [dict() for _ in range(self.rows)]
        for (r, c), v in self.entries.items():
            rows[r][c] = v
        return rows

    def apply(self, v: Sequence) -> list[Fraction]:
        out = [Fraction(0)] * self.rows
        for (r, c), x in self.entries.items():
            out[r] += x * v[c]
        return out


def _integer_row(row: Mapping[int, Fraction]) -> dict[int, int]:
    den = 1
    for v in row.values():
        den = den * v.denominator // math.gcd(den, v.denominator)
    ints = {c: int(v * den) for c, v in row.items()}
    return _primitive(ints)


def _primitive(row: dict[int, int]) -> dict[int, int]:
    g = 0
    for v in row.values():
        g = math.gcd(g, v)
    if g > 1:
        row = {c: v // g for c, v in row.items()}
    return row


def _echelon(rows: Iterable[Mapping[int, Fraction]], ncols: int):
    """Fraction-free reduction to a form where every pivot column is
    cleared in all other rows. Rows are kept as primitive integer vectors.
    Returns a list of (pivot_col, row) sorted by pivot column.
    """
    pending = [_integer_row(r) for r in rows]
    pending = [r for r in pending if r]
    pivots: dict[int, dict[int, int]] = {}
    for row in pending:
        # reduce the incoming row by the existing pivots
        for pc, prow in pivots.items():
            a = row.get(pc)
            if a:
                row = _combine(row, prow, pc)
        if not row:
            continue
        pc = min(row)
        if row[pc] < 0:
            row = {c: -v for c, v in row.items()}
        # clear the new pivot column from the existing pivot rows
        for qc in list(pivots):
            if pivots[qc].get(pc):
                pivots[qc] = _combine(pivots[qc], row, pc)
        pivots[pc] = row
    return sorted(pivots.items())


def _combine(row: dict[int, int], prow: dict[int, int], pc: int) -> dict[int, int]:
    """row*p - prow*a with p, a the entries in column pc; result is primitive."""
    p = prow[pc]
    a = row[pc]
    g = math.gcd(p, a)
    p //= g
    a //= g
    out = {c: v * p for c, v in row.items()}
    for c, v in prow.items():
        nv = out.get(c, 0) - a * v
        if nv:
            out[c] = nv
        else:
            out.pop(c, None)
    return _primitive(out)


def rank(M: SparseMat) -> int:
    return len(_echelon(M.row_dicts(), M.cols))


def rref(vectors: Sequence[Sequence], ncols: int | None = None) -> list[list[Fraction]]:
    """Reduced row echelon form of the span of ``vectors`` (zero rows dropped)."""
    if ncols is None:
        ncols = len(vectors[0]) if vectors else 0
    rows = [{i: Q(x) for i, x in enumerate(v) if x} for v in vectors]
    out = []
    for pc, row in _echelon(rows, ncols):
        p = row[pc]
        vec = [Fraction(0)] * ncols
        for c, v in row.items():
            vec[c] = Fraction(v, p)
        out.append(vec)
    return out


def kernel_basis(M: SparseMat) -> list[list[Fraction]]:
    """Basis of {v : Mv = 0}, in reduced row echelon form.

    Each vector has leading coordinate 1, and vectors are ordered by the
    position of that leading coordinate, so the output depends only on the
    kernel as a subspace.
    """
    ech = _echelon(M.row_dicts(), M.cols)
    pivot_cols = {pc for pc, _ in ech}
    free = [c for c in range(M.cols) if c not in pivot_cols]
    basis = []
    for f in free:
        v = [Fraction(0)] * M.cols
        v[f] = Fraction(1)
        for pc, row in ech:
            x = row.get(f)
            if x:
                v[pc] = Fraction(-x, row[pc])
        basis.append(v)
    # canonical form: reduce the spanning set itself
    return rref(basis, M.cols) if basis else []


class SpanSolver:
    """Coordinates of vectors in the span of a fixed independent list."""

    def __init__(self, vecs: Sequence[dict], labels: Sequence[int]):
        self.labels = list(labels)
        keys = sorted(set().union(*vecs))
        self.keys = keys
        m = len(vecs)
        # rows: [vector coords | identity], reduce the vector part
        rows = []
        for r, v in enumerate(vecs):
            row = [Fraction(v.get(k, 0)) for k in keys] + [Fraction(int(r == s)) for s in range(m)]
            rows.append(row)
        pivots = []
        nk = len(keys)
        r = 0
        for c in range(nk):
            piv = next((i for i in range(r, m) if rows[i][c]), None)
            if piv is None:
                continue
            rows[r], rows[piv] = rows[piv], rows[r]
            p = rows[r][c]
            rows[r] = [x / p for x in rows[r]]
            for i in range(m):
                if i != r and rows[i][c]:
                    f = rows[i][c]
                    rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
            pivots.append(c)
            r += 1
        self.pivots = pivots
        self.rows = rows
        self.nk = nk

    def coords(self, t: Mapping[tuple, Fraction]) -> dict:
        out: dict = {}
        for r, c in enumerate(self.pivots):
            x = t.get(self.keys[c], 0)
            if not x:
                continue
            for s, y in enumerate(self.rows[r][self.nk:]):
                if y:
                    out[self.labels[s]] = out.get(self.labels[s], 0) + x * y
        return {k: v for k, v in out.items() if v}


# ---------------------------------------------------------------------------
# roots


def _univariate(p: ParamPoly) -> tuple[int | None, list[Fraction]]:
    """Return (variable index, dense coefficients low->high)."""
    idx = None
    for e in p.terms:
        for k, x in enumerate(e):
            if x:
                if idx is not None and idx != k:
                    raise ValueError("polynomial is not univariate")
                idx = k
    deg = max((sum(e) for e in p.terms), default=0)
    coeffs = [Fraction(0)] * (deg + 1)
    for e, c in p.terms.items():
        coeffs[sum(e)] = c
    return idx, coeffs


def _divisors(n: int) -> list[int]:
    n = abs(n)
    divs = [1]
    for prime, k in sympy.factorint(n).items():
        divs = [d * prime ** j for d in divs for j in range(k + 1)]
    return divs


def rational_roots(p: ParamPoly) -> set[Fraction]:
    """All rational roots of a univariate polynomial (rational root theorem)."""
    if not p:
        raise ValueError("polynomial is identically zero")
    _, coeffs = _univariate(p)
    den = 1
    for c in coeffs:
        den = den * c.denominator // math.gcd(den, c.denominator)
    ints = [int(c * den) for c in coeffs]
    roots: set[Fraction] = set()
    # strip the factor x^k
    k = 0
    while ints[k] == 0:
        k += 1
    if k:
        roots.add(Fraction(0))
    ints = ints[k:]
    g = 0
    for v in ints:
        g = math.gcd(g, v)
    ints = [v // g for v in ints]
    if len(ints) == 1:
        return roots
    a0, an = ints[0], ints[-1]
    for num in _divisors(a0):
        for den_ in _divisors(an):
            for sign in (1, -1):
                r = Fraction(sign * num, den_)
                if r in roots:
                    continue
                acc = Fraction(0)
                for c in reversed(ints):
                    acc = acc * r + c
                if acc == 0:
                    roots.add(r)
    return roots


# ---------------------------------------------------------------------------
# vanishing locus of minors


@dataclass(frozen=True)
class Line:
    """The affine line a*l + b*m = c (normalized: first nonzero of (a, b) is 1)."""
    a: Fraction
    b: Fraction
    c: Fraction

    def contains(self, pt) -> bool:
        return self.a * pt[0] + self.b * pt[1] == self.c

    def witness(self) -> tuple[Fraction, Fraction]:
        # a rational point on the line, chosen away from the obvious special values
        if self.b == 0:
            return (self.c / self.a, Fraction(7, 5))
        return (Fraction(7, 5), (self.c - self.a * Fraction(7, 5)) / self.b)

    def __str__(self):
        parts = []
        for coef, name in ((self.a, "l"), (self.b, "m")):
            if coef == 0:
                continue
            s = name if coef == 1 else ("-" + name if coef == -1 else f"{fmt_q(coef)}*{name}")
            parts.append(s)
        lhs = " + ".join(parts).replace("+ -", "- ")
        return f"{lhs} = {fmt_q(self.c)}"


@dataclass
class Locus:
    """Rational solutions of rank M < k, split into components."""
    whole_plane: bool = False
    lines: list[Line] = field(default_factory=list)
    points: list[tuple[Fraction, Fraction]] = field(default_factory=list)
    curves: list[ParamPoly] = field(default_factory=list)
    # each residual component is a list of defining polynomials
    residual: list[list[ParamPoly]] = field(default_factory=list)

    def is_empty(self) -> bool:
        return not (self.whole_plane or self.lines or self.points or self.curves)

    def contains(self, pt) -> bool:
        pt = (Q(pt[0]), Q(pt[1]))
        if self.whole_plane:
            return True
        if any(ln.contains(pt) for ln in self.lines):
            return True
        if any(c.eval(pt) == 0 for c in self.curves):
            return True
        return pt in self.points


def _to_sym(entry, syms):
    if isinstance(entry, ParamPoly):
        return entry.to_sympy()
    return sympy.Rational(Q(entry).numerator, Q(entry).denominator)


def _minors(M, k: int, syms):
    from sympy.polys.matrices import DomainMatrix
    dom = sympy.QQ[syms]
    rows = len(M)
    cols = len(M[0]) if rows else 0
    dm = [[dom.from_sympy(_to_sym(e, syms)) for e in row] for row in M]
    out = []
    for rs in itertools.combinations(range(rows), k):
        for cs in itertools.combinations(range(cols), k):
            sub = DomainMatrix([[dm[r][c] for c in cs] for r in rs], (k, k), dom)
            det = sub.det()
            if det:
                out.append(dom.to_sympy(det))
    return out


def minor_vanishing_locus(M: Sequence[Sequence], k: int,
                          variables: Sequence[str] = ("l", "m")) -> Locus:
    """Rational points (l, m) where the matrix M(l, m) has rank < k.

    Lines come from linear factors of the gcd G of all k×k minors; other
    factors of G are reported as curves. The remaining isolated points are
    the common zeros of the cofactors minor/G, found through a resultant and
    rational_roots and then checked against every minor. Irrational
    candidates are never approximated; they show up as ``residual``.
    """
    if len(variables) != 2:
        raise ValueError("unsupported: exactly two parameters are required")
    for row in M:
        for e in row:
            if isinstance(e, ParamPoly) and e.variables != tuple(variables):
                raise ValueError("unsupported: entries use other parameters")
    rows = len(M)
    cols = len(M[0]) if rows else 0
    if rows < k or cols < k:
        return Locus(whole_plane=True)
    syms = sympy.symbols(tuple(variables))
    lvar, mvar = syms
    minors = _minors(M, k, syms)
    if not minors:
        return Locus(whole_plane=True)
    G = minors[0]
    for mi in minors[1:]:
        G = sympy.gcd(G, mi)
    locus = Locus()
    _, factors = sympy.factor_list(G, *syms)
    for fac, _mult in factors:
        pf = sympy.Poly(fac, *syms)
        if pf.total_degree() == 1:
            a = Q(pf.coeff_monomial(lvar))
            b = Q(pf.coeff_monomial(mvar))
            c = -Q(pf.coeff_monomial(1))
            lead = a if a else b
            locus.lines.append(Line(a / lead, b / lead, c / lead))
        elif pf.total_degree() > 1:
            locus.curves.append(ParamPoly.from_sympy(fac, variables))
    locus.lines.sort(key=lambda ln: (ln.a, ln.b, ln.c))

    cof = [sympy.cancel(mi / G) for mi in minors]
    cof = [sympy.Poly(c, *syms) for c in cof]
    if any(c.total_degree() <= 0 for c in cof):
        # some cofactor is a nonzero constant: no extra points
        return locus
    points, residual = _common_zeros(cof, syms)
    for pt in points:
        if not any(ln.contains(pt) for ln in locus.lines) and \
                not any(c.eval(pt) == 0 for c in locus.curves):
            locus.points.append(pt)
    locus.points.sort()
    locus.residual = [[ParamPoly.from_sympy(r, variables) for r in comp] for comp in residual]
    return locus


def _common_zeros(polys, syms):
    """Rational common zeros of polynomials with trivial common factor."""
    lvar, mvar = syms
    # two integer combinations with a nonzero resultant; deterministic choice
    R = None
    for trial in range(1, 40):
        A = sum((((i * 7 + trial) % 11) + 1) * p for i, p in enumerate(polys))
        B = sum((((i * 5 + 3 * trial) % 13) + 1) * p for i, p in enumerate(polys))
        if A.is_zero or B.is_zero:
            continue
        res = sympy.resultant(A.as_expr(), B.as_expr(), lvar)
        if res != 0:
            R = sympy.Poly(res, mvar)
            break
    if R is None:
        raise RuntimeError("could not separate common zeros")
    points = []
    residual = []
    if R.degree() <= 0:
        return points, residual
    _, rfactors = sympy.factor_list(R.as_expr(), mvar)
    for fac, _ in rfactors:
        fpoly = sympy.Poly(fac, mvar)
        if fpoly.degree() == 1:
            m0 = -Q(fpoly.coeff_monomial(1)) / Q(fpoly.coeff_monomial(mvar))
            sub = [sympy.Poly(p.as_expr().subs(mvar, sympy.Rational(m0.numerator, m0.denominator)), lvar)
                   for p in polys]
            g = sub[0]
            for s in sub[1:]:
                g = sympy.gcd(g, s)
            if g.is_zero:
                raise RuntimeError("cofactors share a vertical component")
            if g.degree() <= 0:
                continue
            _, lf = sympy.factor_list(g.as_expr(), lvar)
            for lfac, _ in lf:
                lp = sympy.Poly(lfac, lvar)
                if lp.degree() == 1:
                    l0 = -Q(lp.coeff_monomial(1)) / Q(lp.coeff_monomial(lvar))
                    points.append((l0, m0))
                else:
                    residual.append([lfac, mvar - sympy.Rational(m0.numerator, m0.denominator)])
        else:
            # possible common zeros with irrational m; kept unsolved
            if _may_share_root(polys, fac, syms):
                residual.append([fac])
    return sorted(set(points)), residual


def _may_share_root(polys, fac, syms) -> bool:
    """Cheap necessary test: fac(m) divides Res_l(p0, p_i) for every i."""
    lvar, mvar = syms
    p0 = polys[0]
    for p in polys[1:]:
        r = sympy.resultant(p0.as_expr(), p.as_expr(), lvar)
        if r != 0 and sympy.rem(sympy.Poly(r, mvar), sympy.Poly(fac, mvar)) != 0:
            return False
    return True
