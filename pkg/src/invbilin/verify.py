"""Invariance checks for bilinear operators, and coefficient fitting.

The residual of B at a vector field xi is

    R(xi; s, t) = L_xi B(s, t) - B(L_xi s, t) - B(s, L_xi t).

All catalog operators have constant coefficients, so R is a trilinear
differential operator with constant coefficients in the jets of (xi, s, t),
homogeneous of total order ord(B) + 1.  The "reduced" mode therefore checks
only monomial triples whose degrees sum to at most ord(B) + 1; the set of
triples within the degree bounds is closed under lowering degrees, so this is
equivalent to checking every triple within the bounds.  The "exhaustive" mode
checks every triple and is kept as a cross-check.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterator, Sequence

from . import tensors as T
from .catalog import Operator, Slot, density_template, get_operator
from .exact import Q, SparseMat, fmt_q, kernel_basis
from .jets import FieldMonomial
from .solver import divergence_free_fields, render_combo
from .tensors import Function, TensorField, VectorFieldPoly


@dataclass
class Residual:
    field: TensorField
    xi: VectorFieldPoly
    s1: TensorField
    s2: TensorField
    validity: int | None = None

    def is_zero(self) -> bool:
        return self.field.is_zero()


def residual(op: Operator, xi, s1: TensorField, s2: TensorField) -> Residual:
    """Exact invariance defect of ``op`` at the field ``xi``."""
    if not isinstance(xi, VectorFieldPoly):
        xi = VectorFieldPoly.from_field(xi)
    b = op.apply(s1, s2)
    r = (T.lie_derivative(xi, b)
         - op.apply(T.lie_derivative(xi, s1), s2)
         - op.apply(s1, T.lie_derivative(xi, s2)))
    return Residual(r, xi, s1, s2)


# ---------------------------------------------------------------------------
# test data


@dataclass(frozen=True)
class TestField:
    label: str
    xi: VectorFieldPoly
    degree: int


def test_fields(n: int, Dmax: int, algebra: str = "vect") -> list[TestField]:
    """Monomial fields of degree <= Dmax, or a basis of the divergence-free
    fields of each degree for algebra="svect"."""
    out = []
    for k in range(Dmax + 1):
        if algebra == "vect":
            from .jets import monomials
            for a in monomials(n, k):
                for b in range(n):
                    f = FieldMonomial(a, b)
                    out.append(TestField(str(f), VectorFieldPoly.monomial(a, b), k))
        elif algebra == "svect":
            for combo in divergence_free_fields(n, k):
                out.append(TestField(render_combo(combo), VectorFieldPoly.from_field(combo), k))
        else:
            raise ValueError(f"unknown algebra {algebra!r} (vect or svect)")
    return out


def input_basis(slot: Slot, n: int, deg: int) -> list[TensorField]:
    """Monomial sections of the slot with coefficients of exact degree ``deg``."""
    from .jets import monomials
    out = []
    seen = set()
    for key in slot.kind.keys(n):
        for e in monomials(n, deg):
            s = TensorField.monomial(n, slot.kind, key, e, 1, slot.twist)
            if slot.constraint == "traceless":
                s = T.traceless_part(s)
                s = TensorField(n, slot.kind, s.comps, slot.twist)
                if s.is_zero():
                    continue
                sig = repr(s)
                if sig in seen:
                    continue
                seen.add(sig)
            out.append(s)
    return out


def _triples(op: Operator, Dmax: int, K: int, algebra: str, mode: str) -> Iterator:
    n = op.n
    fields = test_fields(n, Dmax, algebra)
    by_deg1 = {k: input_basis(op.inputs[0], n, k) for k in range(K + 1)}
    by_deg2 = {k: input_basis(op.inputs[1], n, k) for k in range(K + 1)}
    top = op.order + 1
    for total in range(0, Dmax + 2 * K + 1):
        if mode == "reduced" and total > top:
            break
        for f in fields:
            for k1 in range(K + 1):
                k2 = total - f.degree - k1
                if not 0 <= k2 <= K:
                    continue
                for s1 in by_deg1[k1]:
                    for s2 in by_deg2[k2]:
                        yield f, s1, s2


@dataclass
class VerifyReport:
    op: str
    n: int
    Dmax: int
    K: int
    algebra: str
    mode: str
    passed: bool
    checked: int
    witness: dict | None = None
    signature: str = ""

    def to_json(self) -> dict:
        return {"op": self.op, "n": self.n, "Dmax": self.Dmax, "K": self.K,
                "algebra": self.algebra, "mode": self.mode, "signature": self.signature,
                "verdict": "pass" if self.passed else "fail", "checked": self.checked,
                "witness": self.witness}


def witness_json(tf: TestField, r: Residual) -> dict:
    div = r.xi.div()
    return {"xi": tf.label,
            "xi_div": T.function(r.xi.n, div).to_json()["coeffs"],
            "xi_div_zero": not div,
            "s1": r.s1.to_json(), "s2": r.s2.to_json(), "residual": r.field.to_json()}


def verify(op, n: int | None = None, Dmax: int = 3, K: int = 3, algebra: str = "vect",
           mode: str = "reduced", **params) -> VerifyReport:
    """Check invariance of ``op`` on all monomial test data within the bounds.

    ``op`` is an Operator, an OpId or a tag (then ``n`` and ``params`` select
    the instance).  The first nonzero residual in the fixed enumeration order
    is returned as the witness.
    """
    if not isinstance(op, Operator):
        if n is None:
            raise ValueError("n is required when op is not an Operator")
        op = get_operator(op, n, **params)
    if Dmax < 0 or K < 0:
        raise ValueError("Dmax and K must be >= 0")
    if mode not in ("reduced", "exhaustive"):
        raise ValueError(f"unknown mode {mode!r}")
    checked = 0
    for tf, s1, s2 in _triples(op, Dmax, K, algebra, mode):
        r = residual(op, tf.xi, s1, s2)
        checked += 1
        if not r.is_zero():
            return VerifyReport(str(op.id), op.n, Dmax, K, algebra, mode, False, checked,
                                witness_json(tf, r), op.signature())
    return VerifyReport(str(op.id), op.n, Dmax, K, algebra, mode, True, checked, None,
                        op.signature())


# ---------------------------------------------------------------------------
# fitting


@dataclass
class Template:
    """The family sum_i c_i B_i of operators sharing one signature."""
    n: int
    inputs: tuple[Slot, Slot]
    output: Slot
    order: int
    terms: list[Callable]
    labels: list[str]

    def member(self, coeffs) -> Operator:
        coeffs = [Q(c) for c in coeffs]

        def fn(s1, s2):
            out = T.zero(self.n, self.output.kind, self.output.twist)
            for c, t in zip(coeffs, self.terms):
                if c:
                    out = out + t(s1, s2).scale(c)
            return out
        from .catalog import OpId
        text = " + ".join(f"{fmt_q(c)}*{l}" for c, l in zip(coeffs, self.labels) if c) or "0"
        return Operator(OpId("template", (("combination", text),)), self.n, self.inputs,
                        self.output, self.order, text, fn)


def density_pair_template(a, b, d: int) -> Template:
    """All order-d terms f^(d-i) g^(i) on (Vol^a, Vol^b) -> Vol^(a+b+d), n=1."""
    a, b = Q(a), Q(b)
    terms, labels = [], []
    for i in range(d + 1):
        coeffs = [0] * (d + 1)
        coeffs[i] = 1
        terms.append(density_template(coeffs, a, b, d))
        labels.append(_deriv_label("f", d - i) + _deriv_label("g", i))
    return Template(1, (Slot(Function(), a), Slot(Function(), b)),
                    Slot(Function(), a + b + d), d, terms, labels)


def _deriv_label(name: str, k: int) -> str:
    return name + ("'" * k if k <= 3 else f"^({k})")


def fit_coefficients(template: Template, Dmax: int = 3, K: int | None = None,
                     algebra: str = "vect") -> list[list[Fraction]]:
    """Basis (canonical echelon form) of the coefficient vectors c for which
    sum_i c_i B_i is invariant on all test data within the bounds."""
    if not template.terms:
        raise ValueError("empty template")
    if K is None:
        K = template.order + 1
    probe = template.member([1] * len(template.terms))
    rows: dict = {}
    ncols = len(template.terms)
    members = [template.member([int(i == j) for i in range(ncols)]) for j in range(ncols)]
    for tf, s1, s2 in _triples(probe, Dmax, K, algebra, "reduced"):
        for col, m in enumerate(members):
            r = residual(m, tf.xi, s1, s2).field
            for key, e, c in r.terms():
                rows.setdefault((tf.label, repr(s1), repr(s2), key, e), {})[col] = c
    entries = {}
    for r, row in enumerate(rows.values()):
        for c, v in row.items():
            entries[(r, c)] = v
    M = SparseMat(max(len(rows), 1), ncols, entries)
    return kernel_basis(M)


def describe_t2(basis: Sequence[Sequence[Fraction]]) -> dict:
    """Compare a fitted order-3 density operator with the printed variants."""
    from .catalog import T2_PRINTED
    out = {"dimension": len(basis), "fitted": [[fmt_q(x) for x in v] for v in basis],
           "matches": []}
    if len(basis) == 1:
        v = list(basis[0])
        for name, coeffs in T2_PRINTED.items():
            if _proportional(v, coeffs):
                out["matches"].append(name)
    return out


def _proportional(u, v) -> bool:
    u = [Q(x) for x in u]
    v = [Q(x) for x in v]
    if not any(u) or not any(v):
        return not any(u) and not any(v)
    i = next(k for k, x in enumerate(v) if x)
    if not u[i]:
        return False
    r = u[i] / v[i]
    return all(x == r * y for x, y in zip(u, v))
