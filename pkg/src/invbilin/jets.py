"""The bilinear dual jet module: polynomials in d'_1..d'_n, d''_1..d''_n
tensored with V1* ⊗ V2*, and the action of polynomial vector fields on it.

A field x^a d_b acts on each slot by

    d^alpha ⊗ u  ->  -ff(alpha, a) d^(alpha-a+e_b) ⊗ u
                     + sum_j a_j ff(alpha, a-e_j) d^(alpha-a+e_j) ⊗ rho*(E^j_b) u

with ff the multi-index falling factorial, and on the pair by the sum of the
two slot actions.
"""
from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Mapping, NamedTuple, Sequence

from .exact import Q, fmt_q
from .fibers import Fiber


class JetKey(NamedTuple):
    alpha1: tuple
    alpha2: tuple
    i: int
    j: int

    @property
    def degree(self) -> int:
        return sum(self.alpha1) + sum(self.alpha2)


class FieldMonomial(NamedTuple):
    """The vector field x^a d/dx_b (b is 0-based)."""
    a: tuple
    b: int

    @property
    def n(self) -> int:
        return len(self.a)

    def weight(self) -> tuple:
        return tuple(x - (k == self.b) for k, x in enumerate(self.a))

    def __str__(self):
        mono = "".join(f"x{k + 1}" + (f"^{e}" if e > 1 else "") for k, e in enumerate(self.a) if e)
        return (mono or "1") + f"*d{self.b + 1}"


def field(a: Sequence[int], b: int) -> FieldMonomial:
    return FieldMonomial(tuple(a), b)


def bracket(xi: FieldMonomial, eta: FieldMonomial) -> list[tuple[int, FieldMonomial]]:
    """Lie bracket [x^a d_b, x^c d_e] as a list of (coefficient, monomial field)."""
    a, b = xi
    c, e = eta
    out: dict[FieldMonomial, int] = {}
    if c[b]:
        m = tuple(x + y - (k == b) for k, (x, y) in enumerate(zip(a, c)))
        out[FieldMonomial(m, e)] = out.get(FieldMonomial(m, e), 0) + c[b]
    if a[e]:
        m = tuple(x + y - (k == e) for k, (x, y) in enumerate(zip(a, c)))
        out[FieldMonomial(m, b)] = out.get(FieldMonomial(m, b), 0) - a[e]
    return [(v, k) for k, v in sorted(out.items()) if v]


def ff(alpha: Sequence[int], beta: Sequence[int]) -> int:
    out = 1
    for x, y in zip(alpha, beta):
        if x < y:
            return 0
        for t in range(y):
            out *= x - t
    return out


def monomials(nvars: int, d: int) -> list[tuple]:
    """All exponent tuples of total degree d, lexicographically descending."""
    out = []
    for cut in itertools.combinations_with_replacement(range(nvars), d):
        e = [0] * nvars
        for c in cut:
            e[c] += 1
        out.append(tuple(e))
    return sorted(set(out), reverse=True)


def key_weight(key: JetKey, f1: Fiber, f2: Fiber) -> tuple:
    w1 = f1.weight(key.i)
    w2 = f2.weight(key.j)
    return tuple(x + y - p - q for x, y, p, q in zip(w1, w2, key.alpha1, key.alpha2))


def jet_basis(f1: Fiber, f2: Fiber, d: int, nu: Sequence | None = None) -> list[JetKey]:
    if f1.n != f2.n:
        raise ValueError("fibers over different n")
    n = f1.n
    nu = None if nu is None else tuple(Q(x) for x in nu)
    w1 = {i: f1.weight(i) for i in f1.indices()}
    w2 = {j: f2.weight(j) for j in f2.indices()}
    out = []
    for e in monomials(2 * n, d):
        a1, a2 = e[:n], e[n:]
        for i in f1.indices():
            for j in f2.indices():
                if nu is not None:
                    w = tuple(x + y - p - q for x, y, p, q in zip(w1[i], w2[j], a1, a2))
                    if w != nu:
                        continue
                out.append(JetKey(a1, a2, i, j))
    return out


def degree_weights(f1: Fiber, f2: Fiber, d: int) -> list[tuple]:
    """Distinct key weights in degree d, in order of first appearance."""
    seen = {}
    for key in jet_basis(f1, f2, d):
        seen.setdefault(key_weight(key, f1, f2), None)
    return list(seen)


@lru_cache(maxsize=None)
def _slot_action(fiber: Fiber, a: tuple, b: int, alpha: tuple, k: int) -> tuple:
    n = len(a)
    out: dict = {}
    f0 = ff(alpha, a)
    if f0:
        new = tuple(x - y + (t == b) for t, (x, y) in enumerate(zip(alpha, a)))
        out[(new, k)] = out.get((new, k), 0) - f0
    for j in range(n):
        if not a[j]:
            continue
        am = tuple(y - (t == j) for t, y in enumerate(a))
        f = ff(alpha, am)
        if not f:
            continue
        new = tuple(x - y for x, y in zip(alpha, am))
        for k2, c in fiber.act(j, b, k).items():
            out[(new, k2)] = out.get((new, k2), 0) + a[j] * f * c
    return tuple((key, c) for key, c in out.items() if c)


def act_on_key(xi: FieldMonomial, key: JetKey, f1: Fiber, f2: Fiber) -> dict:
    out: dict = {}
    for (al, i), c in _slot_action(f1, xi.a, xi.b, key.alpha1, key.i):
        k = JetKey(al, key.alpha2, i, key.j)
        out[k] = out.get(k, 0) + c
    for (al, j), c in _slot_action(f2, xi.a, xi.b, key.alpha2, key.j):
        k = JetKey(key.alpha1, al, key.i, j)
        out[k] = out.get(k, 0) + c
    return {k: c for k, c in out.items() if c}


class JetVector:
    """Element of the jet module, homogeneous of degree ``degree``."""

    __slots__ = ("f1", "f2", "degree", "terms", "weight")

    def __init__(self, f1: Fiber, f2: Fiber, degree: int,
                 terms: Mapping[JetKey, object] | None = None, weight: Sequence | None = None):
        self.f1 = f1
        self.f2 = f2
        self.degree = degree
        self.weight = None if weight is None else tuple(weight)
        clean = {}
        for k, c in (terms or {}).items():
            if not c:
                continue
            if k.degree != degree:
                raise ValueError(f"key {k} has degree {k.degree}, expected {degree}")
            if self.weight is not None and key_weight(k, f1, f2) != self.weight:
                raise ValueError(f"key {k} has the wrong weight")
            clean[k] = c
        self.terms = clean

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def _same_space(self, other: "JetVector"):
        if other.f1 is not self.f1 or other.f2 is not self.f2:
            raise ValueError("jet vectors over different fibers")

    def __add__(self, other: "JetVector") -> "JetVector":
        self._same_space(other)
        if self.terms and other.terms and self.degree != other.degree:
            raise ValueError("degrees differ")
        deg = self.degree if self.terms else other.degree
        t = dict(self.terms)
        for k, c in other.terms.items():
            t[k] = t.get(k, 0) + c
        return JetVector(self.f1, self.f2, deg, t)

    def scale(self, c) -> "JetVector":
        return JetVector(self.f1, self.f2, self.degree,
                         {k: v * c for k, v in self.terms.items()}, self.weight)

    def __sub__(self, other):
        return self + other.scale(-1)

    def __eq__(self, other):
        if not isinstance(other, JetVector):
            return NotImplemented
        return self.terms == other.terms and (not self.terms or self.degree == other.degree)

    def sorted_terms(self):
        return sorted(self.terms.items(),
                      key=lambda kv: ([-x for x in kv[0].alpha1 + kv[0].alpha2], kv[0].i, kv[0].j))

    def to_json(self) -> dict:
        return {"degree": self.degree,
                "terms": [{"dp1": list(k.alpha1), "dp2": list(k.alpha2), "i": k.i, "j": k.j,
                           "c": fmt_q(c) if not hasattr(c, "variables") else str(c)}
                          for k, c in self.sorted_terms()]}

    def __str__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"({fmt_q(c) if not hasattr(c, 'variables') else c})*{render_key(k)}"
                          for k, c in self.sorted_terms())

    __repr__ = __str__


def render_key(k: JetKey) -> str:
    def part(alpha, prime):
        return "".join(f"d{prime}{t + 1}" + (f"^{e}" if e > 1 else "")
                       for t, e in enumerate(alpha) if e)
    p1 = part(k.alpha1, "'")
    p2 = part(k.alpha2, "''")
    return f"{p1 or ''}v{k.i}⊗{p2 or ''}w{k.j}"


def act_field(xi: FieldMonomial, v: JetVector) -> JetVector:
    if xi.n != v.f1.n:
        raise ValueError("field and jet vector over different n")
    out: dict = {}
    for key, c in v.terms.items():
        for k2, c2 in act_on_key(xi, key, v.f1, v.f2).items():
            out[k2] = out.get(k2, 0) + c * c2
    deg = v.degree - sum(xi.a) + 1
    if deg < 0:
        return JetVector(v.f1, v.f2, 0, {})
    return JetVector(v.f1, v.f2, deg, out)


def act_slot(i: int, j: int, slot: int, v: JetVector) -> JetVector:
    """Apply rho*(E^i_j) to one tensor slot only (slot 1 or 2)."""
    out: dict = {}
    fib = v.f1 if slot == 1 else v.f2
    for key, c in v.terms.items():
        idx = key.i if slot == 1 else key.j
        for k2, c2 in fib.act(i, j, idx).items():
            nk = key._replace(i=k2) if slot == 1 else key._replace(j=k2)
            out[nk] = out.get(nk, 0) + c * c2
    return JetVector(v.f1, v.f2, v.degree, out)


def act_sum(terms: Iterable[tuple[object, FieldMonomial]], v: JetVector) -> JetVector:
    """Action of a linear combination of monomial fields."""
    out = None
    for c, xi in terms:
        w = act_field(xi, v).scale(c)
        out = w if out is None else out + w
    return out if out is not None else JetVector(v.f1, v.f2, v.degree, {})


def _falling(x, k: int):
    out = Fraction(1)
    for t in range(k):
        out *= x - t
    return out


def _as_poly(P) -> Callable:
    if callable(P):
        return P
    coeffs = [Q(c) for c in P]
    return lambda i: sum((c * Fraction(i) ** k for k, c in enumerate(coeffs)), Fraction(0))


def act_su_pair(s: int, P, f1: Fiber, f2: Fiber) -> JetVector:
    """The degree-0 element (s; P(i)) of V1* ⊗ V2* for n=2.

    It is sum_i (-1)^i P(i) v_i ⊗ w_(s-i) / (lam^(i) mu^(s-i)) with falling
    powers lam^(i) = lam(lam-1)...(lam-i+1); this is the factorial form
    (lam-i)!(mu-s+i)! divided by the constant lam!mu!, so it makes sense for
    any weights and obeys the x+, x'-, x''- relations with exactly the
    printed coefficients. P is a callable or a coefficient list in i.
    """
    if f1.n != 2 or f2.n != 2:
        raise ValueError("(s; P) elements are defined for n=2")
    lam = f1.top_weight[0] - f1.top_weight[1]
    mu = f2.top_weight[0] - f2.top_weight[1]
    P = _as_poly(P)
    terms = {}
    for i in range(s + 1):
        j = s - i
        if i > f1.truncation or j > f2.truncation:
            if (not f1.finite and i > f1.truncation) or (not f2.finite and j > f2.truncation):
                raise IndexError(f"(s; P) with s={s} exceeds the fiber truncation")
            continue
        den = _falling(lam, i) * _falling(mu, j)
        c = Fraction((-1) ** i) * Q(P(i)) / den
        if c:
            terms[JetKey((0, 0), (0, 0), i, j)] = c
    return JetVector(f1, f2, 0, terms)
