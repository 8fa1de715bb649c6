"""Polynomial tensor fields on Q^n with exact exterior calculus.

A field is a map from fiber basis keys to polynomials in x (dicts from
exponent tuples to Fractions). Fiber kinds carry the forward gl(n) action
rho(E^a_b), with E^a_b matching the linear field x_a d/dx_b, so that

    L_xi (phi v) = xi(phi) v + sum_{i,j} (d xi_i / d x_j) phi rho(E^j_i) v
                   + twist * Div(xi) phi v.

Polyvectors are polynomials in odd symbols xc_1..xc_n with basis monomials
stored as increasing index tuples; symmetric tensors are polynomials in
commuting momenta p_1..p_n stored as exponent tuples.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from .exact import Q, SpanSolver, SparseMat, fmt_q, kernel_basis

# ---------------------------------------------------------------------------
# polynomials in x


def padd(p: dict, q: Mapping, c=1) -> dict:
    out = dict(p)
    for e, v in q.items():
        nv = out.get(e, 0) + c * v
        if nv:
            out[e] = nv
        else:
            out.pop(e, None)
    return out


def pmul(p: Mapping, q: Mapping) -> dict:
    out: dict = {}
    for e1, c1 in p.items():
        for e2, c2 in q.items():
            e = tuple(a + b for a, b in zip(e1, e2))
            out[e] = out.get(e, 0) + c1 * c2
    return {e: c for e, c in out.items() if c}


def pderiv(p: Mapping, i: int) -> dict:
    out = {}
    for e, c in p.items():
        if e[i]:
            out[e[:i] + (e[i] - 1,) + e[i + 1:]] = c * e[i]
    return out


def pscale(p: Mapping, c) -> dict:
    return {e: v * c for e, v in p.items()} if c else {}


def pmono(e: Sequence[int], c=1) -> dict:
    return {tuple(e): Q(c)}


def pdeg(p: Mapping) -> int:
    return max((sum(e) for e in p), default=-1)


# ---------------------------------------------------------------------------
# fiber kinds


def _merge(I: tuple, J: tuple) -> tuple[int, tuple]:
    """Sign and sorted union of two increasing index tuples (0 if they meet)."""
    if set(I) & set(J):
        return 0, ()
    seq = list(I) + list(J)
    inv = sum(1 for a in range(len(seq)) for b in range(a + 1, len(seq)) if seq[a] > seq[b])
    return (-1) ** inv, tuple(sorted(seq))


def _replace(I: tuple, pos: int, new: int) -> tuple[int, tuple]:
    """Replace I[pos] by ``new`` inside an increasing tuple; returns sign, tuple."""
    if new in I and I[pos] != new:
        return 0, ()
    rest = I[:pos] + I[pos + 1:]
    # moving I[pos] to the front costs pos transpositions, then insert new
    sign, out = _merge((new,), rest)
    return sign * (-1) ** pos, out


class Kind:
    """Base class for fiber kinds; subclasses are frozen dataclasses."""

    def keys(self, n: int) -> list:
        raise NotImplementedError

    def rho(self, n: int, a: int, b: int, key) -> dict:
        raise NotImplementedError

    def weight(self, n: int, key) -> tuple:
        return tuple(self.rho(n, a, a, key).get(key, 0) for a in range(n))

    def parity(self, key) -> int:
        return 0


@dataclass(frozen=True)
class Function(Kind):
    def keys(self, n):
        return [()]

    def rho(self, n, a, b, key):
        return {}

    def __str__(self):
        return "function"


@dataclass(frozen=True)
class Forms(Kind):
    p: int

    def keys(self, n):
        return list(itertools.combinations(range(n), self.p))

    @lru_cache(maxsize=None)
    def rho(self, n, a, b, key):
        # derivation with dx_b -> dx_a
        out = {}
        for pos, x in enumerate(key):
            if x == b:
                s, k2 = _replace(key, pos, a)
                if s:
                    out[k2] = out.get(k2, 0) + s
        return {k: v for k, v in out.items() if v}

    def parity(self, key):
        return len(key) % 2

    def __str__(self):
        return f"form({self.p})"


@dataclass(frozen=True)
class Polyvectors(Kind):
    k: int

    def keys(self, n):
        return list(itertools.combinations(range(n), self.k))

    @lru_cache(maxsize=None)
    def rho(self, n, a, b, key):
        # derivation with d_a -> -d_b
        out = {}
        for pos, x in enumerate(key):
            if x == a:
                s, k2 = _replace(key, pos, b)
                if s:
                    out[k2] = out.get(k2, 0) - s
        return {k: v for k, v in out.items() if v}

    def parity(self, key):
        return len(key) % 2

    def __str__(self):
        return f"polyvector({self.k})"


@dataclass(frozen=True)
class SymTensors(Kind):
    k: int

    def keys(self, n):
        out = []
        for cut in itertools.combinations_with_replacement(range(n), self.k):
            e = [0] * n
            for c in cut:
                e[c] += 1
            out.append(tuple(e))
        return sorted(set(out), reverse=True)

    @lru_cache(maxsize=None)
    def rho(self, n, a, b, key):
        if not key[a]:
            return {}
        if a == b:
            return {key: -key[a]}
        k2 = list(key)
        k2[a] -= 1
        k2[b] += 1
        return {tuple(k2): -key[a]}

    def __str__(self):
        return f"symtensor({self.k})"


@dataclass(frozen=True)
class Product(Kind):
    first: Kind
    second: Kind

    def keys(self, n):
        return [(k1, k2) for k1 in self.first.keys(n) for k2 in self.second.keys(n)]

    @lru_cache(maxsize=None)
    def rho(self, n, a, b, key):
        k1, k2 = key
        out = {}
        for x, c in self.first.rho(n, a, b, k1).items():
            out[(x, k2)] = out.get((x, k2), 0) + c
        for x, c in self.second.rho(n, a, b, k2).items():
            out[(k1, x)] = out.get((k1, x), 0) + c
        return {k: v for k, v in out.items() if v}

    def parity(self, key):
        return (self.first.parity(key[0]) + self.second.parity(key[1])) % 2

    def __str__(self):
        return f"({self.first})x({self.second})"


@dataclass(frozen=True)
class Dual(Kind):
    base: Kind

    def keys(self, n):
        return self.base.keys(n)

    @lru_cache(maxsize=None)
    def rho(self, n, a, b, key):
        # -(transpose): coefficient of ``key`` in rho(E^a_b) k'
        out = {}
        for k2 in self.base.keys(n):
            c = self.base.rho(n, a, b, k2).get(key)
            if c:
                out[k2] = -c
        return out

    def __str__(self):
        return f"dual({self.base})"


def vvform(p: int) -> Product:
    """Vector-valued p-forms, keys (form index tuple, (b,)) for dx_I ⊗ d_b."""
    return Product(Forms(p), Polyvectors(1))


# ---------------------------------------------------------------------------
# fields


class TensorField:
    """Immutable polynomial section of (kind) ⊗ Vol^twist."""

    __slots__ = ("n", "kind", "twist", "comps", "truncation", "validity")

    def __init__(self, n: int, kind: Kind, comps: Mapping | None = None, twist=0,
                 truncation: int | None = None, validity: int | None = None):
        self.n = n
        self.kind = kind
        self.twist = Q(twist)
        self.truncation = truncation
        self.validity = validity
        clean = {}
        for key, poly in (comps or {}).items():
            poly = {tuple(e): Q(c) for e, c in poly.items() if c}
            if truncation is not None:
                poly = {e: c for e, c in poly.items() if sum(e) <= truncation}
            if poly:
                clean[key] = poly
        self.comps = clean

    @classmethod
    def monomial(cls, n, kind, key, exp, c=1, twist=0) -> "TensorField":
        return cls(n, kind, {key: {tuple(exp): Q(c)}}, twist)

    def like(self, comps, kind=None, twist=None) -> "TensorField":
        return TensorField(self.n, self.kind if kind is None else kind, comps,
                           self.twist if twist is None else twist)

    def _check(self, other: "TensorField"):
        if (self.n, self.kind, self.twist) != (other.n, other.kind, other.twist):
            raise ValueError(f"incompatible fields: {self.kind}/{self.twist} vs "
                             f"{other.kind}/{other.twist}")

    def __add__(self, other):
        self._check(other)
        out = dict(self.comps)
        for k, p in other.comps.items():
            out[k] = padd(out.get(k, {}), p)
        return self.like(out)

    def scale(self, c) -> "TensorField":
        c = Q(c)
        return self.like({k: pscale(p, c) for k, p in self.comps.items()})

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def is_zero(self) -> bool:
        return not self.comps

    def __eq__(self, other):
        if not isinstance(other, TensorField):
            return NotImplemented
        return (self.n, self.kind, self.twist, self.comps) == \
            (other.n, other.kind, other.twist, other.comps)

    def degree(self) -> int:
        return max((pdeg(p) for p in self.comps.values()), default=-1)

    def terms(self):
        for key in sorted(self.comps, key=repr):
            for e in sorted(self.comps[key], reverse=True):
                yield key, e, self.comps[key][e]

    def to_json(self) -> dict:
        return {"n": self.n, "kind": str(self.kind), "twist": fmt_q(self.twist),
                "coeffs": [{"key": _json_key(k), "x": list(e), "c": fmt_q(c)}
                           for k, e, c in self.terms()]}

    def __repr__(self):
        if not self.comps:
            return f"0 [{self.kind}, twist {fmt_q(self.twist)}]"
        parts = [f"{fmt_q(c)}*x^{list(e)}*{k}" for k, e, c in self.terms()]
        return " + ".join(parts) + f" [{self.kind}, twist {fmt_q(self.twist)}]"


def _json_key(k):
    if isinstance(k, tuple):
        return [_json_key(x) for x in k]
    return k


def zero(n: int, kind: Kind, twist=0) -> TensorField:
    return TensorField(n, kind, {}, twist)


def function(n: int, poly: Mapping, twist=0) -> TensorField:
    return TensorField(n, Function(), {(): poly}, twist)


# ---------------------------------------------------------------------------
# vector fields


class VectorFieldPoly:
    """xi = sum_i xi_i d/dx_i with polynomial components."""

    __slots__ = ("n", "components")

    def __init__(self, components: Sequence[Mapping]):
        self.n = len(components)
        self.components = tuple({tuple(e): Q(c) for e, c in p.items() if c} for p in components)

    @classmethod
    def monomial(cls, a: Sequence[int], b: int, c=1) -> "VectorFieldPoly":
        n = len(a)
        comps = [{} for _ in range(n)]
        comps[b] = {tuple(a): Q(c)}
        return cls(comps)

    @classmethod
    def from_field(cls, xi) -> "VectorFieldPoly":
        """From a jets.FieldMonomial or an iterable of (coef, FieldMonomial)."""
        if hasattr(xi, "a") and hasattr(xi, "b"):
            return cls.monomial(xi.a, xi.b)
        terms = list(xi)
        n = len(terms[0][1].a)
        comps = [{} for _ in range(n)]
        for c, f in terms:
            comps[f.b] = padd(comps[f.b], {tuple(f.a): Q(c)})
        return cls(comps)

    def div(self) -> dict:
        out: dict = {}
        for i, p in enumerate(self.components):
            out = padd(out, pderiv(p, i))
        return out

    def apply(self, poly: Mapping) -> dict:
        out: dict = {}
        for i, p in enumerate(self.components):
            if p:
                out = padd(out, pmul(p, pderiv(poly, i)))
        return out

    def degree(self) -> int:
        return max((pdeg(p) for p in self.components), default=-1)

    def as_polyvector(self) -> TensorField:
        return TensorField(self.n, Polyvectors(1),
                           {(i,): p for i, p in enumerate(self.components) if p})

    def __repr__(self):
        return " + ".join(f"({p})*d{i + 1}" for i, p in enumerate(self.components) if p) or "0"


def vector_bracket(xi: VectorFieldPoly, eta: VectorFieldPoly) -> VectorFieldPoly:
    return VectorFieldPoly([padd(xi.apply(eta.components[k]), eta.apply(xi.components[k]), -1)
                            for k in range(xi.n)])


def as_vector_field(X: TensorField) -> VectorFieldPoly:
    if X.kind != Polyvectors(1):
        raise ValueError("expected a polyvector of degree 1")
    return VectorFieldPoly([X.comps.get((i,), {}) for i in range(X.n)])


# ---------------------------------------------------------------------------
# Lie derivative


def lie_derivative(xi: VectorFieldPoly, s: TensorField) -> TensorField:
    if xi.n != s.n:
        raise ValueError(f"dimension mismatch: field on R^{xi.n}, section on R^{s.n}")
    n = s.n
    out: dict = {}

    def add(key, poly, c=1):
        if poly:
            out[key] = padd(out.get(key, {}), poly, c)

    for key, poly in s.comps.items():
        add(key, xi.apply(poly))
    for i in range(n):
        for j in range(n):
            dxi = pderiv(xi.components[i], j)
            if not dxi:
                continue
            for key, poly in s.comps.items():
                img = s.kind.rho(n, j, i, key)
                if img:
                    prod = pmul(dxi, poly)
                    for k2, c in img.items():
                        add(k2, prod, c)
    if s.twist:
        dv = xi.div()
        if dv:
            for key, poly in s.comps.items():
                add(key, pmul(dv, poly), s.twist)
    validity = None
    if s.truncation is not None:
        validity = s.truncation - max(xi.degree(), 0) + 1
    return TensorField(n, s.kind, out, s.twist, s.truncation, validity)


# ---------------------------------------------------------------------------
# exterior calculus


def _need(s: TensorField, kind_type, what: str):
    if not isinstance(s.kind, kind_type):
        raise ValueError(f"{what} needs a {kind_type.__name__} field, got {s.kind}")


def form_degree(s: TensorField) -> int:
    if isinstance(s.kind, Function):
        return 0
    _need(s, Forms, "form degree")
    return s.kind.p


def as_forms(s: TensorField) -> TensorField:
    """View a function as a 0-form."""
    if isinstance(s.kind, Function):
        return TensorField(s.n, Forms(0), {(): p for p in s.comps.values()}, s.twist)
    return s


def ext_d(s: TensorField) -> TensorField:
    s = as_forms(s)
    _need(s, Forms, "d")
    n = s.n
    out: dict = {}
    for I, poly in s.comps.items():
        for k in range(n):
            dp = pderiv(poly, k)
            if not dp:
                continue
            sign, J = _merge((k,), I)
            if sign:
                out[J] = padd(out.get(J, {}), dp, sign)
    return TensorField(n, Forms(s.kind.p + 1), out, s.twist)


def _odd_kind(s: TensorField):
    s = as_forms(s)
    if isinstance(s.kind, Forms):
        return s, Forms, s.kind.p
    if isinstance(s.kind, Polyvectors):
        return s, Polyvectors, s.kind.k
    raise ValueError(f"wedge needs forms or polyvectors, got {s.kind}")


def wedge(s: TensorField, t: TensorField) -> TensorField:
    """Exterior product of forms, or of polyvectors; twists add."""
    s, K1, p = _odd_kind(s)
    t, K2, q = _odd_kind(t)
    if K1 is not K2 or s.n != t.n:
        raise ValueError("wedge of mismatched kinds")
    out: dict = {}
    for I, a in s.comps.items():
        for J, b in t.comps.items():
            sign, L = _merge(I, J)
            if sign:
                out[L] = padd(out.get(L, {}), pmul(a, b), sign)
    return TensorField(s.n, K1(p + q), out, s.twist + t.twist)


def contract_basis(b: int, s: TensorField) -> TensorField:
    """Interior product with the constant field d/dx_b."""
    s = as_forms(s)
    _need(s, Forms, "contraction")
    out: dict = {}
    for I, poly in s.comps.items():
        if b in I:
            pos = I.index(b)
            J = I[:pos] + I[pos + 1:]
            out[J] = padd(out.get(J, {}), poly, (-1) ** pos)
    return TensorField(s.n, Forms(s.kind.p - 1), out, s.twist) if s.kind.p > 0 else \
        TensorField(s.n, Forms(0), {}, s.twist)


def contract(X, s: TensorField) -> TensorField:
    """i_X s for a vector field X (VectorFieldPoly or degree-1 polyvector)."""
    if isinstance(X, TensorField):
        twist = X.twist
        X = as_vector_field(X)
    else:
        twist = 0
    s = as_forms(s)
    _need(s, Forms, "contraction")
    if s.kind.p == 0:
        return TensorField(s.n, Forms(0), {}, s.twist + twist)
    out = TensorField(s.n, Forms(s.kind.p - 1), {}, s.twist)
    for b, comp in enumerate(X.components):
        if comp:
            out = out + multiply(comp, contract_basis(b, s))
    return TensorField(s.n, out.kind, out.comps, s.twist + twist)


def multiply(poly: Mapping, s: TensorField) -> TensorField:
    return s.like({k: pmul(poly, p) for k, p in s.comps.items()})


def _odd_left_deriv(I: tuple, i: int):
    if i not in I:
        return 0, ()
    pos = I.index(i)
    return (-1) ** pos, I[:pos] + I[pos + 1:]


def _odd_right_deriv(I: tuple, i: int):
    if i not in I:
        return 0, ()
    pos = I.index(i)
    return (-1) ** (len(I) - 1 - pos), I[:pos] + I[pos + 1:]


def div_polyvector(X: TensorField) -> TensorField:
    """Div X = sum_i d^2 X / dx_i dxc_i (left odd derivative)."""
    _need(X, Polyvectors, "polyvector divergence")
    k = X.kind.k
    out: dict = {}
    if k == 0:
        return TensorField(X.n, Polyvectors(0), {}, X.twist)
    for I, poly in X.comps.items():
        for i in I:
            sign, J = _odd_left_deriv(I, i)
            dp = pderiv(poly, i)
            if dp:
                out[J] = padd(out.get(J, {}), dp, sign)
    return TensorField(X.n, Polyvectors(k - 1), out, X.twist)


def schouten(X: TensorField, Y: TensorField) -> TensorField:
    """[X, Y] = sum_i (X <d/dxc_i)(dY/dx_i) - (dX/dx_i)(d/dxc_i> Y)."""
    _need(X, Polyvectors, "Schouten bracket")
    _need(Y, Polyvectors, "Schouten bracket")
    n = X.n
    p, q = X.kind.k, Y.kind.k
    out: dict = {}

    def acc(I, J, poly, sign):
        s, L = _merge(I, J)
        if s and poly:
            out[L] = padd(out.get(L, {}), poly, s * sign)

    for I, a in X.comps.items():
        for J, b in Y.comps.items():
            for i in range(n):
                s1, I1 = _odd_right_deriv(I, i)
                if s1:
                    acc(I1, J, pmul(a, pderiv(b, i)), s1)
                s2, J2 = _odd_left_deriv(J, i)
                if s2:
                    acc(I, J2, pmul(pderiv(a, i), b), -s2)
    deg = p + q - 1
    if deg < 0:
        return TensorField(n, Polyvectors(0), {}, X.twist + Y.twist)
    return TensorField(n, Polyvectors(deg), out, X.twist + Y.twist)


def poisson(f: TensorField, g: TensorField) -> TensorField:
    """{f, g} = sum_i df/dp_i dg/dx_i - df/dx_i dg/dp_i on momentum polynomials."""
    _need(f, SymTensors, "Poisson bracket")
    _need(g, SymTensors, "Poisson bracket")
    n = f.n
    out: dict = {}

    def acc(e1, e2, poly, c):
        e = tuple(a + b for a, b in zip(e1, e2))
        if poly:
            out[e] = padd(out.get(e, {}), poly, c)

    for e1, a in f.comps.items():
        for e2, b in g.comps.items():
            for i in range(n):
                if e1[i]:
                    acc(e1[:i] + (e1[i] - 1,) + e1[i + 1:], e2, pmul(a, pderiv(b, i)), e1[i])
                if e2[i]:
                    acc(e1, e2[:i] + (e2[i] - 1,) + e2[i + 1:], pmul(pderiv(a, i), b), -e2[i])
    k = f.kind.k + g.kind.k - 1
    return TensorField(n, SymTensors(max(k, 0)), out if k >= 0 else {}, f.twist + g.twist)


def vector_as_symtensor(xi: VectorFieldPoly) -> TensorField:
    n = xi.n
    return TensorField(n, SymTensors(1), {tuple(int(t == i) for t in range(n)): p
                                          for i, p in enumerate(xi.components) if p})


# ---------------------------------------------------------------------------
# vector-valued forms


def vv_components(K: TensorField) -> list[TensorField]:
    """Split K = sum_b K_b ⊗ d_b into the forms K_b."""
    if not (isinstance(K.kind, Product) and isinstance(K.kind.first, Forms)
            and K.kind.second == Polyvectors(1)):
        raise ValueError(f"expected a vector-valued form, got {K.kind}")
    p = K.kind.first.p
    comps: list[dict] = [{} for _ in range(K.n)]
    for (I, (b,)), poly in K.comps.items():
        comps[b][I] = poly
    return [TensorField(K.n, Forms(p), c, K.twist) for c in comps]


def vv_assemble(parts: Sequence[TensorField], twist=0) -> TensorField:
    p = parts[0].kind.p
    comps = {}
    for b, s in enumerate(parts):
        if s.kind != Forms(p):
            raise ValueError("parts of different degree")
        for I, poly in s.comps.items():
            comps[(I, (b,))] = poly
    return TensorField(parts[0].n, vvform(p), comps, twist)


def partial(s: TensorField, a: int) -> TensorField:
    """Coefficientwise derivative d/dx_a (the Lie derivative along d_a)."""
    return s.like({k: pderiv(p, a) for k, p in s.comps.items()})


def frolicher_nijenhuis(K: TensorField, L: TensorField) -> TensorField:
    """Frolicher-Nijenhuis bracket of vector-valued forms.

    With K = sum_a phi_a ⊗ d_a, L = sum_b psi_b ⊗ d_b, k = deg phi:
    [phi ⊗ d_a, psi ⊗ d_b] = phi ∧ d_a psi ⊗ d_b - d_b phi ∧ psi ⊗ d_a
                             + (-1)^k (d phi ∧ i_a psi ⊗ d_b + i_b phi ∧ d psi ⊗ d_a).
    """
    phis = vv_components(K)
    psis = vv_components(L)
    n = K.n
    k = K.kind.first.p
    l = L.kind.first.p
    zero_f = TensorField(n, Forms(k + l), {}, 0)
    acc = [zero_f for _ in range(n)]
    sk = (-1) ** k
    for a, phi in enumerate(phis):
        if phi.is_zero():
            continue
        for b, psi in enumerate(psis):
            if psi.is_zero():
                continue
            acc[b] = acc[b] + _untwist(wedge(phi, partial(psi, a)))
            acc[a] = acc[a] - _untwist(wedge(partial(phi, b), psi))
            if l > 0:
                acc[b] = acc[b] + _untwist(wedge(ext_d(phi), contract_basis(a, psi))).scale(sk)
            if k > 0:
                acc[a] = acc[a] + _untwist(wedge(contract_basis(b, phi), ext_d(psi))).scale(sk)
    return vv_assemble(acc, K.twist + L.twist)


def _untwist(s: TensorField) -> TensorField:
    return TensorField(s.n, s.kind, s.comps, 0)


def vv_trace(K: TensorField) -> TensorField:
    """tr K = sum_b i_b K_b."""
    parts = vv_components(K)
    p = K.kind.first.p
    out = TensorField(K.n, Forms(max(p - 1, 0)), {}, K.twist)
    if p == 0:
        return out
    for b, s in enumerate(parts):
        out = out + contract_basis(b, s)
    return out


def vv_embed(alpha: TensorField) -> TensorField:
    """alpha -> sum_b dx_b ∧ alpha ⊗ d_b (trace is (n - p) alpha for a p-form)."""
    alpha = as_forms(alpha)
    n = alpha.n
    parts = []
    for b in range(n):
        dxb = TensorField(n, Forms(1), {(b,): {(0,) * n: Fraction(1)}}, 0)
        parts.append(_untwist(wedge(dxb, alpha)))
    return vv_assemble(parts, alpha.twist)


def traceless_part(K: TensorField) -> TensorField:
    """Projection of Omega^k ⊗ Vect onto the kernel of the trace."""
    n = K.n
    k = K.kind.first.p
    if k == 0:
        return K
    tr = vv_trace(K)
    if n - k + 1 == 0:
        raise ValueError("traceless projection undefined for k = n + 1")
    return K - vv_embed(tr).scale(Fraction(1, n - k + 1))


# ---------------------------------------------------------------------------
# isotypic projections


def _apply_rho(kind: Kind, n: int, a: int, b: int, vec: Mapping) -> dict:
    out: dict = {}
    for key, c in vec.items():
        for k2, c2 in kind.rho(n, a, b, key).items():
            out[k2] = out.get(k2, 0) + c * c2
    return {k: v for k, v in out.items() if v}


@lru_cache(maxsize=None)
def decomposition(kind: Kind, n: int) -> tuple:
    """Irreducible decomposition of the fiber of ``kind`` as a gl(n)-module.

    Returns a tuple of (highest weight, basis vectors) pairs; each basis is
    the lowering orbit of one highest weight vector.
    """
    keys = kind.keys(n)
    weights = {k: kind.weight(n, k) for k in keys}
    by_w: dict = {}
    for k in keys:
        by_w.setdefault(weights[k], []).append(k)
    comps = []
    for w in sorted(by_w, reverse=True):
        space = by_w[w]
        col = {k: c for c, k in enumerate(space)}
        rows: dict = {}
        ent = {}
        for c, k in enumerate(space):
            for a in range(n):
                for b in range(a + 1, n):
                    for k2, v in kind.rho(n, a, b, k).items():
                        r = rows.setdefault((a, b, k2), len(rows))
                        ent[(r, c)] = v
        M = SparseMat(max(len(rows), 1), len(space), ent)
        for vec in kernel_basis(M):
            hw = {space[c]: x for c, x in enumerate(vec) if x}
            comps.append((w, tuple(_orbit(kind, n, hw))))
    total = sum(len(b) for _, b in comps)
    if total != len(keys):
        raise RuntimeError(f"decomposition of {kind} failed: {total} != {len(keys)}")
    return tuple(comps)


def _orbit(kind, n, hw) -> list[dict]:
    from .fibers import TensorFiber  # only for the independence test
    basis: list[dict] = []
    queue = [hw]
    while queue:
        t = queue.pop(0)
        if TensorFiber._independent(basis, t):
            basis.append(t)
            for a in range(n):
                for b in range(a):
                    s = _apply_rho(kind, n, a, b, t)
                    if s:
                        queue.append(s)
    return basis


@lru_cache(maxsize=None)
def projector(kind: Kind, n: int, hw: tuple) -> dict:
    """Matrix of the projection onto the isotypic component of weight ``hw``
    as a dict key -> {key: coefficient}."""
    hw = tuple(Q(x) for x in hw)
    comps = decomposition(kind, n)
    vecs, labels = [], []
    for w, basis in comps:
        for v in basis:
            labels.append(w == hw)
            vecs.append(v)
    if not any(labels):
        raise ValueError(f"{kind} has no component of highest weight {list(map(fmt_q, hw))}")
    solver = SpanSolver(vecs, list(range(len(vecs))))
    out = {}
    for key in kind.keys(n):
        coords = solver.coords({key: Fraction(1)})
        img: dict = {}
        for idx, c in coords.items():
            if labels[idx]:
                for k2, v in vecs[idx].items():
                    img[k2] = img.get(k2, 0) + c * v
        out[key] = {k: v for k, v in img.items() if v}
    return out


def highest_weights(kind: Kind, n: int) -> list[tuple]:
    return sorted({w for w, _ in decomposition(kind, n)}, reverse=True)


def project(s: TensorField, hw: Sequence) -> TensorField:
    P = projector(s.kind, s.n, tuple(Q(x) for x in hw))
    out: dict = {}
    for key, poly in s.comps.items():
        for k2, c in P[key].items():
            out[k2] = padd(out.get(k2, {}), poly, c)
    return s.like(out)


def tensor(s: TensorField, t: TensorField) -> TensorField:
    """s ⊗ t as a section of Product(kind_s, kind_t)."""
    out: dict = {}
    for k1, a in s.comps.items():
        for k2, b in t.comps.items():
            out[(k1, k2)] = padd(out.get((k1, k2), {}), pmul(a, b))
    return TensorField(s.n, Product(s.kind, t.kind), out, s.twist + t.twist)


def pairing(kind: Kind, s: TensorField, t: TensorField) -> dict:
    """<s, t> for s of ``kind`` and t of Dual(kind): a polynomial."""
    out: dict = {}
    for key, a in s.comps.items():
        b = t.comps.get(key)
        if b:
            out = padd(out, pmul(a, b))
    return out


def top_coefficient(s: TensorField) -> dict:
    """Coefficient of dx_1 ∧ ... ∧ dx_n in an n-form."""
    s = as_forms(s)
    if s.kind.p != s.n:
        raise ValueError("expected a top-degree form")
    return s.comps.get(tuple(range(s.n)), {})


def top_form(n: int, poly: Mapping, twist=0) -> TensorField:
    return TensorField(n, Forms(n), {tuple(range(n)): poly}, twist)


def monomials_upto(n: int, K: int) -> list[tuple]:
    out = []
    for k in range(K + 1):
        for cut in itertools.combinations_with_replacement(range(n), k):
            e = [0] * n
            for c in cut:
                e[c] += 1
            out.append(tuple(e))
    return sorted(set(out), key=lambda e: (sum(e), [-x for x in e]))


def random_field(rng, n: int, kind: Kind, K: int, twist=0, terms: int = 4) -> TensorField:
    keys = kind.keys(n)
    monos = monomials_upto(n, K)
    comps: dict = {}
    for _ in range(terms):
        key = keys[rng.randrange(len(keys))]
        e = monos[rng.randrange(len(monos))]
        c = Fraction(rng.randint(-4, 4))
        comps[key] = padd(comps.get(key, {}), {e: c})
    return TensorField(n, kind, comps, twist)


def random_vector_field(rng, n: int, K: int, terms: int = 3) -> VectorFieldPoly:
    monos = monomials_upto(n, K)
    comps = [{} for _ in range(n)]
    for _ in range(terms):
        b = rng.randrange(n)
        comps[b] = padd(comps[b], {monos[rng.randrange(len(monos))]: Fraction(rng.randint(-3, 3))})
    return VectorFieldPoly(comps)
