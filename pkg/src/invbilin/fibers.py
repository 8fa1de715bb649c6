"""Irreducible gl(n)-modules used as jet fibers.

Indices are 0-based throughout: ``act(i, j, k)`` applies the operator E^i_j,
which corresponds to the linear vector field x_i d/dx_j, to basis vector k.
For n=2, x+ = E^0_1 and x- = E^1_0.
"""
from __future__ import annotations

import itertools
from collections import deque
from fractions import Fraction
from typing import Mapping, Sequence

from .exact import Q, SpanSolver, SparseMat, fmt_q, rank


class TruncationError(ValueError):
    """A lowering operator left the truncated basis of an infinite module."""

    def __init__(self, msg: str, needed: int):
        super().__init__(msg)
        self.needed = needed


def _q(x):
    # weights may be symbolic (ParamPoly) for the parametric n=1 solver
    return x if hasattr(x, "variables") else Q(x)


class Fiber:
    n: int
    top_weight: tuple
    truncation: int
    finite: bool

    @property
    def dim(self) -> int:
        return self.truncation + 1

    def indices(self) -> range:
        return range(self.dim)

    def weight(self, k: int) -> tuple:
        return tuple(self.act(i, i, k).get(k, 0) for i in range(self.n))

    def act(self, i: int, j: int, k: int) -> dict:
        raise NotImplementedError

    def act_vec(self, i: int, j: int, vec: Mapping[int, object]) -> dict:
        out: dict = {}
        for k, c in vec.items():
            for k2, c2 in self.act(i, j, k).items():
                out[k2] = out.get(k2, 0) + c * c2
        return {k: c for k, c in out.items() if c}

    def to_json(self) -> dict:
        return {"n": self.n,
                "top_weight": [str(w) if hasattr(w, "variables") else fmt_q(w)
                               for w in self.top_weight],
                "truncation": self.truncation}


class LineFiber(Fiber):
    """n=1: a single vector v with (x d/dx) v = l v."""

    def __init__(self, l):
        self.n = 1
        self.top_weight = (_q(l),)
        self.truncation = 0
        self.finite = True

    def act(self, i, j, k):
        if (i, j, k) != (0, 0, 0):
            raise IndexError("n=1 fiber has one operator and one basis vector")
        l = self.top_weight[0]
        return {0: l} if l else {}


class PlaneFiber(Fiber):
    """n=2 module with basis v_0, v_1, ..., v_0 annihilated by x+.

    x+ v_i = (lam - i + 1) v_{i-1},  x- v_i = (i + 1) v_{i+1},
    E^0_0 v_i = (l1 - i) v_i,  E^1_1 v_i = (l2 + i) v_i,  lam = l1 - l2.
    When lam is a nonnegative integer the module is finite with x- v_lam = 0;
    otherwise it is infinite and kept up to index ``truncation``.
    """

    def __init__(self, l1, l2, truncation: int | None = None):
        self.n = 2
        self.top_weight = (Q(l1), Q(l2))
        lam = self.lam
        if truncation is not None and truncation < 0:
            raise ValueError("truncation must be >= 0")
        if lam.denominator == 1 and lam >= 0:
            self.finite = True
            self.truncation = int(lam)
        else:
            if truncation is None:
                raise ValueError("infinite-dimensional fiber needs a truncation")
            self.finite = False
            self.truncation = truncation

    @property
    def lam(self) -> Fraction:
        return self.top_weight[0] - self.top_weight[1]

    def act(self, i, j, k):
        if not 0 <= k <= self.truncation:
            raise IndexError(f"basis index {k} outside 0..{self.truncation}")
        l1, l2 = self.top_weight
        if (i, j) == (0, 0):
            c = l1 - k
            return {k: c} if c else {}
        if (i, j) == (1, 1):
            c = l2 + k
            return {k: c} if c else {}
        if (i, j) == (0, 1):
            if k == 0:
                return {}
            c = self.lam - k + 1
            return {k - 1: c} if c else {}
        if (i, j) == (1, 0):
            if self.finite and k == self.truncation:
                return {}
            if k + 1 > self.truncation:
                raise TruncationError(
                    f"truncation exceeded: lowering v_{k} needs truncation >= {k + 1}",
                    k + 1)
            return {k + 1: Fraction(k + 1)}
        raise IndexError(f"no operator E^{i}_{j} for n=2")


class TensorFiber(Fiber):
    """Module generated by a highest weight vector inside
    id^{⊗p} ⊗ (id*)^{⊗q} ⊗ (twist), using lowering operators.

    Tensors are dicts from index tuples (length p+q) to rationals. On id,
    E^a_b e_k = δ_bk e_a; on id*, E^a_b e*_k = -δ_ak e*_b; the twist adds
    twist·δ_ab.
    """

    def __init__(self, n: int, p: int, q: int, twist, hw_vector: Mapping[tuple, object]):
        if n < 1:
            raise ValueError("n must be >= 1")
        self.n = n
        self.p = p
        self.q = q
        self.twist = Q(twist)
        self.finite = True
        hw = {tuple(k): Q(v) for k, v in hw_vector.items() if Q(v)}
        if not hw:
            raise ValueError("highest weight vector is zero")
        for key in hw:
            if len(key) != p + q or not all(0 <= x < n for x in key):
                raise ValueError(f"bad tensor index {key}")
        for i in range(n):
            for j in range(i + 1, n):
                if self._tensor_act(i, j, hw):
                    raise ValueError(
                        f"vector is not highest: x{i + 1}d{j + 1} does not annihilate it")
        self._build(hw)
        self.truncation = len(self.basis) - 1
        self.top_weight = self._weights[0]

    def _tensor_act(self, a: int, b: int, t: Mapping[tuple, Fraction]) -> dict:
        out: dict = {}

        def add(key, c):
            v = out.get(key, 0) + c
            if v:
                out[key] = v
            else:
                out.pop(key, None)

        for key, c in t.items():
            if a == b and self.twist:
                add(key, self.twist * c)
            for s, x in enumerate(key):
                if s < self.p:
                    if x == b:
                        add(key[:s] + (a,) + key[s + 1:], c)
                else:
                    if x == a:
                        add(key[:s] + (b,) + key[s + 1:], -c)
        return out

    def _tensor_weight(self, t) -> tuple:
        key = next(iter(t))
        w = [self.twist] * self.n
        for s, x in enumerate(key):
            w[x] += 1 if s < self.p else -1
        return tuple(w)

    def _build(self, hw):
        self.basis: list[dict] = []
        self._weights: list[tuple] = []
        by_weight: dict[tuple, list[int]] = {}
        queue = deque([hw])
        while queue:
            t = queue.popleft()
            w = self._tensor_weight(t)
            idxs = by_weight.setdefault(w, [])
            if self._independent([self.basis[i] for i in idxs], t):
                idxs.append(len(self.basis))
                self.basis.append(t)
                self._weights.append(w)
                for a in range(self.n):
                    for b in range(a):
                        s = self._tensor_act(a, b, t)
                        if s:
                            queue.append(s)
        self._by_weight = by_weight
        self._solvers = {w: SpanSolver([self.basis[i] for i in idxs], idxs)
                         for w, idxs in by_weight.items()}
        self._table: dict = {}
        for a in range(self.n):
            for b in range(self.n):
                for k, t in enumerate(self.basis):
                    img = self._tensor_act(a, b, t)
                    if not img:
                        self._table[(a, b, k)] = {}
                        continue
                    w = self._tensor_weight(img)
                    solver = self._solvers.get(w)
                    if solver is None:
                        raise RuntimeError("orbit is not closed under the action")
                    self._table[(a, b, k)] = solver.coords(img)

    @staticmethod
    def _independent(vecs: Sequence[dict], t: dict) -> bool:
        keys = sorted(set().union(t, *vecs))
        col = {k: c for c, k in enumerate(keys)}
        rows = [{col[k]: v for k, v in x.items()} for x in list(vecs) + [t]]
        M = SparseMat(len(rows), len(keys),
                      {(r, c): v for r, row in enumerate(rows) for c, v in row.items()})
        return rank(M) == len(rows)

    def weight(self, k):
        return self._weights[k]

    def act(self, i, j, k):
        return self._table[(i, j, k)]


def partition_hw_vector(part: Sequence[int]) -> dict:
    """Highest weight tensor of shape ``part`` in id^{⊗|part|}: the product
    over columns of e_1∧...∧e_h (unnormalized alternating sums)."""
    part = list(part)
    if any(part[i] < part[i + 1] for i in range(len(part) - 1)) or (part and part[-1] < 0):
        raise ValueError("partition must be non-increasing and nonnegative")
    cols = [sum(1 for x in part if x > c) for c in range(part[0] if part else 0)]
    vec = {(): Fraction(1)}
    for h in cols:
        alt = {}
        for perm in itertools.permutations(range(h)):
            inv = sum(1 for a in range(h) for b in range(a + 1, h) if perm[a] > perm[b])
            alt[perm] = Fraction((-1) ** inv)
        vec = {k1 + k2: c1 * c2 for k1, c1 in vec.items() for k2, c2 in alt.items()}
    return vec


def make_tensor_fiber(n: int, p: int, q: int, twist, hw_vector) -> TensorFiber:
    return TensorFiber(n, p, q, twist, hw_vector)


def make_fiber(n: int, top_weight: Sequence, truncation: int | None = None) -> Fiber:
    """Fiber with highest weight ``top_weight``.

    n=1 and n=2 use weight bases; n>=3 needs a dominant integral weight and
    is realized inside a tensor power of the standard representation.
    """
    if len(top_weight) != n:
        raise ValueError(f"weight has {len(top_weight)} coordinates, expected {n}")
    if truncation is not None and truncation < 0:
        raise ValueError("truncation must be >= 0")
    if n == 1:
        return LineFiber(top_weight[0])
    if n == 2:
        return PlaneFiber(top_weight[0], top_weight[1], truncation)
    if n >= 3:
        w = [Q(x) for x in top_weight]
        diffs = [w[i] - w[i + 1] for i in range(n - 1)]
        if any(d.denominator != 1 or d < 0 for d in diffs):
            raise ValueError("n>=3 fibers need a dominant integral weight")
        c = w[-1]
        part = [int(x - c) for x in w]
        size = sum(part)
        if size == 0:
            return TensorFiber(n, 0, 0, c, {(): 1})
        return TensorFiber(n, size, 0, c, partition_hw_vector(part))
    raise ValueError("n must be >= 1")


def act_generator(g, fiber: Fiber, vec: Mapping[int, object]) -> dict:
    """Apply a named generator: "x+", "x-", "h1".."hn", or a pair (i, j) for E^i_j."""
    if g == "x+":
        i, j = 0, 1
    elif g == "x-":
        i, j = 1, 0
    elif isinstance(g, str) and g.startswith("h"):
        i = j = int(g[1:]) - 1
    else:
        i, j = g
    if not (0 <= i < fiber.n and 0 <= j < fiber.n):
        raise ValueError(f"generator {g!r} not defined for n={fiber.n}")
    return fiber.act_vec(i, j, vec)


def weyl_dimension(weight: Sequence) -> Fraction:
    w = [Q(x) for x in weight]
    n = len(w)
    num = Fraction(1)
    for i in range(n):
        for j in range(i + 1, n):
            num *= Fraction(w[i] - w[j] + j - i, j - i)
    return num
