"""Finite R-filtrations of Q-vector spaces with rational jumps.

A filtration is a strictly increasing flag W_1 < ... < W_s = Q^dim with
strictly decreasing weights a_1 > ... > a_s; F^t = W_i for a_{i+1} < t <= a_i.
Each W_i is stored by its reduced echelon basis, so equal filtrations
compare equal.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from . import linalg as la
from .lattice import wedge_coordinates

Vec = tuple[Fraction, ...]


class FiltrationError(ValueError):
    pass


def _rref_rows(rows: Sequence[Sequence]) -> tuple[Vec, ...]:
    R = la.row_basis(rows) if rows else []
    return tuple(tuple(r) for r in R)


@dataclass(frozen=True)
class RFiltration:
    dim: int
    steps: tuple[tuple[Vec, ...], ...]
    weights: tuple[Fraction, ...]

    def __post_init__(self):
        steps = tuple(_rref_rows(s) for s in self.steps)
        weights = tuple(la.as_fraction(w) for w in self.weights)
        object.__setattr__(self, "steps", steps)
        object.__setattr__(self, "weights", weights)
        if len(steps) != len(weights):
            raise FiltrationError("one weight per step is required")
        if self.dim == 0:
            if steps:
                raise FiltrationError("zero space carries the empty filtration")
            return
        if not steps:
            raise FiltrationError("filtration must end at the whole space")
        if any(b >= a for a, b in zip(weights, weights[1:])):
            raise FiltrationError("weights must be strictly decreasing")
        dims = [len(s) for s in steps]
        if any(b <= a for a, b in zip(dims, dims[1:])) or dims[0] == 0:
            raise FiltrationError("flag must be strictly increasing")
        if dims[-1] != self.dim:
            raise FiltrationError("filtration must end at the whole space")
        for small, big in zip(steps, steps[1:]):
            if la.rank(list(big) + list(small)) != len(big):
                raise FiltrationError("steps are not nested")

    # construction ---------------------------------------------------------
    @classmethod
    def trivial(cls, dim: int, weight=0) -> "RFiltration":
        if dim == 0:
            return cls(0, (), ())
        return cls(dim, (tuple(map(tuple, la.identity(dim))),), (weight,))

    @classmethod
    def from_flag(cls, dim: int, steps: Sequence[tuple[Sequence[Sequence], object]]) -> "RFiltration":
        """From (basis, weight) pairs listed from the smallest subspace up."""
        return cls(dim, tuple(tuple(map(tuple, b)) for b, _ in steps), tuple(w for _, w in steps))

    @classmethod
    def from_basis(cls, basis: Sequence[Sequence], weights: Sequence) -> "RFiltration":
        """Filtration attached to a basis and a weight on each basis vector."""
        basis = [list(b) for b in basis]
        n = len(basis)
        if n == 0:
            return cls(0, (), ())
        if la.rank(basis) != n or len(basis[0]) != n:
            raise FiltrationError("not a basis")
        ws = [la.as_fraction(w) for w in weights]
        levels = sorted(set(ws), reverse=True)
        steps = []
        for t in levels:
            steps.append([b for b, w in zip(basis, ws) if w >= t])
        return cls(n, tuple(tuple(map(tuple, s)) for s in steps), tuple(levels))

    # basic data -------------------------------------------------------------
    @property
    def dims(self) -> list[int]:
        return [len(s) for s in self.steps]

    @property
    def multiplicities(self) -> list[int]:
        d = self.dims
        return [b - a for a, b in zip([0] + d[:-1], d)]

    def Z(self) -> list[Fraction]:
        """Weights with multiplicity, decreasing (the function Z_F on {1..dim})."""
        out = []
        for w, m in zip(self.weights, self.multiplicities):
            out.extend([w] * m)
        return out

    def at(self, t) -> tuple[Vec, ...]:
        """Basis of F^t."""
        t = la.as_fraction(t)
        cur: tuple[Vec, ...] = ()
        for s, w in zip(self.steps, self.weights):
            if w >= t:
                cur = s
            else:
                break
        return cur

    def compatible_basis(self) -> list[tuple[list[Fraction], Fraction]]:
        """Basis adapted to the flag, each vector with its weight."""
        out: list[tuple[list[Fraction], Fraction]] = []
        cur: list[list[Fraction]] = []
        for s, w in zip(self.steps, self.weights):
            for v in s:
                if la.rank(cur + [list(v)]) > len(cur):
                    cur.append(list(v))
                    out.append((list(v), w))
        return out

    def step_complements(self) -> list[list[list[Fraction]]]:
        """For each step, the basis vectors added to the previous step."""
        groups: list[list[list[Fraction]]] = []
        cur: list[list[Fraction]] = []
        for s in self.steps:
            g = []
            for v in s:
                if la.rank(cur + [list(v)]) > len(cur):
                    cur.append(list(v))
                    g.append(list(v))
            groups.append(g)
        return groups


def lambda_(F: RFiltration, x: Sequence) -> Fraction | float:
    """sup { t : x in F^t }; +inf for x = 0."""
    if all(c == 0 for c in x):
        return math.inf
    for s, w in zip(F.steps, F.weights):
        if la.in_span(s, x):
            return w
    raise FiltrationError("vector is not in the ambient space")


def expectation(F: RFiltration) -> Fraction:
    if F.dim == 0:
        return Fraction(0)
    return sum((w * m for w, m in zip(F.weights, F.multiplicities)), Fraction(0)) / F.dim


def norm_sq(F: RFiltration) -> Fraction:
    if F.dim == 0:
        return Fraction(0)
    return sum((w * w * m for w, m in zip(F.weights, F.multiplicities)), Fraction(0)) / F.dim


def common_compatible_basis(F: RFiltration, G: RFiltration) -> list[tuple[list[Fraction], Fraction, Fraction]]:
    """A basis adapted to both flags, with (vector, lambda_F, lambda_G).

    For each pair (i, j) the block W_i ∩ U_j is completed modulo
    W_{i-1} ∩ U_j + W_i ∩ U_{j-1}; the union of the completions is adapted
    to both flags.
    """
    if F.dim != G.dim:
        raise FiltrationError("filtrations live on different spaces")
    n = F.dim
    Ws = [()] + list(F.steps)
    Us = [()] + list(G.steps)
    inter = {}
    for i in range(len(Ws)):
        for j in range(len(Us)):
            if i == 0 or j == 0:
                inter[i, j] = []
            else:
                inter[i, j] = la.intersect_spans(Ws[i], Us[j], n)
    out = []
    for i in range(1, len(Ws)):
        for j in range(1, len(Us)):
            base = [list(v) for v in inter[i - 1, j]] + [list(v) for v in inter[i, j - 1]]
            r = la.rank(base) if base else 0
            for v in inter[i, j]:
                if la.rank(base + [list(v)]) > r:
                    base.append(list(v))
                    r += 1
                    out.append((list(v), F.weights[i - 1], G.weights[j - 1]))
    if len(out) != n:
        raise AssertionError("common basis has the wrong size")
    # adapted to both flags
    for flt, pos in ((F, 1), (G, 2)):
        for s, w in zip(flt.steps, flt.weights):
            if sum(1 for e in out if e[pos] >= w) != len(s):
                raise AssertionError("common basis is not compatible")
    return out


def inner(F: RFiltration, G: RFiltration) -> Fraction:
    """Mean of lambda_F * lambda_G over a common compatible basis."""
    if F.dim == 0:
        return Fraction(0)
    basis = common_compatible_basis(F, G)
    return sum((a * b for _, a, b in basis), Fraction(0)) / F.dim


def _coords_in(V: Sequence[Sequence], x: Sequence) -> list[Fraction]:
    c = la.solve_row(V, x)
    if c is None:
        raise FiltrationError("vector is not in the subspace")
    return c


def restrict(F: RFiltration, V: Sequence[Sequence]) -> RFiltration:
    """F restricted to span(V), in the coordinates of the rows of V."""
    V = [list(v) for v in V]
    k = len(V)
    if k == 0:
        return RFiltration(0, (), ())
    if la.rank(V) != k:
        raise FiltrationError("subspace basis is not independent")
    steps, weights = [], []
    prev = 0
    for s, w in zip(F.steps, F.weights):
        I = la.intersect_spans(s, V, F.dim)
        if len(I) > prev:
            steps.append([_coords_in(V, x) for x in I])
            weights.append(w)
            prev = len(I)
    return RFiltration(k, tuple(tuple(map(tuple, s)) for s in steps), tuple(weights))


def restricted_dims(F: RFiltration, V: Sequence[Sequence]) -> list[tuple[Fraction, int]]:
    """(weight, dim(V ∩ W_i)) for each step, without changing coordinates."""
    V = [list(v) for v in V]
    r = len(V)
    out = []
    for s, w in zip(F.steps, F.weights):
        d = r + len(s) - la.rank(V + [list(x) for x in s])
        out.append((w, d))
    return out


def restricted_expectation(F: RFiltration, V: Sequence[Sequence]) -> Fraction:
    """E[F restricted to span(V)]."""
    r = len(V)
    if r == 0:
        return Fraction(0)
    total = Fraction(0)
    prev = 0
    for w, d in restricted_dims(F, V):
        total += w * (d - prev)
        prev = d
    return total / r


class QuotientMap:
    """Q^n -> Q^n / V realised on the non-pivot coordinates after reducing by V."""

    def __init__(self, V: Sequence[Sequence], n: int):
        R, piv = la.rref(V) if V else ([], [])
        self.R = R
        self.pivots = piv
        self.free = [c for c in range(n) if c not in piv]
        self.n = n

    def __call__(self, x: Sequence) -> list[Fraction]:
        y = [la.as_fraction(c) for c in x]
        for row, p in zip(self.R, self.pivots):
            f = y[p]
            if f:
                y = [a - f * b for a, b in zip(y, row)]
        return [y[c] for c in self.free]

    @property
    def dim(self) -> int:
        return len(self.free)


def quotient(F: RFiltration, V: Sequence[Sequence]) -> RFiltration:
    """Image filtration on Q^dim / span(V); coordinates from :class:`QuotientMap`."""
    q = QuotientMap(V, F.dim)
    m = q.dim
    if m == 0:
        return RFiltration(0, (), ())
    steps, weights = [], []
    prev = 0
    for s, w in zip(F.steps, F.weights):
        img = [q(x) for x in s]
        img = [v for v in img if any(v)]
        d = la.rank(img) if img else 0
        if d > prev:
            steps.append(img)
            weights.append(w)
            prev = d
    return RFiltration(m, tuple(tuple(map(tuple, s)) for s in steps), tuple(weights))


def dual(F: RFiltration) -> RFiltration:
    """(F^v)^t = (F^{-t})^perp in the dual basis."""
    n = F.dim
    if n == 0:
        return F
    prev_steps = [()] + list(F.steps[:-1])
    steps, weights = [], []
    for j in range(len(F.steps) - 1, -1, -1):
        W = prev_steps[j]
        perp = la.nullspace(W, n) if W else la.identity(n)
        steps.append(perp)
        weights.append(-F.weights[j])
    return RFiltration(n, tuple(tuple(map(tuple, s)) for s in steps), tuple(weights))


def tensor(F: RFiltration, G: RFiltration) -> RFiltration:
    """F (x) G on Q^(dim F * dim G); index i * dim G + j."""
    bF = F.compatible_basis()
    bG = G.compatible_basis()
    basis, ws = [], []
    for e, a in bF:
        for f, b in bG:
            basis.append([x * y for x in e for y in f])
            ws.append(a + b)
    return RFiltration.from_basis(basis, ws)


def exterior(F: RFiltration, k: int) -> RFiltration:
    """k-th exterior power in the basis e_I, I increasing."""
    b = F.compatible_basis()
    n = F.dim
    if not 0 <= k <= n:
        raise FiltrationError("exterior power degree out of range")
    if k == 0:
        return RFiltration.trivial(1)
    basis, ws = [], []
    for I in combinations(range(n), k):
        basis.append(wedge_coordinates([b[i][0] for i in I]))
        ws.append(sum((b[i][1] for i in I), Fraction(0)))
    return RFiltration.from_basis(basis, ws)


def direct_sum(F: RFiltration, G: RFiltration) -> RFiltration:
    n, m = F.dim, G.dim
    basis, ws = [], []
    for e, a in F.compatible_basis():
        basis.append(list(e) + [0] * m)
        ws.append(a)
    for f, b in G.compatible_basis():
        basis.append([0] * n + list(f))
        ws.append(b)
    return RFiltration.from_basis(basis, ws)


def translate(F: RFiltration, a) -> RFiltration:
    """Shift every weight by a; the expectation moves by a."""
    a = la.as_fraction(a)
    return RFiltration(F.dim, F.steps, tuple(w + a for w in F.weights))


def dilate(F: RFiltration, eps) -> RFiltration:
    eps = la.as_fraction(eps)
    if eps <= 0:
        raise FiltrationError("dilation factor must be positive")
    return RFiltration(F.dim, F.steps, tuple(w * eps for w in F.weights))


def refine(F: RFiltration, per_step: Sequence[RFiltration]) -> RFiltration:
    """Refinement by filtrations of the subquotients W_i / W_{i-1}.

    The subquotient at step i is given coordinates by the basis vectors
    :meth:`RFiltration.step_complements` adds at that step.
    """
    groups = F.step_complements()
    if len(per_step) != len(groups):
        raise FiltrationError("one filtration per step is required")
    basis, ws = [], []
    for g, sub in zip(groups, per_step):
        if sub.dim != len(g):
            raise FiltrationError("subquotient filtration has the wrong dimension")
        for c, w in sub.compatible_basis():
            basis.append([sum(ci * gi[k] for ci, gi in zip(c, g)) for k in range(F.dim)])
            ws.append(w)
    return RFiltration.from_basis(basis, ws)


def flatten_matrix(phi: Sequence[Sequence]) -> list:
    return [x for row in phi for x in row]


def tensor_lambda(F: RFiltration, G: RFiltration, phi: Sequence[Sequence]) -> Fraction | float:
    """lambda_{F (x) G} of the tensor with coefficient matrix phi."""
    P = [e for e, _ in F.compatible_basis()]
    Q = [f for f, _ in G.compatible_basis()]
    wF = [w for _, w in F.compatible_basis()]
    wG = [w for _, w in G.compatible_basis()]
    # phi = sum C_ij e_i (x) f_j with C = P^{-T} phi Q^{-1}
    C = la.mat_mul(la.mat_mul(la.transpose(la.inverse(P)), phi), la.inverse(Q))
    vals = [wF[i] + wG[j] for i in range(len(P)) for j in range(len(Q)) if C[i][j] != 0]
    return min(vals) if vals else math.inf


@dataclass
class ExpectationCheck:
    lhs: Fraction
    rhs: Fraction

    @property
    def holds(self) -> bool:
        return self.lhs <= self.rhs


def semist_expectation_check(phi: Sequence[Sequence], F: RFiltration, G: RFiltration) -> ExpectationCheck:
    """lambda_{F (x) G}(phi) <= E[F] + E[G] for invertible phi."""
    n = len(phi)
    if n == 0 or any(len(r) != n for r in phi) or la.det(phi) == 0:
        raise FiltrationError("phi must be invertible")
    if F.dim != n or G.dim != n:
        raise FiltrationError("filtrations do not match phi")
    lam = tensor_lambda(F, G, phi)
    return ExpectationCheck(la.as_fraction(lam), expectation(F) + expectation(G))
