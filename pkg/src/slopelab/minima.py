"""Short vectors, successive minima and the maximal slope of a lattice.

Enumeration runs on a floating Cholesky factor of an LLL-reduced form with
a relative safety margin on every bound; every reported vector is then
re-checked with exact arithmetic, so floating error can only enlarge the
search, never shrink it.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from . import linalg as la
from .lattice import Lattice, LatticeError, dual, ndeg, slope
from .logs import Enclosure, LogRational, harmonic_tail

SHORT_VECTOR_CAP = 200_000
SUBSET_CAP = 5_000_000
_MARGIN = 1e-7

# gamma_k^k for the Hermite constants known exactly (k <= 8)
_HERMITE_POWER = {1: 1.0, 2: 4 / 3, 3: 2.0, 4: 4.0, 5: 8.0, 6: 64 / 3, 7: 64.0, 8: 256.0}


class BudgetExceeded(RuntimeError):
    pass


def _budget_scale() -> float:
    raw = os.environ.get("SLOPELAB_BUDGET")
    if not raw:
        return 1.0
    try:
        return max(float(raw), 0.0)
    except ValueError:
        return 1.0


def caps() -> tuple[int, int]:
    s = _budget_scale()
    return int(SHORT_VECTOR_CAP * s), int(SUBSET_CAP * s)


# ------------------------------------------------------------------ LLL


def lll_transform(G: Sequence[Sequence], delta: float = 0.99) -> list[list[int]]:
    """Unimodular U such that U G U^T is LLL-reduced.

    Floating point is used only to steer the reduction; U itself is exact,
    so a poor reduction slows enumeration down but never changes results.
    """
    n = len(G)
    U = la.identity(n)
    if n <= 1:
        return U
    Gf = [[float(x) for x in row] for row in G]
    g = [row[:] for row in Gf]

    def refresh(i: int):
        ui = U[i]
        for j in range(n):
            uj = U[j]
            v = sum(ui[a] * sum(Gf[a][b] * uj[b] for b in range(n) if uj[b]) for a in range(n) if ui[a])
            g[i][j] = g[j][i] = v

    def gso(k: int):
        mu = [[0.0] * n for _ in range(n)]
        bb = [0.0] * n
        for i in range(k + 1):
            for j in range(i):
                s = g[i][j] - sum(mu[j][m] * mu[i][m] * bb[m] for m in range(j))
                mu[i][j] = s / bb[j]
            bb[i] = g[i][i] - sum(mu[i][m] ** 2 * bb[m] for m in range(i))
        return mu, bb

    k = 1
    steps = 0
    while k < n and steps < 10_000:
        steps += 1
        mu, bb = gso(k)
        for l in range(k - 1, -1, -1):
            q = round(mu[k][l])
            if q:
                U[k] = [a - q * b for a, b in zip(U[k], U[l])]
                refresh(k)
                mu, bb = gso(k)
        if bb[k] < (delta - mu[k][k - 1] ** 2) * bb[k - 1]:
            U[k], U[k - 1] = U[k - 1], U[k]
            refresh(k)
            refresh(k - 1)
            k = max(k - 1, 1)
        else:
            k += 1
    return U


# ------------------------------------------------------------ enumeration


def _ldl_upper(G: Sequence[Sequence]) -> tuple[list[float], list[list[float]]]:
    """d, m with x G x^T = sum_i d_i (x_i + sum_{j>i} m_ij x_j)^2."""
    n = len(G)
    a = [[float(x) for x in row] for row in G]
    d = [0.0] * n
    m = [[0.0] * n for _ in range(n)]
    for i in range(n):
        d[i] = a[i][i] - sum(m[k][i] ** 2 * d[k] for k in range(i))
        if d[i] <= 0:
            raise LatticeError("gram matrix is not positive definite")
        for j in range(i + 1, n):
            m[i][j] = (a[i][j] - sum(m[k][i] * m[k][j] * d[k] for k in range(i))) / d[i]
    return d, m


def _enumerate_raw(G: Sequence[Sequence], bound: float, limit: int) -> list[list[int]]:
    """Fincke-Pohst: nonzero x, one per sign pair, with x G x^T <= bound (plus margin)."""
    n = len(G)
    d, m = _ldl_upper(G)
    out: list[list[int]] = []
    x = [0] * n

    def rec(i: int, rem: float, zero_above: bool):
        c = -sum(m[i][j] * x[j] for j in range(i + 1, n))
        r = math.sqrt(max(rem, 0.0) / d[i])
        lo = math.ceil(c - r - 1e-9)
        hi = math.floor(c + r + 1e-9)
        if zero_above:
            lo = max(lo, 0)
        for v in range(lo, hi + 1):
            t = d[i] * (v - c) ** 2
            if t > rem * (1 + 1e-9) + 1e-12:
                continue
            x[i] = v
            if i == 0:
                if not (zero_above and v == 0):
                    out.append(x[:])
                    if len(out) > limit:
                        raise BudgetExceeded("short vector budget exceeded")
            else:
                rec(i - 1, rem - t, zero_above and v == 0)
        x[i] = 0

    rec(n - 1, bound * (1 + _MARGIN) + 1e-12, True)
    return out


@dataclass
class VectorList:
    vectors: list[tuple[int, ...]]
    norms: list[Fraction]


def enumerate_vectors(G: Sequence[Sequence], bound, *, primitive_only: bool = True, limit: int | None = None) -> VectorList:
    """Vectors x != 0 (up to sign) with x G x^T <= bound, sorted by (norm, x)."""
    bound = la.as_fraction(bound)
    n = len(G)
    if limit is None:
        limit = caps()[0]
    if n == 0 or bound <= 0:
        return VectorList([], [])
    U = lll_transform(G)
    Gr = la.congruence(U, G)
    raw = _enumerate_raw(Gr, float(bound), limit)
    scale = la.denominator_lcm(G)
    Gi = [[int(x * scale) for x in row] for row in G]
    ib = bound * scale
    found = []
    for yv in raw:
        x = la.vec_mat(yv, U)
        if primitive_only and la.content(x) != 1:
            continue
        nx = la.bilinear(x, Gi, x)
        if nx <= ib:
            found.append((Fraction(nx, scale), la.sign_normalize(x)))
    found.sort()
    return VectorList([v for _, v in found], [nm for nm, _ in found])


def short_vectors(L: Lattice, bound, primitive_only: bool = True) -> list[tuple[tuple[int, ...], Fraction]]:
    """Primitive vectors of norm^2 <= bound, one per sign pair, sorted by norm."""
    vl = enumerate_vectors(L.gram, bound, primitive_only=primitive_only)
    return list(zip(vl.vectors, vl.norms))


def first_minimum_sq(G: Sequence[Sequence]) -> tuple[Fraction, tuple[int, ...]]:
    U = lll_transform(G)
    Gr = la.congruence(U, G)
    b = min(la.as_fraction(Gr[i][i]) for i in range(len(G)))
    vl = enumerate_vectors(G, b)
    return vl.norms[0], vl.vectors[0]


@dataclass
class Minima:
    norms_sq: list[Fraction]
    vectors: list[tuple[int, ...]]

    @property
    def lambdas(self) -> list[float]:
        return [math.sqrt(x) for x in self.norms_sq]


def successive_minima(L: Lattice) -> Minima:
    """Successive minima (squared) with realising vectors, by greedy selection."""
    n = L.rank
    U = lll_transform(L.gram)
    Gr = la.congruence(U, L.gram)
    bound = min(la.as_fraction(Gr[i][i]) for i in range(n))
    top = max(la.as_fraction(Gr[i][i]) for i in range(n))
    while True:
        vl = enumerate_vectors(L.gram, bound)
        chosen: list[tuple[int, ...]] = []
        norms: list[Fraction] = []
        for v, nv in zip(vl.vectors, vl.norms):
            if la.rank(chosen + [v]) > len(chosen):
                chosen.append(v)
                norms.append(nv)
                if len(chosen) == n:
                    return Minima(norms, chosen)
        if bound >= top:
            bound = 2 * bound
        else:
            bound = min(2 * bound, top)


def first_degree_Z(L: Lattice) -> LogRational:
    """-log lambda_1."""
    nrm, _ = first_minimum_sq(L.gram)
    return LogRational.half_log(1 / nrm)


# ------------------------------------------------------------- max slope


@dataclass
class SlopeCertificate:
    value: LogRational
    witness: list[list[int]]
    destabilizing: list[list[int]]
    mode: str
    bounds: dict = field(default_factory=dict)
    examined: int = 0

    @property
    def exact(self) -> bool:
        return self.mode == "EXACT"


def _log_det_bound(k: int, beta: float) -> float:
    return -2.0 * k * beta


def _quotient_by_vector(G: list[list], w: list[int]) -> tuple[list[list], list[list[int]]]:
    """Gram of Z^m / Zw with orthogonal projection metric, and the complement rows."""
    C = la.complete_basis([w], len(w))
    if not C:
        return [], []
    Gw = la.as_fraction(la.bilinear(w, G, w))
    CG = la.mat_mul(C, G)
    cw = [la.as_fraction(sum(a * b for a, b in zip(row, w))) for row in CG]
    GC = la.mat_mul(CG, la.transpose(C))
    Q = [[la.normalize(GC[i][j] - cw[i] * cw[j] / Gw) for j in range(len(C))] for i in range(len(C))]
    return Q, C


class _FlagSearch:
    """Enumerate saturated rank-k sublattices F of Z^n (gram G) with det(F) <= D.

    A saturated F is reached through the flag spanned by a Korkine-Zolotarev
    basis; its Gram-Schmidt norms s_j satisfy s_{j+1} >= (3/4) s_j, which
    together with det F = prod s_j bounds every level of the search.
    """

    def __init__(self, G, k: int, log_D: Callable[[], float], on_leaf: Callable[[list[list[int]], Fraction], None], node_cap: int):
        self.G = [list(r) for r in G]
        self.n = len(G)
        self.k = k
        self.log_D = log_D
        self.on_leaf = on_leaf
        self.nodes = 0
        self.node_cap = node_cap
        self.seen: dict[tuple, float] = {}

    def run(self):
        ident = la.identity(self.n)
        self._expand([], Fraction(1), None, self.G, ident)

    def _expand(self, F: list[list[int]], P: Fraction, s_prev: Fraction | None, Q: list[list], C: list[list[int]]):
        j = len(F)
        if j == self.k:
            self.on_leaf(F, P)
            return
        key = tuple(map(tuple, la.hnf_basis(F))) if F else ()
        sp = float(s_prev) if s_prev is not None else 0.0
        prev = self.seen.get(key)
        if prev is not None and prev <= sp:
            return
        self.seen[key] = sp
        self.nodes += 1
        if self.nodes > self.node_cap:
            raise BudgetExceeded("subset budget exceeded")
        m = self.k - j
        log_bound = (self.log_D() + m * (m - 1) / 2 * math.log(4 / 3) - math.log(P)) / m
        if log_bound > 700:
            raise BudgetExceeded("enumeration bound too large")
        s_max = math.exp(log_bound) * (1 + _MARGIN)
        if s_prev is not None and s_max < 0.75 * sp * (1 - _MARGIN):
            return
        bound = Fraction(s_max).limit_denominator(1 << 40) + Fraction(1, 1 << 40)
        vl = enumerate_vectors(Q, bound)
        for w, s in zip(vl.vectors, vl.norms):
            if s_prev is not None and s < Fraction(3, 4) * s_prev:
                continue
            # re-test with the current (possibly improved) threshold
            if m * math.log(float(s)) + math.log(P) - m * (m - 1) / 2 * math.log(4 / 3) > self.log_D() + 1e-9 * (1 + abs(self.log_D())):
                break
            v = la.vec_mat(list(w), C)
            F2 = F + [v]
            if j + 1 == self.k:
                self._expand(F2, P * s, s, [], [])
            else:
                Q2, C2 = _quotient_by_vector(Q, list(w))
                C2amb = la.mat_mul(C2, C)
                self._expand(F2, P * s, s, Q2, [[int(x) for x in r] for r in C2amb])


def _hnf_key(rows) -> tuple:
    return tuple(map(tuple, la.hnf_basis(rows)))


def max_slope(L: Lattice, lower_bound: tuple[LogRational, list[list[int]]] | None = None) -> SlopeCertificate:
    """Maximal slope of L with a witness sublattice.

    ``witness`` is the optimal sublattice of smallest rank (ties by HNF);
    ``destabilizing`` is the unique optimal sublattice of largest rank.
    An optional known ``lower_bound`` (value, sublattice basis) seeds the
    pruning threshold.
    """
    n = L.rank
    if n == 0:
        raise LatticeError("slope of zero bundle")
    full = la.identity(n)
    best = {"value": slope(L), "cands": {(_hnf_key(full)): n}}
    if lower_bound is not None and lower_bound[0] > best["value"]:
        basis = _hnf_key(lower_bound[1])
        best = {"value": lower_bound[0], "cands": {basis: len(basis)}}
    if n == 1:
        return SlopeCertificate(best["value"], full, full, "EXACT")
    detE = L.det
    ndegE = float(ndeg(L))
    short_cap, subset_cap = caps()
    examined = 0
    mode = "EXACT"
    Ginv = la.inverse(L.gram)

    def consider(basis: list[list[int]], det_F: Fraction):
        nonlocal examined
        examined += 1
        k = len(basis)
        val = LogRational(1 / det_F, 1).scale(Fraction(1, k))
        c = val.cmp(best["value"])
        if c > 0:
            best["value"] = val
            best["cands"] = {_hnf_key(basis): k}
        elif c == 0:
            best["cands"][_hnf_key(basis)] = k

    remaining = [subset_cap]
    for k in range(1, n):
        if k <= n - k:
            def log_D(k=k):
                return _log_det_bound(k, float(best["value"]))

            def leaf(F, P):
                consider(F, P)

            search = _FlagSearch(L.gram, k, log_D, leaf, remaining[0])
        else:
            m = n - k

            def log_D(k=k):
                return -2.0 * (k * float(best["value"]) - ndegE)

            def leaf(Fd, P, k=k):
                K = la.integer_kernel(Fd, n)
                consider(K, P * detE)

            search = _FlagSearch(Ginv, m, log_D, leaf, remaining[0])
        try:
            search.run()
        except BudgetExceeded:
            mode = "LOWER_BOUND"
        remaining[0] = max(remaining[0] - search.nodes, 1)
    cands = best["cands"]
    witness = min(cands, key=lambda b: (cands[b], b))
    destab = max(cands, key=lambda b: (cands[b], [-x for row in b for x in row]))
    if mode == "EXACT":
        # the optimal sublattices are closed under sums, so the largest one is unique
        dest_rows = [list(r) for r in destab]
        for b in cands:
            if not all(la.in_span(dest_rows, list(r)) for r in b):
                raise AssertionError("optimal sublattices are not nested")
    return SlopeCertificate(
        best["value"],
        [list(r) for r in witness],
        [list(r) for r in destab],
        mode,
        {"hermite": "KZ flag", "short_cap": short_cap, "subset_cap": subset_cap},
        examined,
    )


def varsigma_estimate(L: Lattice) -> Enclosure:
    """Interval for the infimum of first degrees over nonzero quotients.

    Lower end: mu_min - ell(r)/2. Upper end: rank-one quotients only,
    whose first degree equals their degree; the best is log lambda_1(L^v).
    The upper end is also capped by mu_min.
    """
    from .hn import hn_data

    r = L.rank
    mu_min = hn_data(L).mu_min
    lo = mu_min - harmonic_tail(r) / 2
    hi = min(-first_degree_Z(dual(L)), mu_min)
    return Enclosure(lo, hi)
