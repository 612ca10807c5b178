"""Exact identities and inequalities for lattices, returned as check reports."""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from . import linalg as la
from .automorphisms import AutomorphismCapExceeded, automorphism_group, is_absolutely_irreducible
from .filtrations import RFiltration, expectation
from .hn import EXACT_MODE, bogomolov_functional, hn_data
from .lattice import Lattice, dual, induced, ndeg, orthogonal_complement, quotient, slope, tensor
from .logs import LogRational
from .minima import first_degree_Z
from .reports import EXACT, LOWER, UNKNOWN, CheckReport

Rows = Sequence[Sequence[int]]


def _exact(L: Lattice) -> bool:
    return hn_data(L).mode == EXACT_MODE


def minkowski_sandwich(L: Lattice, suite: str = "lattice", case_id: str = "minkowski", seed: int = 0) -> list[CheckReport]:
    """-log lambda_1 <= mu_max <= -log lambda_1 + (1/2) log r."""
    fd = first_degree_Z(L)
    mm = hn_data(L).mu_max
    kind = EXACT if _exact(L) else LOWER
    half = LogRational.half_log(L.rank)
    return [
        CheckReport.compare(suite, f"{case_id}:lower", seed, fd, mm, rhs_kind=kind),
        CheckReport.compare(suite, f"{case_id}:upper", seed, mm, fd + half, lhs_kind=kind),
    ]


def transference(L: Lattice, suite: str = "lattice", case_id: str = "transfer", seed: int = 0) -> list[CheckReport]:
    """mu_i(L^v) = -mu_{r+1-i}(L)."""
    D = dual(L)
    a, b = hn_data(L), hn_data(D)
    ok = a.mode == EXACT_MODE and b.mode == EXACT_MODE
    sa, sb = a.successive_slopes(), b.successive_slopes()
    r = L.rank
    return [CheckReport.equality(suite, f"{case_id}:{i + 1}", seed, sb[i], -sa[r - 1 - i], exact=ok) for i in range(r)]


def slope_sum(L: Lattice, suite: str = "lattice", case_id: str = "slope_sum", seed: int = 0) -> CheckReport:
    hn = hn_data(L)
    total = LogRational.zero()
    for s in hn.successive_slopes():
        total = total + s
    return CheckReport.equality(suite, case_id, seed, total, ndeg(L), exact=hn.mode == EXACT_MODE)


def polygon_concavity(L: Lattice, suite: str = "lattice", case_id: str = "concavity", seed: int = 0) -> list[CheckReport]:
    """Successive slopes weakly decreasing."""
    hn = hn_data(L)
    ok = hn.mode == EXACT_MODE
    s = hn.successive_slopes()
    kind = EXACT if ok else UNKNOWN
    return [CheckReport.compare(suite, f"{case_id}:{i + 1}", seed, s[i + 1], s[i], lhs_kind=kind, rhs_kind=kind) for i in range(len(s) - 1)]


def dual_negation(L: Lattice, suite: str = "lattice", case_id: str = "dual_ndeg", seed: int = 0) -> CheckReport:
    return CheckReport.equality(suite, case_id, seed, ndeg(dual(L)), -ndeg(L))


def tensor_additivity(E: Lattice, F: Lattice, suite: str = "lattice", case_id: str = "tensor_ndeg", seed: int = 0) -> CheckReport:
    rhs = ndeg(E).scale(F.rank) + ndeg(F).scale(E.rank)
    return CheckReport.equality(suite, case_id, seed, ndeg(tensor(E, F)), rhs)


def exact_sequence(L: Lattice, S: Rows, suite: str = "lattice", case_id: str = "exact_seq", seed: int = 0) -> CheckReport:
    """ndeg(L) = ndeg(S) + ndeg(L/S) for saturated S."""
    Q = quotient(L, S).lattice
    return CheckReport.equality(suite, case_id, seed, ndeg(L), ndeg(induced(L, S)) + ndeg(Q))


def orthogonal_duality(L: Lattice, S: Rows, suite: str = "lattice", case_id: str = "dualite", seed: int = 0) -> CheckReport:
    """ndeg(S^perp) = ndeg(S) - ndeg(L)."""
    P, _ = orthogonal_complement(L, S)
    return CheckReport.equality(suite, case_id, seed, ndeg(P), ndeg(induced(L, S)) - ndeg(L))


def _ndeg_sat(L: Lattice, rows: Rows) -> LogRational:
    rows = [list(r) for r in rows if any(r)]
    if not rows or la.rank(rows) == 0:
        return LogRational.zero()
    return ndeg(induced(L, la.saturate(rows, L.rank)))


def submodularity(L: Lattice, S1: Rows, S2: Rows, suite: str = "lattice", case_id: str = "suraddi", seed: int = 0) -> CheckReport:
    """ndeg(S1 ∩ S2) + ndeg(S1 + S2) >= ndeg(S1) + ndeg(S2), S1 and S2 saturated."""
    inter = la.intersect_spans(S1, S2, L.rank)
    lhs = _ndeg_sat(L, S1) + _ndeg_sat(L, S2)
    rhs = _ndeg_sat(L, inter) + _ndeg_sat(L, list(S1) + list(S2))
    return CheckReport.compare(suite, case_id, seed, lhs, rhs)


def mumaxquot(L: Lattice, M: Rows, suite: str = "lattice", case_id: str = "mumaxquot", seed: int = 0) -> CheckReport:
    """mu_max(L/M) <= (r+1) mu_max(L) - r mu(M), r = rank M."""
    r = len(M)
    Q = quotient(L, M).lattice
    hq, hl = hn_data(Q), hn_data(L)
    rhs = hl.mu_max.scale(r + 1) - slope(induced(L, M)).scale(r)
    return CheckReport.compare(
        suite, case_id, seed, hq.mu_max, rhs,
        lhs_kind=EXACT if hq.mode == EXACT_MODE else LOWER,
        rhs_kind=EXACT if hl.mode == EXACT_MODE else LOWER,
    )


def irreducible_semistable(L: Lattice, suite: str = "lattice", case_id: str = "irred_aut", seed: int = 0, cap: int = 2000) -> CheckReport | None:
    """For L certified absolutely irreducible, mu_max = mu. None if not certified."""
    try:
        if not is_absolutely_irreducible(automorphism_group(L, cap)):
            return None
    except AutomorphismCapExceeded:
        return None
    hn = hn_data(L)
    return CheckReport.equality(suite, case_id, seed, hn.mu_max, slope(L), exact=hn.mode == EXACT_MODE)


def _wedge_sq(G, u, v) -> Fraction:
    a, b, c = la.bilinear(u, G, u), la.bilinear(u, G, v), la.bilinear(v, G, v)
    return la.as_fraction(a * c - b * b)


def rk2loc(E: Lattice, F: Lattice, e1, e2, f1, f2, suite: str = "lattice", case_id: str = "rk2loc", seed: int = 0) -> CheckReport:
    """|e1 f1 ^ e2 f2|^2 >= |e1 ^ e2|^2 |f1 ^ f2|^2, squared norms compared exactly."""
    T = tensor(E, F)
    t1 = [x * y for x in e1 for y in f1]
    t2 = [x * y for x in e2 for y in f2]
    lhs = _wedge_sq(E.gram, e1, e2) * _wedge_sq(F.gram, f1, f2)
    rhs = _wedge_sq(T.gram, t1, t2)
    return CheckReport.compare(suite, case_id, seed, lhs, rhs)


def two_stable(E: Lattice, F: Lattice, e: Rows, f: Rows, suite: str = "lattice", case_id: str = "2stable", seed: int = 0) -> CheckReport:
    """mu(V) <= mu(E) + mu(F) for V = span(e1 f1, e2 f2) with (e1, e2), (f1, f2) bases of E_Q, F_Q."""
    if E.rank != 2 or F.rank != 2 or la.rank(e) != 2 or la.rank(f) != 2:
        raise ValueError("rank-2 factors with rational bases are required")
    gens = [[x * y for x in e[i] for y in f[i]] for i in range(2)]
    V = induced(tensor(E, F), la.saturate(gens, 4))
    return CheckReport.compare(suite, case_id, seed, slope(V), slope(E) + slope(F))


def bogomolov(L: Lattice, F: RFiltration, suite: str = "hn", case_id: str = "bogomolov", seed: int = 0) -> CheckReport:
    """E_mu[F] <= mu(L) E[F], valid when L is semistable."""
    return CheckReport.compare(suite, case_id, seed, bogomolov_functional(F, L), slope(L).scale(expectation(F)))
