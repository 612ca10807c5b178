"""Harder-Narasimhan filtrations of lattices."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import linalg as la
from .filtrations import RFiltration
from .lattice import Lattice, LatticeError, LinearMap, height, image_rank, induced, ndeg, quotient
from .logs import LogRational
from .minima import max_slope
from .reports import EXACT, LOWER, UNKNOWN, CheckReport

EXACT_MODE = "EXACT"


@dataclass
class HNData:
    flag: list[list[list[int]]]
    slopes: list[LogRational]
    polygon: list[tuple[int, LogRational]]
    mode: str

    @property
    def mu_max(self) -> LogRational:
        return self.slopes[0]

    @property
    def mu_min(self) -> LogRational:
        return self.slopes[-1]

    @property
    def ranks(self) -> list[int]:
        return [len(f) for f in self.flag]

    def successive_slopes(self) -> list[LogRational]:
        """mu_1 >= ... >= mu_r, each slope repeated by the rank of its piece."""
        out = []
        prev = 0
        for s, r in zip(self.slopes, self.ranks):
            out.extend([s] * (r - prev))
            prev = r
        return out


_CACHE: dict = {}


def hn_data(L: Lattice) -> HNData:
    """HN flag (saturated sublattices, ambient coordinates), slopes and polygon."""
    key = L.gram
    if key in _CACHE:
        return _CACHE[key]
    n = L.rank
    if n == 0:
        raise LatticeError("slope of zero bundle")
    cert = max_slope(L)
    mode = cert.mode
    first = cert.destabilizing
    if len(first) == n:
        flag = [la.identity(n)]
    else:
        Q = quotient(L, first)
        rest = hn_data(Q.lattice)
        if rest.mode != "EXACT":
            mode = rest.mode
        flag = [first] + [Q.lift(step) for step in rest.flag]
    polygon = [(0, LogRational.zero())]
    slopes = []
    for step in flag:
        d = ndeg(induced(L, step))
        r = len(step)
        r0, d0 = polygon[-1]
        slopes.append((d - d0).scale(Fraction(1, r - r0)))
        polygon.append((r, d))
    out = HNData(flag, slopes, polygon, mode)
    if len(_CACHE) > 4096:
        _CACHE.clear()
    _CACHE[key] = out
    return out


def mu_max(L: Lattice) -> LogRational:
    return hn_data(L).mu_max


def mu_min(L: Lattice) -> LogRational:
    return hn_data(L).mu_min


def polygon_value(hn: HNData, k: int) -> LogRational:
    """Value at rank k of the (concave, piecewise linear) HN polygon."""
    pts = hn.polygon
    for (r0, d0), (r1, d1) in zip(pts, pts[1:]):
        if r0 <= k <= r1:
            if k == r1:
                return d1
            return d0 + (d1 - d0).scale(Fraction(k - r0, r1 - r0))
    raise ValueError("rank out of range")


def canonical_polygon_points(L: Lattice) -> dict[int, tuple[LogRational, list[list[int]] | None]]:
    """rank -> polygon value, with the HN step realising it at the vertices."""
    hn = hn_data(L)
    vertices = {len(f): f for f in hn.flag}
    return {k: (polygon_value(hn, k), vertices.get(k)) for k in range(L.rank + 1)}


@dataclass
class SemistabilityCertificate:
    status: str  # SEMISTABLE | UNSTABLE | INCONCLUSIVE
    reason: str
    witness: list[list[int]] | None = None
    witness_slope: LogRational | None = None


def is_semistable(L: Lattice) -> SemistabilityCertificate:
    """Semistability with a certificate.

    A lattice whose automorphism group acts absolutely irreducibly is
    semistable: the destabilising sublattice is invariant. Otherwise the
    exhaustive max-slope search decides.
    """
    from .automorphisms import AutomorphismCapExceeded, automorphism_group, is_absolutely_irreducible

    try:
        group = automorphism_group(L, cap=2000)
        if is_absolutely_irreducible(group):
            return SemistabilityCertificate("SEMISTABLE", "absolutely irreducible automorphism group")
    except AutomorphismCapExceeded:
        pass
    cert = max_slope(L)
    n = L.rank
    if len(cert.destabilizing) < n:
        return SemistabilityCertificate("UNSTABLE", "destabilising sublattice", cert.destabilizing, cert.value)
    if cert.mode == "EXACT":
        return SemistabilityCertificate("SEMISTABLE", "exhaustive enumeration")
    return SemistabilityCertificate("INCONCLUSIVE", "enumeration budget exhausted")


@dataclass
class HNRFiltration:
    """The R-indexed HN filtration: weight of each step is the slope of its piece."""

    dim: int
    flag: list[list[list[int]]]
    weights: list[LogRational]

    def expectation(self) -> LogRational:
        total = LogRational.zero()
        prev = 0
        for step, w in zip(self.flag, self.weights):
            total = total + w.scale(len(step) - prev)
            prev = len(step)
        return total.scale(Fraction(1, self.dim))

    def Z(self) -> list[LogRational]:
        out = []
        prev = 0
        for step, w in zip(self.flag, self.weights):
            out.extend([w] * (len(step) - prev))
            prev = len(step)
        return out


def hn_rfiltration(L: Lattice) -> HNRFiltration:
    hn = hn_data(L)
    return HNRFiltration(L.rank, hn.flag, hn.slopes)


def bogomolov_functional(F: RFiltration, L: Lattice) -> LogRational:
    """(1/r) sum_i a_i (ndeg W_i - ndeg W_{i-1}) over the saturated steps of F."""
    if F.dim != L.rank:
        raise LatticeError("filtration and lattice dimensions differ")
    total = LogRational.zero()
    prev = LogRational.zero()
    for step, a in zip(F.steps, F.weights):
        W = la.saturate(step, L.rank)
        d = ndeg(induced(L, W))
        total = total + (d - prev).scale(a)
        prev = d
    return total.scale(Fraction(1, L.rank))


def slope_inequality_check(f: LinearMap, mode: str, suite: str = "lattice", case_id: str = "slope_inequality", seed: int = 0) -> CheckReport:
    """Slope inequalities for a map with the given property.

    injective: mu_max(E) <= mu_max(F) + h(f)
    surjective: mu_min(E) <= mu_min(F) + h(f)
    nonzero: mu_min(E) <= mu_max(F) + h(f)
    """
    if mode not in ("injective", "surjective", "nonzero"):
        raise LatticeError(f"unknown mode {mode!r}")
    r = image_rank(f)
    if mode == "injective" and r != f.source.rank:
        raise LatticeError("map is not injective")
    if mode == "surjective" and r != f.target.rank:
        raise LatticeError("map is not surjective")
    if r == 0:
        raise LatticeError("map is zero")
    h = height(f)
    hE, hF = hn_data(f.source), hn_data(f.target)
    exE, exF = hE.mode == EXACT_MODE, hF.mode == EXACT_MODE
    if mode == "injective":
        lhs, base = hE.mu_max, hF.mu_max
        lk, rk = (EXACT if exE else LOWER), (EXACT if exF else LOWER)
    elif mode == "surjective":
        lhs, base = hE.mu_min, hF.mu_min
        lk, rk = (EXACT if exE else UNKNOWN), (EXACT if exF else UNKNOWN)
    else:
        lhs, base = hE.mu_min, hF.mu_max
        lk, rk = (EXACT if exE else UNKNOWN), (EXACT if exF else LOWER)
    return CheckReport.compare(suite, case_id, seed, lhs, h.value + base, f"mode={mode}", lhs_kind=lk, rhs_kind=rk)
