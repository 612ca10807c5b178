"""Determinantal loci of linear spaces of matrices.

For a pencil a M1 + b M2 the question "does some nonzero (a:b) over the
algebraic closure give rank <= k" is decided exactly: the (k+1)-minors are
binary forms, and they share a projective zero iff their gcd is
nonconstant (or M1 itself has rank <= k, the point at infinity).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import linalg as la
from .eigen import Poly, interpolate, poly_divmod, poly_eval, poly_gcd, poly_trim

Mat = Sequence[Sequence]


def combine(coeffs: Sequence, mats: Sequence[Mat]) -> list[list]:
    n, m = len(mats[0]), len(mats[0][0])
    out = [[0] * m for _ in range(n)]
    for c, M in zip(coeffs, mats):
        if c:
            for i in range(n):
                for j in range(m):
                    if M[i][j]:
                        out[i][j] += c * M[i][j]
    return [[la.normalize(x) for x in row] for row in out]


def matrix_rank(M: Mat) -> int:
    return la.rank(M) if any(x for row in M for x in row) else 0


def _minor_polys(M1: Mat, M2: Mat, k: int) -> list[Poly]:
    """All (k+1)-minors of t M1 + M2 as polynomials in t."""
    n, m = len(M1), len(M1[0])
    s = k + 1
    ts = [Fraction(t) for t in range(s + 1)]
    evals = [combine([t, 1], [M1, M2]) for t in ts]
    out = []
    for rows in itertools.combinations(range(n), s):
        for cols in itertools.combinations(range(m), s):
            ys = [la.as_fraction(la.det([[E[i][j] for j in cols] for i in rows])) for E in evals]
            out.append(interpolate(ts, ys))
    return out


@dataclass
class PencilLocus:
    """V ∩ D_k for V = span(M1, M2): dimension (0, 1 or 2) and the data behind it."""

    k: int
    dim: int
    gcd: Poly  # common factor of the minors in t (a = t b); empty if all vanish
    at_infinity: bool  # M1 alone has rank <= k
    rational_points: list[tuple[Fraction, Fraction]]


def _rational_roots(p: Poly) -> list[Fraction]:
    p = poly_trim(p)
    if len(p) <= 1:
        return []
    if len(p) == 2:
        return [-p[0] / p[1]]
    den = la.denominator_lcm([p])
    ip = [int(c * den) for c in p]
    if ip[0] == 0:
        q, _ = poly_divmod(p, [Fraction(0), Fraction(1)])
        return [Fraction(0)] + [r for r in _rational_roots(q) if r != 0]
    a0, an = abs(ip[0]), abs(ip[-1])
    if a0 > 10**6 or an > 10**6:
        return []
    divs = lambda x: [d for d in range(1, x + 1) if x % d == 0]
    out = set()
    for pn in divs(a0):
        for qd in divs(an):
            for sgn in (1, -1):
                r = Fraction(sgn * pn, qd)
                if poly_eval(p, r) == 0:
                    out.add(r)
    return sorted(out)


def pencil_locus(M1: Mat, M2: Mat, k: int) -> PencilLocus:
    n, m = len(M1), len(M1[0])
    if k >= min(n, m):
        return PencilLocus(k, 2, [], True, [(Fraction(1), Fraction(0)), (Fraction(0), Fraction(1))])
    inf = matrix_rank(M1) <= k
    polys = [p for p in _minor_polys(M1, M2, k) if poly_trim(p)]
    if not polys:
        return PencilLocus(k, 2, [], True, [(Fraction(1), Fraction(0)), (Fraction(0), Fraction(1))])
    g = polys[0]
    for p in polys[1:]:
        g = poly_gcd(g, p)
        if len(poly_trim(g)) <= 1:
            break
    g = poly_trim(g)
    finite = len(g) > 1
    pts = [(t, Fraction(1)) for t in _rational_roots(g)] if finite else []
    if inf:
        pts.append((Fraction(1), Fraction(0)))
    return PencilLocus(k, 1 if (finite or inf) else 0, g if finite else [], inf, pts)


def generic_rank(mats: Sequence[Mat], grid_cap: int = 200_000) -> tuple[int, bool]:
    """Rank of a generic element of span(mats); the flag says it is certified.

    A (k+1)-minor is a polynomial of degree <= min(n, m) in each
    coordinate, so it vanishes on the grid {0..min(n, m)}^r only if it is
    identically zero.
    """
    n, m = len(mats[0]), len(mats[0][0])
    top = min(n, m)
    r = len(mats)
    best = max(matrix_rank(M) for M in mats)
    # a few deterministic dense combinations usually reach the generic rank
    for t in range(1, 4):
        c = [(t * 7 + 3 * i * i + i) % 11 + 1 for i in range(r)]
        best = max(best, matrix_rank(combine(c, mats)))
    if best == top:
        return best, True
    if (top + 1) ** r > grid_cap:
        return best, False
    for c in itertools.product(range(top + 1), repeat=r):
        if any(c):
            rk = matrix_rank(combine(c, mats))
            if rk > best:
                best = rk
                if best == top:
                    break
    return best, True


def dimension_count_bound(r: int, n: int, m: int, k: int) -> int:
    """Lower bound for dim(V ∩ D_k) from codim D_k = (n-k)(m-k)."""
    return max(r - (n - k) * (m - k), 0)
