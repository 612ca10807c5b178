"""Certified enclosures of the largest eigenvalue via Sturm sequences.

Polynomials are coefficient lists over Q, lowest degree first.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .linalg import LinalgError, as_fraction, det, is_symmetric, mat_mul

Poly = list[Fraction]


def poly_trim(p: Poly) -> Poly:
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def poly_eval(p: Sequence[Fraction], x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def poly_deriv(p: Poly) -> Poly:
    return poly_trim([i * p[i] for i in range(1, len(p))])


def poly_divmod(a: Poly, b: Poly) -> tuple[Poly, Poly]:
    a = poly_trim(a)
    b = poly_trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    r = list(a)
    lb = b[-1]
    while len(r) >= len(b) and r:
        shift = len(r) - len(b)
        f = r[-1] / lb
        q[shift] = f
        for i, c in enumerate(b):
            r[shift + i] -= f * c
        r = poly_trim(r)
    return poly_trim(q), r


def poly_gcd(a: Poly, b: Poly) -> Poly:
    a, b = poly_trim(a), poly_trim(b)
    while b:
        _, r = poly_divmod(a, b)
        a, b = b, r
    if not a:
        return a
    lead = a[-1]
    return [c / lead for c in a]


def poly_mul(a: Poly, b: Poly) -> Poly:
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return poly_trim(out)


def interpolate(xs: Sequence[Fraction], ys: Sequence[Fraction]) -> Poly:
    """Lagrange interpolation through the given points."""
    n = len(xs)
    out = [Fraction(0)] * n
    for i in range(n):
        if ys[i] == 0:
            continue
        basis = [Fraction(1)]
        denom = Fraction(1)
        for j in range(n):
            if j != i:
                basis = poly_mul(basis, [-xs[j], Fraction(1)])
                denom *= xs[i] - xs[j]
        f = ys[i] / denom
        for k, c in enumerate(basis):
            out[k] += f * c
    return poly_trim(out)


def charpoly(A: Sequence[Sequence]) -> Poly:
    """det(x I - A) by exact evaluation and interpolation."""
    n = len(A)
    xs = [Fraction(k) for k in range(n + 1)]
    ys = []
    for x in xs:
        M = [[(x if i == j else 0) - as_fraction(A[i][j]) for j in range(n)] for i in range(n)]
        ys.append(as_fraction(det(M)))
    p = interpolate(xs, ys)
    return p + [Fraction(0)] * (n + 1 - len(p))


def sturm_sequence(p: Poly) -> list[Poly]:
    seq = [poly_trim(p), poly_deriv(p)]
    while seq[-1]:
        _, r = poly_divmod(seq[-2], seq[-1])
        if not r:
            break
        seq.append([-c for c in r])
    return [s for s in seq if s]


def _variations(seq: list[Poly], x: Fraction) -> int:
    signs = []
    for s in seq:
        v = poly_eval(s, x)
        if v != 0:
            signs.append(v > 0)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def _variations_at_infinity(seq: list[Poly]) -> int:
    signs = [s[-1] > 0 for s in seq]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def squarefree(p: Poly) -> Poly:
    g = poly_gcd(p, poly_deriv(p))
    if len(g) <= 1:
        return poly_trim(p)
    q, _ = poly_divmod(p, g)
    return q


def simplest_between(lo: Fraction, hi: Fraction) -> Fraction:
    """Rational with the smallest denominator in [lo, hi] (Stern-Brocot)."""
    if lo > hi:
        lo, hi = hi, lo
    if lo <= 0 <= hi:
        return Fraction(0)
    if hi < 0:
        return -simplest_between(-hi, -lo)
    fl = lo.numerator // lo.denominator
    if Fraction(fl) == lo:
        return lo
    if fl + 1 <= hi:
        return Fraction(fl + 1)
    # lo, hi lie in (fl, fl+1)
    inner = simplest_between(1 / (hi - fl), 1 / (lo - fl))
    return fl + 1 / inner


@dataclass
class EigenInterval:
    """Certified enclosure [lower, upper] of the largest real root of a polynomial.

    ``exact`` is set when the root was verified to be a rational number.
    """

    lower: Fraction
    upper: Fraction
    exact: bool = False
    _poly: Poly = field(default_factory=list, repr=False)
    _sturm: list[Poly] = field(default_factory=list, repr=False)

    @property
    def width(self) -> Fraction:
        return self.upper - self.lower

    def refine(self, eps: Fraction) -> "EigenInterval":
        eps = as_fraction(eps)
        while not self.exact and self.upper - self.lower > eps:
            mid = (self.lower + self.upper) / 2
            if poly_eval(self._poly, mid) == 0 and _variations(self._sturm, mid) - _variations(self._sturm, self.upper) == 0:
                self.lower = self.upper = mid
                self.exact = True
                break
            if _variations(self._sturm, mid) - _variations(self._sturm, self.upper) > 0:
                self.lower = mid
            else:
                self.upper = mid
            self._try_rational()
        return self

    def _try_rational(self) -> None:
        if self.exact:
            return
        cand = simplest_between(self.lower, self.upper)
        if cand == self.lower:
            cand = simplest_between(self.lower + (self.upper - self.lower) / (1 << 30), self.upper)
        if (
            self.lower < cand <= self.upper
            and cand.denominator < 1 << 20
            and poly_eval(self._poly, cand) == 0
            and _variations(self._sturm, cand) == _variations(self._sturm, self.upper)
        ):
            self.lower = self.upper = cand
            self.exact = True


def largest_root_interval(p: Poly, upper_bound: Fraction, eps: Fraction = Fraction(1, 1 << 20)) -> EigenInterval:
    """Enclose the largest real root of p, assumed to lie in [0, upper_bound]."""
    sf = squarefree(poly_trim(p))
    seq = sturm_sequence(sf)
    hi = as_fraction(upper_bound)
    v_inf = _variations_at_infinity(seq)
    while poly_eval(sf, hi) == 0 or _variations(seq, hi) != v_inf:
        hi = 2 * hi + 1
    lo = Fraction(0)
    if poly_eval(sf, lo) == 0 and _variations(seq, lo) - _variations(seq, hi) == 0:
        return EigenInterval(lo, lo, True, sf, seq)
    # largest root is in (lo, hi]; ensure a root exceeds lo
    if _variations(seq, lo) - _variations(seq, hi) == 0:
        raise LinalgError("no nonnegative real root")
    ev = EigenInterval(lo, hi, False, sf, seq)
    ev._try_rational()
    return ev.refine(eps)


def _psd_upper_bound(A: Sequence[Sequence]) -> Fraction:
    # for a matrix with nonnegative real spectrum, the trace bounds lambda_max
    tr = sum(as_fraction(A[i][i]) for i in range(len(A)))
    return max(tr, Fraction(0)) + 1


def max_eigenvalue_interval(S: Sequence[Sequence], eps: Fraction = Fraction(1, 1 << 20)) -> EigenInterval:
    """Largest eigenvalue of a positive semidefinite symmetric rational matrix."""
    if not is_symmetric(S):
        raise LinalgError("matrix is not symmetric")
    return largest_root_interval(charpoly(S), _psd_upper_bound(S), eps)


def max_product_eigenvalue_interval(A: Sequence[Sequence], B: Sequence[Sequence], eps: Fraction = Fraction(1, 1 << 20)) -> EigenInterval:
    """Largest eigenvalue of A B for A, B symmetric positive semidefinite.

    Such a product has a real nonnegative spectrum, which is all the
    Sturm isolation needs.
    """
    if not is_symmetric(A) or not is_symmetric(B):
        raise LinalgError("matrix is not symmetric")
    AB = mat_mul(A, B)
    return largest_root_interval(charpoly(AB), _psd_upper_bound(AB), eps)
