"""Rank-one points over the Euclidean imaginary quadratic rings Z[i], Z[w], Z[sqrt(-2)].

An element a + b*theta is stored as the integer pair (a, b). With
t = theta + conj(theta) and N = theta * conj(theta) the norm form is
a^2 + t a b + N b^2, and theta^2 = t theta - N.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from . import linalg as la
from .lattice import Lattice, LatticeError
from .logs import LogRational
from .reports import CheckReport


@dataclass(frozen=True)
class IQRing:
    name: str
    trace: int  # theta + conj(theta)
    norm: int  # theta * conj(theta)


GAUSS = IQRing("GAUSS", 0, 1)
EISENSTEIN = IQRing("EISENSTEIN", -1, 1)
SQRT2 = IQRing("SQRT2", 0, 2)
RINGS = {r.name: r for r in (GAUSS, EISENSTEIN, SQRT2)}

Elt = tuple[int, int]


def ring(tag: str | IQRing) -> IQRing:
    if isinstance(tag, IQRing):
        return tag
    try:
        return RINGS[tag.upper()]
    except KeyError:
        raise ValueError(f"unknown ring {tag!r}") from None


def mul(R: IQRing, x: Elt, y: Elt) -> Elt:
    a, b = x
    c, d = y
    # (a + b th)(c + d th) = ac + (ad + bc) th + bd (t th - N)
    return (a * c - R.norm * b * d, a * d + b * c + R.trace * b * d)


def conj(R: IQRing, x: Elt) -> Elt:
    a, b = x
    return (a + R.trace * b, -b)


def elt_norm(R: IQRing, x: Elt) -> int:
    a, b = x
    return a * a + R.trace * a * b + R.norm * b * b


def _round(x: Fraction) -> int:
    return (x.numerator * 2 + x.denominator) // (2 * x.denominator)


def divmod_(R: IQRing, x: Elt, y: Elt) -> tuple[Elt, Elt]:
    """Euclidean division x = q y + r with N(r) < N(y)."""
    n = elt_norm(R, y)
    if n == 0:
        raise ZeroDivisionError("division by zero in ring")
    c, d = mul(R, x, conj(R, y))
    q = (_round(Fraction(c, n)), _round(Fraction(d, n)))
    qy = mul(R, q, y)
    return q, (x[0] - qy[0], x[1] - qy[1])


def gcd(R: IQRing, x: Elt, y: Elt) -> Elt:
    while y != (0, 0):
        _, r = divmod_(R, x, y)
        x, y = y, r
    return x


def exact_div(R: IQRing, x: Elt, y: Elt) -> Elt:
    q, r = divmod_(R, x, y)
    if r != (0, 0):
        raise ArithmeticError("not divisible")
    return q


@dataclass(frozen=True)
class IQVector:
    ring: IQRing
    coords: tuple[Elt, ...]

    def __post_init__(self):
        object.__setattr__(self, "ring", ring(self.ring))
        object.__setattr__(self, "coords", tuple((int(a), int(b)) for a, b in self.coords))

    @classmethod
    def from_integers(cls, R, xs: Sequence[int]) -> "IQVector":
        return cls(R, tuple((int(x), 0) for x in xs))

    @property
    def rank(self) -> int:
        return len(self.coords)

    def is_zero(self) -> bool:
        return all(c == (0, 0) for c in self.coords)

    def content(self) -> Elt:
        g = (0, 0)
        for c in self.coords:
            g = gcd(self.ring, g, c)
        return g

    def primitive(self) -> "IQVector":
        if self.is_zero():
            raise LatticeError("zero vector")
        g = self.content()
        return IQVector(self.ring, tuple(exact_div(self.ring, c, g) for c in self.coords))

    def scale(self, c: Elt) -> "IQVector":
        return IQVector(self.ring, tuple(mul(self.ring, c, x) for x in self.coords))

    def parts(self) -> tuple[list[int], list[int]]:
        return [a for a, _ in self.coords], [b for _, b in self.coords]


def hermitian_norm_sq(gram: Sequence[Sequence], v: IQVector) -> Fraction:
    """v* G v for v = x + y theta: x'Gx + N y'Gy + t x'Gy."""
    R = v.ring
    x, y = v.parts()
    return la.as_fraction(la.bilinear(x, gram, x) + R.norm * la.bilinear(y, gram, y) + R.trace * la.bilinear(x, gram, y))


def iq_line_degree(L: Lattice, v: IQVector) -> LogRational:
    """Normalised degree of the saturated O_K-line through v."""
    if v.rank != L.rank:
        raise LatticeError("vector does not match the lattice rank")
    p = v.primitive()
    return LogRational.half_log(1 / hermitian_norm_sq(L.gram, p))


def alpha(v: IQVector) -> int:
    return sum(1 for c in v.coords if c != (0, 0))


def check_An_alpha_bound(n: int, v: IQVector, suite: str = "iq", case_id: str = "An_alpha", seed: int = 0) -> CheckReport:
    """ndeg(line through v) <= -1/2 log alpha(v) for v in A_n (x) O, ambient coordinates."""
    if v.rank != n + 1:
        raise LatticeError("A_n vectors have n + 1 ambient coordinates")
    if any(sum(c[k] for c in v.coords) for k in (0, 1)):
        raise LatticeError("coordinates of an A_n vector sum to zero")
    a = alpha(v)
    deg = iq_line_degree(Lattice(la.identity(n + 1), f"Z^{n + 1}"), v)
    return CheckReport.compare(suite, case_id, seed, deg, LogRational.half_log(Fraction(1, a)), f"alpha={a}")


def random_vector(R: IQRing, rank: int, bound: int, rng: random.Random, sum_zero: bool = False) -> IQVector:
    while True:
        cs = [(rng.randint(-bound, bound), rng.randint(-bound, bound)) for _ in range(rank)]
        if sum_zero:
            cs[-1] = (-sum(a for a, _ in cs[:-1]), -sum(b for _, b in cs[:-1]))
        v = IQVector(R, tuple(cs))
        if not v.is_zero():
            return v


def iter_vectors(R: IQRing, rank: int, bound: int) -> Iterable[IQVector]:
    """All nonzero vectors with both parts of every coordinate in [-bound, bound]."""
    elts = list(itertools.product(range(-bound, bound + 1), repeat=2))
    for cs in itertools.product(elts, repeat=rank):
        v = IQVector(R, cs)
        if not v.is_zero():
            yield v


def best_line_degree(L: Lattice, R: IQRing, bound: int) -> tuple[LogRational, IQVector]:
    """Largest line degree over all vectors in the coefficient box."""
    best = None
    for v in iter_vectors(R, L.rank, bound):
        d = iq_line_degree(L, v)
        if best is None or d > best[0]:
            best = (d, v)
    return best
