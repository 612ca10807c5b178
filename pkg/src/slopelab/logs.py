"""Exact real numbers of the form (1/(2d)) log q + c with q, c rational.

``LogRational`` holds the log part alone, in the canonical form with the
smallest possible ``d``. ``LogExpr`` adds a rational constant, which is
what inequalities involving harmonic sums produce. Every comparison is
decided exactly: a nonzero value of the form (1/(2d)) log q + c with
q != 1 and c != 0 is transcendental (Lindemann), so an interval
evaluation at rising precision always terminates.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from math import lcm

import gmpy2
from mpmath import iv

from .linalg import as_fraction

_FLOAT_GUARD = 1e-9


def _exact_root(q: Fraction, k: int) -> Fraction | None:
    rn, ok_n = gmpy2.iroot(q.numerator, k)
    if not ok_n:
        return None
    rd, ok_d = gmpy2.iroot(q.denominator, k)
    if not ok_d:
        return None
    return Fraction(int(rn), int(rd))


def _prime_factors(n: int) -> list[int]:
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def _log_float(q: Fraction) -> float:
    return math.log(q.numerator) - math.log(q.denominator)


def _pow(q: Fraction, e: int) -> Fraction:
    if e >= 0:
        return Fraction(q.numerator**e, q.denominator**e)
    return Fraction(q.denominator ** (-e), q.numerator ** (-e))


@total_ordering
@dataclass(frozen=True)
class LogRational:
    """The real number (1/(2d)) log q with q > 0 rational and d >= 1."""

    q: Fraction
    d: int = 1

    def __post_init__(self):
        q = as_fraction(self.q)
        d = int(self.d)
        if q <= 0:
            raise ValueError("LogRational needs q > 0")
        if d < 1:
            raise ValueError("LogRational needs d >= 1")
        if q == 1:
            d = 1
        else:
            changed = True
            while changed and d > 1:
                changed = False
                for p in _prime_factors(d):
                    r = _exact_root(q, p)
                    if r is not None:
                        q, d = r, d // p
                        changed = True
                        break
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "d", d)

    # constructors -------------------------------------------------------
    @classmethod
    def zero(cls) -> "LogRational":
        return cls(Fraction(1), 1)

    @classmethod
    def half_log(cls, x) -> "LogRational":
        """(1/2) log x."""
        return cls(as_fraction(x), 1)

    @classmethod
    def log(cls, x) -> "LogRational":
        """log x."""
        x = as_fraction(x)
        return cls(x * x, 1)

    # arithmetic ---------------------------------------------------------
    def __add__(self, other):
        if isinstance(other, LogRational):
            L = lcm(self.d, other.d)
            return LogRational(_pow(self.q, L // self.d) * _pow(other.q, L // other.d), L)
        if isinstance(other, (int, Fraction)):
            return LogExpr(self, as_fraction(other))
        return NotImplemented

    __radd__ = __add__

    def __neg__(self) -> "LogRational":
        return LogRational(1 / self.q, self.d)

    def __sub__(self, other):
        if isinstance(other, LogRational):
            return self + (-other)
        if isinstance(other, (int, Fraction)):
            return LogExpr(self, -as_fraction(other))
        return NotImplemented

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, r) -> "LogRational":
        r = as_fraction(r)
        if r == 0:
            return LogRational.zero()
        q = _pow(self.q, abs(r.numerator))
        if r < 0:
            q = 1 / q
        return LogRational(q, self.d * r.denominator)

    def __mul__(self, r):
        if isinstance(r, (int, Fraction)):
            return self.scale(r)
        return NotImplemented

    __rmul__ = __mul__

    # comparison ---------------------------------------------------------
    def sign(self) -> int:
        return (self.q > 1) - (self.q < 1)

    def cmp(self, other: "LogRational") -> int:
        a, b = float(self), float(other)
        if abs(a - b) > _FLOAT_GUARD * (1.0 + abs(a) + abs(b)):
            return 1 if a > b else -1
        lhs = _pow(self.q, other.d)
        rhs = _pow(other.q, self.d)
        return (lhs > rhs) - (lhs < rhs)

    def __lt__(self, other):
        if isinstance(other, LogRational):
            return self.cmp(other) < 0
        if isinstance(other, (LogExpr, int, Fraction)):
            return LogExpr.of(self) < other
        return NotImplemented

    def __eq__(self, other):
        if isinstance(other, LogRational):
            return self.q == other.q and self.d == other.d
        if isinstance(other, LogExpr):
            return LogExpr.of(self) == other
        if isinstance(other, (int, Fraction)):
            return other == 0 and self.q == 1
        return NotImplemented

    def __hash__(self):
        return hash((self.q, self.d))

    def __float__(self) -> float:
        return _log_float(self.q) / (2 * self.d)

    def is_zero(self) -> bool:
        return self.q == 1

    def __str__(self) -> str:
        return render(self)

    def __repr__(self) -> str:
        return f"LogRational({self.q}, {self.d})"

    def to_json(self) -> dict:
        return {"q": str(self.q), "d": self.d}


@total_ordering
@dataclass(frozen=True)
class LogExpr:
    """(1/(2d)) log q + c."""

    log: LogRational
    c: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "c", as_fraction(self.c))

    @classmethod
    def of(cls, x) -> "LogExpr":
        if isinstance(x, LogExpr):
            return x
        if isinstance(x, LogRational):
            return cls(x, Fraction(0))
        return cls(LogRational.zero(), as_fraction(x))

    def __add__(self, other):
        if isinstance(other, (LogExpr, LogRational, int, Fraction)):
            o = LogExpr.of(other)
            return LogExpr(self.log + o.log, self.c + o.c)
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return LogExpr(-self.log, -self.c)

    def __sub__(self, other):
        if isinstance(other, (LogExpr, LogRational, int, Fraction)):
            return self + (-LogExpr.of(other))
        return NotImplemented

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, r) -> "LogExpr":
        r = as_fraction(r)
        return LogExpr(self.log.scale(r), self.c * r)

    def __mul__(self, r):
        if isinstance(r, (int, Fraction)):
            return self.scale(r)
        return NotImplemented

    __rmul__ = __mul__

    def __float__(self) -> float:
        return float(self.log) + float(self.c)

    def sign(self) -> int:
        s_log = self.log.sign()
        s_c = (self.c > 0) - (self.c < 0)
        if s_log == 0 or s_c == 0 or s_log == s_c:
            return s_log or s_c
        v = float(self)
        if abs(v) > _FLOAT_GUARD * (1.0 + abs(float(self.log)) + abs(float(self.c))):
            return 1 if v > 0 else -1
        return _certified_sign(self)

    def __eq__(self, other):
        if isinstance(other, (LogExpr, LogRational, int, Fraction)):
            o = LogExpr.of(other)
            return self.log == o.log and self.c == o.c
        return NotImplemented

    def __hash__(self):
        if self.c == 0:
            return hash(self.log)
        return hash((self.log, self.c))

    def __lt__(self, other):
        if isinstance(other, (LogExpr, LogRational, int, Fraction)):
            return (self - other).sign() < 0
        return NotImplemented

    def is_exact_log(self) -> bool:
        return self.c == 0

    def __str__(self) -> str:
        return render(self)

    def __repr__(self) -> str:
        return f"LogExpr({self.log!r}, {self.c})"


def _certified_sign(x: LogExpr) -> int:
    q, d, c = x.log.q, x.log.d, x.c
    prec = 80
    while True:
        with iv.workprec(prec):
            val = (iv.log(iv.mpf(q.numerator)) - iv.log(iv.mpf(q.denominator))) / (2 * d)
            val = val + iv.mpf(c.numerator) / iv.mpf(c.denominator)
            if val.a > 0:
                return 1
            if val.b < 0:
                return -1
        prec *= 2
        if prec > 1 << 16:
            raise ArithmeticError("sign undecided at maximal precision")


def to_expr(x) -> LogExpr:
    return LogExpr.of(x)


def harmonic_tail(r: int) -> Fraction:
    """Sum of 1/j for 2 <= j <= r."""
    return sum((Fraction(1, j) for j in range(2, r + 1)), Fraction(0))


def _fmt_frac(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _perfect_power(q: Fraction) -> int:
    """Largest k with q an exact k-th power."""
    best = 1
    bits = max(q.numerator.bit_length(), q.denominator.bit_length())
    for k in range(2, min(bits, 64) + 1):
        if _exact_root(q, k) is not None:
            best = k
    return best


def render(x) -> str:
    """Human readable exact form, e.g. ``-1/4*log(3) + 5/12``."""
    e = LogExpr.of(x)
    parts = []
    lg = e.log
    if not lg.is_zero():
        coef = Fraction(1, 2 * lg.d)
        q = lg.q
        if q < 1:
            coef, q = -coef, 1 / q
        k = _perfect_power(q)
        if k > 1:
            q = _exact_root(q, k)
            coef *= k
        arg = _fmt_frac(q)
        if coef == 1:
            parts.append(f"log({arg})")
        elif coef == -1:
            parts.append(f"-log({arg})")
        else:
            parts.append(f"{_fmt_frac(coef)}*log({arg})")
    if e.c != 0 or not parts:
        if parts and e.c > 0:
            parts.append(f"+ {_fmt_frac(e.c)}")
        elif parts:
            parts.append(f"- {_fmt_frac(-e.c)}")
        else:
            parts.append(_fmt_frac(e.c))
    return " ".join(parts)


@dataclass(frozen=True)
class Enclosure:
    """Closed interval [lo, hi] with exact endpoints; degenerate when exact."""

    lo: LogExpr
    hi: LogExpr

    def __post_init__(self):
        object.__setattr__(self, "lo", LogExpr.of(self.lo))
        object.__setattr__(self, "hi", LogExpr.of(self.hi))

    @classmethod
    def exact(cls, x) -> "Enclosure":
        e = LogExpr.of(x)
        return cls(e, e)

    @property
    def is_exact(self) -> bool:
        return self.lo == self.hi

    def __add__(self, other):
        o = other if isinstance(other, Enclosure) else Enclosure.exact(other)
        return Enclosure(self.lo + o.lo, self.hi + o.hi)

    __radd__ = __add__

    def __neg__(self):
        return Enclosure(-self.hi, -self.lo)

    def __sub__(self, other):
        o = other if isinstance(other, Enclosure) else Enclosure.exact(other)
        return self + (-o)

    def __float__(self) -> float:
        return (float(self.lo) + float(self.hi)) / 2

    def __str__(self) -> str:
        if self.is_exact:
            return render(self.lo)
        return f"[{render(self.lo)}, {render(self.hi)}]"


def as_enclosure(x) -> Enclosure:
    return x if isinstance(x, Enclosure) else Enclosure.exact(x)
