"""Euclidean lattices given by exact Gram matrices, and their constructions."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from . import linalg as la
from .eigen import EigenInterval, max_product_eigenvalue_interval
from .logs import Enclosure, LogRational

GramRows = tuple[tuple[int | Fraction, ...], ...]


class LatticeError(ValueError):
    pass


def _freeze(M) -> GramRows:
    return tuple(tuple(la.normalize(la.as_fraction(x)) for x in row) for row in M)


@dataclass(frozen=True)
class Lattice:
    """A Z-module Z^r with the quadratic form x G x^T."""

    gram: GramRows
    label: str = ""
    _cache: dict = field(default_factory=dict, compare=False, hash=False, repr=False)

    def __post_init__(self):
        g = _freeze(self.gram)
        object.__setattr__(self, "gram", g)
        n = len(g)
        if any(len(row) != n for row in g):
            raise LatticeError("gram matrix must be square")
        if not la.is_symmetric(g):
            raise LatticeError("gram matrix must be symmetric")
        for k in range(1, n + 1):
            if la.det([row[:k] for row in g[:k]]) <= 0:
                raise LatticeError("gram matrix must be positive definite")

    @property
    def rank(self) -> int:
        return len(self.gram)

    @property
    def det(self) -> Fraction:
        if "det" not in self._cache:
            self._cache["det"] = la.as_fraction(la.det(self.gram))
        return self._cache["det"]

    def norm_sq(self, v: Sequence) -> Fraction:
        return la.as_fraction(la.bilinear(v, self.gram, v))

    def inner(self, u: Sequence, v: Sequence) -> Fraction:
        return la.as_fraction(la.bilinear(u, self.gram, v))

    def gram_of(self, rows: Sequence[Sequence]) -> list[list]:
        return la.congruence(rows, self.gram)

    def is_integral(self) -> bool:
        return la.is_integral(self.gram)

    def __repr__(self) -> str:
        return f"Lattice(label={self.label!r}, gram={[list(r) for r in self.gram]})"


def standard(n: int, label: str | None = None) -> Lattice:
    return Lattice(la.identity(n), label or f"Z^{n}")


def root_lattice_A(n: int) -> Lattice:
    g = [[2 if i == j else (-1 if abs(i - j) == 1 else 0) for j in range(n)] for i in range(n)]
    return Lattice(g, f"A_{n}")


def A_embedding(n: int) -> list[list[int]]:
    """Rows e_k - e_{k+1} of Z^(n+1)."""
    return [[(1 if j == k else (-1 if j == k + 1 else 0)) for j in range(n + 1)] for k in range(n)]


def ndeg(L: Lattice) -> LogRational:
    """Normalised Arakelov degree: -1/2 log det(gram)."""
    if L.rank == 0:
        return LogRational.zero()
    return LogRational(1 / L.det, 1)


def slope(L: Lattice) -> LogRational:
    if L.rank == 0:
        raise LatticeError("slope of zero bundle")
    return ndeg(L).scale(Fraction(1, L.rank))


def induced(L: Lattice, basis: Sequence[Sequence], label: str = "") -> Lattice:
    """Sublattice spanned by the rows of ``basis`` with the restricted metric."""
    rows = [list(b) for b in basis]
    if not rows:
        raise LatticeError("empty sublattice")
    if la.rank(rows) != len(rows):
        raise LatticeError("sublattice basis is not independent")
    return Lattice(L.gram_of(rows), label or f"{L.label}|sub")


def dual(L: Lattice) -> Lattice:
    return Lattice(la.inverse(L.gram), f"{L.label}^v" if L.label else "")


def orthogonal_complement(L: Lattice, S: Sequence[Sequence]) -> tuple[Lattice, list[list[int]]]:
    """The saturated sublattice of L^v killing span(S).

    Returns the lattice and its basis in dual coordinates.
    """
    K = la.integer_kernel(S, L.rank) if S else la.identity(L.rank)
    if not K:
        raise LatticeError("orthogonal complement is zero")
    return Lattice(la.congruence(K, la.inverse(L.gram)), f"{L.label}^perp"), K


@dataclass(frozen=True)
class Quotient:
    lattice: Lattice
    sub: tuple[tuple[int, ...], ...]
    complement: tuple[tuple[int, ...], ...]

    def lift(self, rows: Sequence[Sequence[int]]) -> list[list[int]]:
        """Sublattice of the ambient lattice containing ``sub`` with the given image."""
        lifted = [la.vec_mat(r, self.complement) for r in rows]
        return la.hnf_basis([list(s) for s in self.sub] + lifted)


def quotient(L: Lattice, S: Sequence[Sequence[int]]) -> Quotient:
    """L / span(S) with the orthogonal-projection metric. S must be saturated."""
    S = [list(map(int, row)) for row in S]
    n = L.rank
    if not S:
        return Quotient(L, (), tuple(tuple(r) for r in la.identity(n)))
    if not la.is_saturated(S):
        raise LatticeError("quotient has torsion")
    C = la.complete_basis(S, n)
    if not C:
        raise LatticeError("quotient is zero")
    G = L.gram
    GS = la.congruence(S, G)
    GSinv = la.inverse(GS)
    CGS = la.mat_mul(la.mat_mul(C, G), la.transpose(S))
    GC = la.congruence(C, G)
    corr = la.mat_mul(la.mat_mul(CGS, GSinv), la.transpose(CGS))
    Q = [[la.normalize(GC[i][j] - corr[i][j]) for j in range(len(C))] for i in range(len(C))]
    return Quotient(Lattice(Q, f"{L.label}/sub"), tuple(map(tuple, S)), tuple(map(tuple, C)))


def tensor(L1: Lattice, L2: Lattice) -> Lattice:
    """Tensor product; basis e_i (x) f_j has index i * rank(L2) + j."""
    return Lattice(la.kron(L1.gram, L2.gram), f"({L1.label}(x){L2.label})")


def tensor_many(lattices: Sequence[Lattice]) -> Lattice:
    out = lattices[0]
    for L in lattices[1:]:
        out = tensor(out, L)
    return out


def direct_sum(L1: Lattice, L2: Lattice) -> Lattice:
    n1, n2 = L1.rank, L2.rank
    g = [list(r) + [0] * n2 for r in L1.gram] + [[0] * n1 + list(r) for r in L2.gram]
    return Lattice(g, f"({L1.label}+{L2.label})")


def exterior(L: Lattice, k: int) -> Lattice:
    """k-th exterior power; basis e_I for increasing index tuples I."""
    n = L.rank
    if not 0 <= k <= n:
        raise LatticeError("exterior power degree out of range")
    if k == 0:
        return Lattice([[1]], "Lambda^0")
    idx = list(combinations(range(n), k))
    G = L.gram
    g = [[la.det([[G[i][j] for j in J] for i in I]) for J in idx] for I in idx]
    return Lattice(g, f"Lambda^{k}{L.label}")


def det_line(L: Lattice) -> Lattice:
    return exterior(L, L.rank)


def wedge_coordinates(rows: Sequence[Sequence]) -> list:
    """Coordinates of v_1 ^ ... ^ v_k in the basis e_I (maximal minors)."""
    k = len(rows)
    n = len(rows[0])
    return [la.det([[row[j] for j in I] for row in rows]) for I in combinations(range(n), k)]


@dataclass(frozen=True)
class LinearMap:
    """f : source -> target; row i of ``matrix`` is f(e_i) in target coordinates."""

    source: Lattice
    target: Lattice
    matrix: tuple[tuple[int | Fraction, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "matrix", _freeze(self.matrix))
        if len(self.matrix) != self.source.rank or any(len(r) != self.target.rank for r in self.matrix):
            raise LatticeError("matrix shape does not match the lattices")


@dataclass
class Height:
    op_norm_sq: EigenInterval
    content: Fraction
    value: Enclosure


def height(f: LinearMap, eps: Fraction = Fraction(1, 1 << 30)) -> Height:
    """log of the operator norm minus log of the content of the matrix."""
    A = [list(r) for r in f.matrix]
    c = la.content(x for row in A for x in row)
    if c == 0:
        raise LatticeError("height of zero map")
    ev = max_product_eigenvalue_interval(la.inverse(f.source.gram), la.congruence(A, f.target.gram), eps)
    while ev.lower == 0 and not ev.exact:
        ev.refine(ev.width / 4)
    shift = -LogRational.log(c)
    lo = LogRational.half_log(ev.lower) + shift
    hi = LogRational.half_log(ev.upper) + shift
    return Height(ev, c, Enclosure(lo, hi))


def image_rank(f: LinearMap) -> int:
    return la.rank(f.matrix)
