"""Exact linear algebra over Q and Z.

Matrices are lists of rows. Entries are ``int`` or ``fractions.Fraction``.
Row convention throughout: a sublattice is given by the rows of an integer
matrix, expressed in the coordinates of the ambient basis.
"""
from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import Iterable, Sequence

Number = int | Fraction
Matrix = list[list[Number]]


class LinalgError(ValueError):
    pass


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, dict):
        return Fraction(int(x["n"]), int(x.get("d", 1)))
    raise TypeError(f"cannot convert {x!r} to an exact rational")


def normalize(x: Number) -> Number:
    """Collapse integral fractions to ``int``."""
    if isinstance(x, Fraction) and x.denominator == 1:
        return x.numerator
    return x


def matrix(rows: Iterable[Iterable]) -> Matrix:
    return [[normalize(as_fraction(x)) for x in row] for row in rows]


def is_integral(A: Sequence[Sequence[Number]]) -> bool:
    return all(isinstance(x, int) or x.denominator == 1 for row in A for x in row)


def to_int_matrix(A: Sequence[Sequence[Number]]) -> list[list[int]]:
    if not is_integral(A):
        raise LinalgError("requires integral matrix")
    return [[int(x) for x in row] for row in A]


def identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def zeros(m: int, n: int) -> list[list[int]]:
    return [[0] * n for _ in range(m)]


def transpose(A: Sequence[Sequence[Number]]) -> Matrix:
    return [list(col) for col in zip(*A)] if A else []


def mat_mul(A: Sequence[Sequence[Number]], B: Sequence[Sequence[Number]]) -> Matrix:
    Bt = list(zip(*B))
    return [[normalize(sum(a * b for a, b in zip(row, col))) for col in Bt] for row in A]


def mat_vec(A: Sequence[Sequence[Number]], v: Sequence[Number]) -> list[Number]:
    return [normalize(sum(a * b for a, b in zip(row, v))) for row in A]


def vec_mat(v: Sequence[Number], A: Sequence[Sequence[Number]]) -> list[Number]:
    n = len(A[0]) if A else 0
    out = [0] * n
    for c, row in zip(v, A):
        if c:
            for j, a in enumerate(row):
                out[j] += c * a
    return [normalize(x) for x in out]


def bilinear(u: Sequence[Number], G: Sequence[Sequence[Number]], v: Sequence[Number]) -> Number:
    total = 0
    for i, ui in enumerate(u):
        if ui:
            row = G[i]
            total += ui * sum(g * vj for g, vj in zip(row, v) if vj)
    return normalize(total)


def congruence(B: Sequence[Sequence[Number]], G: Sequence[Sequence[Number]]) -> Matrix:
    """Return B G B^T."""
    BG = mat_mul(B, G)
    return mat_mul(BG, transpose(B))


def kron(A: Sequence[Sequence[Number]], B: Sequence[Sequence[Number]]) -> Matrix:
    return [
        [normalize(a * b) for a in rowA for b in rowB]
        for rowA in A
        for rowB in B
    ]


def scalar_mul(c: Number, A: Sequence[Sequence[Number]]) -> Matrix:
    return [[normalize(c * x) for x in row] for row in A]


def is_symmetric(A: Sequence[Sequence[Number]]) -> bool:
    n = len(A)
    return all(len(row) == n for row in A) and all(
        A[i][j] == A[j][i] for i in range(n) for j in range(i + 1, n)
    )


def trace(A: Sequence[Sequence[Number]]) -> Number:
    return normalize(sum(A[i][i] for i in range(len(A))))


def denominator_lcm(A: Iterable[Iterable[Number]]) -> int:
    out = 1
    for row in A:
        for x in row:
            if isinstance(x, Fraction):
                out = lcm(out, x.denominator)
    return out


def clear_denominators(rows: Sequence[Sequence[Number]]) -> list[list[int]]:
    """Scale each row by the lcm of its denominators."""
    out = []
    for row in rows:
        m = denominator_lcm([row])
        out.append([int(x * m) for x in row])
    return out


def content(v: Iterable[Number]) -> Fraction:
    """Rational content: gcd of numerators over lcm of denominators."""
    vals = [as_fraction(x) for x in v if x]
    if not vals:
        return Fraction(0)
    num = reduce(gcd, (x.numerator for x in vals))
    den = reduce(lcm, (x.denominator for x in vals))
    return Fraction(abs(num), den)


def primitive(v: Sequence[Number]) -> list[int]:
    c = content(v)
    if c == 0:
        raise LinalgError("zero vector has no primitive part")
    return [int(as_fraction(x) / c) for x in v]


def sign_normalize(v: Sequence[int]) -> tuple[int, ...]:
    """Make the first nonzero entry positive."""
    for x in v:
        if x:
            return tuple(v) if x > 0 else tuple(-y for y in v)
    return tuple(v)


def det(A: Sequence[Sequence[Number]]) -> Number:
    n = len(A)
    if n == 0:
        return 1
    scales = []
    M = []
    for row in A:
        m = denominator_lcm([row])
        scales.append(m)
        M.append([int(x * m) for x in row])
    d = _bareiss_det(M)
    denom = 1
    for s in scales:
        denom *= s
    return normalize(Fraction(d, denom))


def _bareiss_det(M: list[list[int]]) -> int:
    n = len(M)
    M = [row[:] for row in M]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k] != 0:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return 0
        pk = M[k][k]
        for i in range(k + 1, n):
            mik = M[i][k]
            rowi = M[i]
            rowk = M[k]
            for j in range(k + 1, n):
                rowi[j] = (rowi[j] * pk - mik * rowk[j]) // prev
        prev = pk
    return sign * M[n - 1][n - 1]


def rref(A: Sequence[Sequence[Number]]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form (nonzero rows only) and pivot columns."""
    M = [[as_fraction(x) for x in row] for row in A]
    if not M:
        return [], []
    m, n = len(M), len(M[0])
    pivots: list[int] = []
    r = 0
    for c in range(n):
        if r == m:
            break
        p = next((i for i in range(r, m) if M[i][c] != 0), None)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        pv = M[r][c]
        if pv != 1:
            M[r] = [x / pv for x in M[r]]
        rowr = M[r]
        for i in range(m):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [a - f * b for a, b in zip(M[i], rowr)]
        pivots.append(c)
        r += 1
    return M[:r], pivots


def rank(A: Sequence[Sequence[Number]]) -> int:
    if not A or not A[0]:
        return 0
    scaled = clear_denominators(A)
    return len(_int_echelon_rank(scaled))


def _int_echelon_rank(M: list[list[int]]) -> list[int]:
    """Fraction-free elimination; returns pivot columns."""
    M = [row[:] for row in M]
    m, n = len(M), len(M[0])
    pivots = []
    r = 0
    for c in range(n):
        if r == m:
            break
        p = next((i for i in range(r, m) if M[i][c] != 0), None)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        pv = M[r][c]
        rowr = M[r]
        for i in range(r + 1, m):
            f = M[i][c]
            if f:
                M[i] = [pv * a - f * b for a, b in zip(M[i], rowr)]
                g = reduce(gcd, M[i], 0)
                if g > 1:
                    M[i] = [a // g for a in M[i]]
        pivots.append(c)
        r += 1
    return pivots


def nullspace(A: Sequence[Sequence[Number]], n: int | None = None) -> list[list[Fraction]]:
    """Basis (as rows) of {x : A x = 0}."""
    if n is None:
        n = len(A[0])
    if not A:
        return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    R, pivots = rref(A)
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * n
        x[f] = Fraction(1)
        for row, p in zip(R, pivots):
            x[p] = -row[f]
        basis.append(x)
    return basis


def inverse(A: Sequence[Sequence[Number]]) -> Matrix:
    n = len(A)
    aug = [list(map(as_fraction, row)) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(A)]
    R, pivots = rref(aug)
    if pivots[:n] != list(range(n)) or len(R) < n:
        raise LinalgError("singular matrix")
    return [[normalize(x) for x in row[n:]] for row in R]


def solve_row(B: Sequence[Sequence[Number]], v: Sequence[Number]) -> list[Fraction] | None:
    """Find c with c B = v (B has independent rows), or None."""
    k = len(B)
    if k == 0:
        return [] if all(x == 0 for x in v) else None
    n = len(v)
    aug = [[as_fraction(B[i][j]) for i in range(k)] + [as_fraction(v[j])] for j in range(n)]
    R, pivots = rref(aug)
    if k in pivots:
        return None
    c = [Fraction(0)] * k
    for row, p in zip(R, pivots):
        c[p] = row[k]
    return c


def in_span(B: Sequence[Sequence[Number]], v: Sequence[Number]) -> bool:
    if all(x == 0 for x in v):
        return True
    if not B:
        return False
    return rank(list(B) + [list(v)]) == rank(B)


def row_basis(rows: Sequence[Sequence[Number]]) -> list[list[Fraction]]:
    """Reduced echelon basis of the row span."""
    if not rows:
        return []
    R, _ = rref(rows)
    return R


def intersect_spans(A: Sequence[Sequence[Number]], B: Sequence[Sequence[Number]], n: int) -> list[list[Fraction]]:
    """Reduced echelon basis of span(A) ∩ span(B)."""
    if not A or not B:
        return []
    # x in both iff x ⊥ (A^perp + B^perp)
    perp = nullspace(A, n) + nullspace(B, n)
    if not perp:
        return row_basis(identity(n))
    common = nullspace(perp, n)
    return row_basis(common) if common else []


def sum_spans(A: Sequence[Sequence[Number]], B: Sequence[Sequence[Number]]) -> list[list[Fraction]]:
    return row_basis(list(A) + list(B))


# ---------------------------------------------------------------- integers


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def hnf(M: Sequence[Sequence[Number]]) -> tuple[list[list[int]], list[list[int]]]:
    """Row-style Hermite normal form.

    Returns ``(H, U)`` with ``U`` unimodular and ``U M = H``. Pivots are
    positive and entries above a pivot lie in ``[0, pivot)``. Zero rows
    are kept at the bottom so ``H`` has the shape of ``M``.
    """
    A = to_int_matrix(M)
    m = len(A)
    n = len(A[0]) if m else 0
    U = identity(m)
    r = 0
    for c in range(n):
        if r == m:
            break
        for i in range(r + 1, m):
            b = A[i][c]
            if b == 0:
                continue
            a = A[r][c]
            if a == 0:
                A[r], A[i] = A[i], A[r]
                U[r], U[i] = U[i], U[r]
                continue
            g, x, y = xgcd(a, b)
            p, q = -b // g, a // g
            ra, rb = A[r], A[i]
            A[r] = [x * s + y * t for s, t in zip(ra, rb)]
            A[i] = [p * s + q * t for s, t in zip(ra, rb)]
            ua, ub = U[r], U[i]
            U[r] = [x * s + y * t for s, t in zip(ua, ub)]
            U[i] = [p * s + q * t for s, t in zip(ua, ub)]
        pv = A[r][c]
        if pv == 0:
            continue
        if pv < 0:
            A[r] = [-x for x in A[r]]
            U[r] = [-x for x in U[r]]
            pv = -pv
        for i in range(r):
            f = A[i][c] // pv
            if f:
                A[i] = [s - f * t for s, t in zip(A[i], A[r])]
                U[i] = [s - f * t for s, t in zip(U[i], U[r])]
        r += 1
    return A, U


def hnf_basis(M: Sequence[Sequence[Number]]) -> list[list[int]]:
    H, _ = hnf(M)
    return [row for row in H if any(row)]


def _column_reduction(A: list[list[int]]) -> tuple[int, list[list[int]], list[list[int]]]:
    """Return (r, V, W) with V unimodular, A V = [H | 0] (H of rank r), W = V^-1."""
    H, U = hnf(transpose(A))
    r = sum(1 for row in H if any(row))
    V = transpose(U)
    W = [[int(x) for x in row] for row in inverse(V)]
    return r, V, W


def saturate(generators: Sequence[Sequence[Number]], n: int | None = None) -> list[list[int]]:
    """Z-basis (HNF) of span_Q(generators) ∩ Z^n."""
    rows = [list(g) for g in generators if any(x != 0 for x in g)]
    if not rows:
        raise LinalgError("empty saturation")
    if n is not None and any(len(g) != n for g in rows):
        raise LinalgError("generator length mismatch")
    A = clear_denominators(rows)
    r, _, W = _column_reduction(A)
    return hnf_basis(W[:r])


def integer_kernel(A: Sequence[Sequence[Number]], n: int | None = None) -> list[list[int]]:
    """Saturated Z-basis (HNF) of {x in Z^n : A x = 0}."""
    rows = [list(a) for a in A if any(x != 0 for x in a)]
    if n is None:
        n = len(A[0])
    if not rows:
        return identity(n)
    M = clear_denominators(rows)
    r, V, _ = _column_reduction(M)
    ker = [[V[i][j] for i in range(n)] for j in range(r, n)]
    return hnf_basis(ker) if ker else []


def complete_basis(S: Sequence[Sequence[int]], n: int) -> list[list[int]]:
    """Rows C such that [S; C] is a basis of Z^n. S must be saturated."""
    if not S:
        return identity(n)
    r, _, W = _column_reduction([list(row) for row in S])
    if r != len(S):
        raise LinalgError("rows are dependent")
    C = W[r:]
    full = [list(row) for row in S] + C
    if abs(det(full)) != 1:
        raise LinalgError("basis is not saturated")
    return C


def is_saturated(S: Sequence[Sequence[int]]) -> bool:
    """True iff the row lattice of S is primitive in Z^n."""
    if not S:
        return True
    r, V, _ = _column_reduction([list(row) for row in S])
    if r != len(S):
        return False
    AV = mat_mul(S, V)
    return abs(det([row[:r] for row in AV])) == 1
