"""Tensors in E (x) F: ranks, norms, line degrees and rank profiles.

An element of E (x) F is stored as its coefficient matrix M (rank E x rank F):
s = sum M_ij e_i (x) f_j. Flattened coordinates use the index i * rank F + j,
matching :func:`slopelab.lattice.tensor`.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import linalg as la
from .eigen import EigenInterval, max_product_eigenvalue_interval
from .hn import hn_data
from .lattice import Lattice, LatticeError, induced, ndeg, slope, tensor
from .logs import Enclosure, LogRational, harmonic_tail
from .minima import successive_minima
from .pencils import combine, dimension_count_bound, generic_rank, matrix_rank, pencil_locus
from .reports import CheckReport

_EPS_FIRST = Fraction(1, 1 << 20)
_EPS_FINAL = Fraction(1, 1 << 40)


def _matrix(rows) -> tuple[tuple, ...]:
    return tuple(tuple(la.normalize(la.as_fraction(x)) for x in r) for r in rows)


@dataclass(frozen=True)
class TensorElement:
    left: Lattice
    right: Lattice
    coeffs: tuple[tuple, ...]

    def __post_init__(self):
        M = _matrix(self.coeffs)
        object.__setattr__(self, "coeffs", M)
        if len(M) != self.left.rank or any(len(r) != self.right.rank for r in M):
            raise LatticeError("coefficient matrix does not match the factors")

    def flat(self) -> list:
        return [x for r in self.coeffs for x in r]

    def is_zero(self) -> bool:
        return not any(self.flat())

    def primitive(self) -> "TensorElement":
        c = la.content(self.flat())
        if c == 0:
            raise LatticeError("zero tensor")
        return TensorElement(self.left, self.right, [[x / c for x in r] for r in self.coeffs])

    def image_left(self) -> list[list]:
        """Span in E of the image of s viewed as a map F^v -> E (columns of M)."""
        return la.row_basis(la.transpose(self.coeffs))

    def image_right(self) -> list[list]:
        return la.row_basis(self.coeffs)


@dataclass(frozen=True)
class TensorSubspace:
    left: Lattice
    right: Lattice
    generators: tuple[tuple[tuple, ...], ...]

    def __post_init__(self):
        gens = tuple(_matrix(g) for g in self.generators)
        object.__setattr__(self, "generators", gens)
        n, m = self.left.rank, self.right.rank
        for g in gens:
            if len(g) != n or any(len(r) != m for r in g):
                raise LatticeError("generator does not match the factors")
        if not gens or la.rank([[x for r in g for x in r] for g in gens]) == 0:
            raise LatticeError("empty tensor subspace")

    @property
    def shape(self) -> tuple[int, int]:
        return self.left.rank, self.right.rank

    def basis(self) -> list[list[int]]:
        """Saturated Z-basis of V ∩ (E (x) F), flattened."""
        return la.saturate([[x for r in g for x in r] for g in self.generators])

    def basis_matrices(self) -> list[list[list[int]]]:
        n, m = self.shape
        return [[row[i * m:(i + 1) * m] for i in range(n)] for row in self.basis()]

    @property
    def dim(self) -> int:
        return len(self.basis())

    def lattice(self) -> Lattice:
        return induced(tensor(self.left, self.right), self.basis(), "V")

    def ambient(self) -> Lattice:
        return tensor(self.left, self.right)

    def element(self, coeffs: Sequence) -> TensorElement:
        mats = self.basis_matrices()
        return TensorElement(self.left, self.right, combine(coeffs, mats))


def tensorial_rank(s: TensorElement) -> int:
    return matrix_rank(s.coeffs)


def hs_norm_sq(s: TensorElement) -> Fraction:
    """tr(M^T G_E M G_F)."""
    M = [list(r) for r in s.coeffs]
    A = la.mat_mul(la.mat_mul(la.transpose(M), s.left.gram), la.mat_mul(M, s.right.gram))
    return la.as_fraction(la.trace(A))


def eps_norm_sq(s: TensorElement, eps: Fraction = _EPS_FIRST) -> EigenInterval:
    """Squared operator norm: largest eigenvalue of G_E M G_F M^T."""
    M = [list(r) for r in s.coeffs]
    return max_product_eigenvalue_interval(s.left.gram, la.congruence(M, s.right.gram), eps)


def _neg_half_log_interval(ev: EigenInterval) -> Enclosure:
    while ev.lower == 0 and not ev.exact:
        ev.refine(ev.width / 4)
    return Enclosure(LogRational.half_log(1 / ev.upper), LogRational.half_log(1 / ev.lower))


def line_degree(s: TensorElement, metric: str = "hermitian", eps: Fraction = _EPS_FIRST) -> Enclosure:
    """Degree of the saturated line through s for the chosen norm."""
    if s.is_zero():
        raise LatticeError("zero tensor")
    p = s.primitive()
    if metric in ("hermitian", "herm"):
        return Enclosure.exact(LogRational.half_log(1 / hs_norm_sq(p)))
    if metric in ("epsilon", "eps"):
        return _neg_half_log_interval(eps_norm_sq(p, eps))
    raise ValueError(f"unknown metric {metric!r}")


def _mu_max(L: Lattice) -> LogRational:
    return hn_data(L).mu_max


def check_majoration(s: TensorElement, suite: str = "tensor", case_id: str = "majoration", seed: int = 0) -> list[CheckReport]:
    """Both bounds for the hermitian line degree of s.

    ndeg(M) <= mu(E1) + mu(F1) - log(rho)/2 with E1, F1 the saturated images,
    and the weaker form with mu_max(E) + mu_max(F).
    """
    rho = tensorial_rank(s)
    deg = line_degree(s, "hermitian")
    E1 = induced(s.left, la.saturate(s.image_left()))
    F1 = induced(s.right, la.saturate(s.image_right()))
    corr = -LogRational.half_log(rho)
    r1 = slope(E1) + slope(F1) + corr
    r2 = _mu_max(s.left) + _mu_max(s.right) + corr
    w = f"rho={rho}"
    return [
        CheckReport.compare(suite, f"{case_id}:images", seed, deg, r1, w),
        CheckReport.compare(suite, f"{case_id}:mumax", seed, deg, r2, w),
    ]


def check_eps_first_degree(s: TensorElement, suite: str = "tensor", case_id: str = "eps_first_degree", seed: int = 0) -> CheckReport:
    """epsilon line degree <= mu_max(E) + mu_max(F), refining the norm when undecided."""
    rhs = _mu_max(s.left) + _mu_max(s.right)
    p = s.primitive()
    ev = eps_norm_sq(p, _EPS_FIRST)
    rep = CheckReport.compare(suite, case_id, seed, _neg_half_log_interval(ev), rhs, f"rho={tensorial_rank(s)}", strict=not ev.exact)
    if rep.status == "INCONCLUSIVE":
        ev.refine(_EPS_FINAL)
        rep = CheckReport.compare(suite, case_id, seed, _neg_half_log_interval(ev), rhs, f"rho={tensorial_rank(s)}", strict=not ev.exact)
    return rep


def check_eps_vs_hermitian(s: TensorElement, suite: str = "tensor", case_id: str = "eps_vs_herm", seed: int = 0) -> CheckReport:
    """Hermitian line degree <= epsilon line degree (operator norm <= HS norm)."""
    herm = line_degree(s, "hermitian")
    p = s.primitive()
    ev = eps_norm_sq(p, _EPS_FIRST)
    rep = CheckReport.compare(suite, case_id, seed, herm, _neg_half_log_interval(ev), strict=False)
    if rep.status == "INCONCLUSIVE":
        ev.refine(_EPS_FINAL)
        rep = CheckReport.compare(suite, case_id, seed, herm, _neg_half_log_interval(ev), strict=False)
    return rep


# ------------------------------------------------------------ rank profile


@dataclass
class RankProfile:
    lo: list[int]
    hi: list[int]
    witnesses: dict = field(default_factory=dict)

    @property
    def certified(self) -> list[bool]:
        return [a == b for a, b in zip(self.lo, self.hi)]

    @property
    def exact(self) -> bool:
        return all(self.certified)


def _sample_elements(mats, rng: random.Random, count: int):
    r = len(mats)
    yield from ([int(i == j) for j in range(r)] for i in range(r))
    for i in range(r):
        for j in range(i + 1, r):
            for a in (1, -1, 2):
                c = [0] * r
                c[i], c[j] = 1, a
                yield c
    for _ in range(count):
        yield [rng.randint(-3, 3) for _ in range(r)]


def rho_profile(V: TensorSubspace, seed: int = 0, slices: int = 12) -> RankProfile:
    """Bounds lo <= rho_i <= hi for the tensorial rank profile of V.

    rho_i = min { k : dim(V ∩ D_k) >= i }, D_k the matrices of rank <= k,
    over the algebraic closure.
    """
    mats = V.basis_matrices()
    r = len(mats)
    n, m = V.shape
    top = min(n, m)
    lo = [1] * r
    hi = [top] * r
    wit: dict = {}
    rng = random.Random(seed)

    g, g_cert = generic_rank(mats)
    # dim(V ∩ D_k) = r exactly when k >= generic rank
    hi = [min(h, g) for h in hi]
    if g_cert:
        lo[r - 1] = max(lo[r - 1], g)
    # dimension count: every component of V ∩ D_k has dim >= r - codim
    for k in range(1, top + 1):
        d = dimension_count_bound(r, n, m, k)
        for i in range(d):
            hi[i] = min(hi[i], k)
    # rational witnesses for rho_1
    best = None
    for c in _sample_elements(mats, rng, 40):
        if not any(c):
            continue
        rk = matrix_rank(combine(c, mats))
        if rk and (best is None or rk < best[0]):
            best = (rk, c)
    if best is not None and best[0] <= hi[0]:
        hi[0] = best[0]
        wit["rho1"] = best[1]
    if r == 1:
        lo = hi = [matrix_rank(mats[0])]
    elif r == 2:
        M1, M2 = mats
        dims = {}
        for k in range(0, top + 1):
            dims[k] = 0 if k == 0 else pencil_locus(M1, M2, k).dim
        for i in (1, 2):
            val = min(k for k in range(top + 1) if dims[k] >= i)
            lo[i - 1] = hi[i - 1] = val
        loc = pencil_locus(M1, M2, lo[0])
        if loc.rational_points:
            a, b = loc.rational_points[0]
            wit["rho1"] = [a, b]
        else:
            wit["rho1_form"] = [str(c) for c in loc.gcd]
    else:
        # a 2-plane W with W ∩ D_k = {0} gives dim(V ∩ D_k) <= r - 2
        for _ in range(slices):
            c1 = [rng.randint(-3, 3) for _ in range(r)]
            c2 = [rng.randint(-3, 3) for _ in range(r)]
            if la.rank([c1, c2]) < 2:
                continue
            W1, W2 = combine(c1, mats), combine(c2, mats)
            for k in range(1, top):
                if lo[r - 2] > k:
                    continue
                if pencil_locus(W1, W2, k).dim == 0:
                    lo[r - 2] = max(lo[r - 2], k + 1)
                else:
                    break
    for i in range(1, r):
        lo[i] = max(lo[i], lo[i - 1])
    for i in range(r - 2, -1, -1):
        hi[i] = min(hi[i], hi[i + 1])
    lo = [min(a, b) for a, b in zip(lo, hi)]
    return RankProfile(lo, hi, wit)


def check_majo_de_mu(V: TensorSubspace, seed: int = 0, suite: str = "tensor", case_id: str = "majo_de_mu") -> CheckReport:
    """mu(V) <= mu_max(E) + mu_max(F) + ell(r)/2 - (1/2r) sum log rho_i, with certified lower bounds for rho_i."""
    prof = rho_profile(V, seed)
    r = V.dim
    corr = LogRational.zero()
    for x in prof.lo:
        corr = corr + LogRational.half_log(x)
    rhs = _mu_max(V.left) + _mu_max(V.right) + harmonic_tail(r) / 2 - corr.scale(Fraction(1, r))
    return CheckReport.compare(suite, case_id, seed, slope(V.lattice()), rhs, f"rho_lo={prof.lo}")


@dataclass
class SiegelLines:
    vectors: list[tuple[int, ...]]
    degrees: list[LogRational]
    total: LogRational
    ndeg: LogRational
    hadamard: LogRational  # (1/2) log(prod |v_i|^2 / det gram(v))
    index: int
    identity_holds: bool
    zhang_left: bool
    zhang_right_heuristic: bool
    ranks: list[int] | None = None


def siegel_lines(V: TensorSubspace | Lattice) -> SiegelLines:
    """Lines through successive-minima vectors, with the exact degree identity

    ndeg(V) = sum ndeg(L_i) + (1/2) log(prod |v_i|^2 / det gram) + log [V : span v].
    """
    L = V.lattice() if isinstance(V, TensorSubspace) else V
    mins = successive_minima(L)
    vecs = mins.vectors
    degs = [LogRational.half_log(1 / nv) for nv in mins.norms_sq]
    total = LogRational.zero()
    for d in degs:
        total = total + d
    gram = la.as_fraction(la.det(L.gram_of(vecs)))
    prod = Fraction(1)
    for nv in mins.norms_sq:
        prod *= nv
    index = abs(la.as_fraction(la.det(vecs)))
    had = LogRational.half_log(prod / gram)
    nd = ndeg(L)
    identity = nd == total + had + LogRational.log(index)
    r = L.rank
    zr = nd - total <= harmonic_tail(r) * r / 2
    ranks = None
    if isinstance(V, TensorSubspace):
        basis = V.basis()
        n, m = V.shape
        ranks = []
        for v in vecs:
            flat = la.vec_mat(list(v), basis)
            ranks.append(matrix_rank([flat[i * m:(i + 1) * m] for i in range(n)]))
    return SiegelLines(vecs, degs, total, nd, had, int(index), identity, nd >= total, zr, ranks)
