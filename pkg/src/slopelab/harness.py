"""Randomised verification suites and CSV reporting.

Every trial draws from its own generator, seeded by splitmix64 of the run
seed mixed with the case id, so results do not depend on scheduling and
rows are sorted by (suite, case_id) before writing.
"""
from __future__ import annotations

import csv
import json
import itertools
import random
import zlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Callable, Sequence

from . import checks
from . import filtrations as fl
from . import geometric as git
from . import linalg as la
from .formats import matrix_json
from .automorphisms import automorphism_group, commutant_dimension
from .hn import EXACT_MODE, hn_data, slope_inequality_check
from .iq import EISENSTEIN, GAUSS, IQVector, best_line_degree, check_An_alpha_bound, random_vector
from .lattice import A_embedding, Lattice, LinearMap, dual, ndeg, root_lattice_A, slope, standard, tensor, tensor_many
from .logs import Enclosure, LogRational, harmonic_tail
from .minima import first_degree_Z, varsigma_estimate
from .reports import CSV_COLUMNS, EXACT, FAIL, INCONCLUSIVE, LOWER, PASS, CheckReport
from .tensor import TensorElement, TensorSubspace, check_majoration, eps_norm_sq, hs_norm_sq

MASK64 = (1 << 64) - 1


def splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & MASK64
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def trial_seed(seed: int, case_id: str) -> int:
    return splitmix64((seed & MASK64) ^ zlib.crc32(case_id.encode()))


@dataclass(frozen=True)
class TrialConfig:
    seed: int = 0
    rank_min: int = 1
    rank_max: int = 3
    entry_bound: int = 5
    trials: int = 20
    suite: str = "oracles"

    def __post_init__(self):
        if self.entry_bound < 1:
            raise ValueError("entry bound must be at least 1")
        if not 1 <= self.rank_min <= self.rank_max:
            raise ValueError("need 1 <= rank_min <= rank_max")


# ------------------------------------------------------------ random objects


def random_lattice(rng: random.Random, n: int, bound: int) -> Lattice:
    """gram = B B^T for a uniform full-rank integer B."""
    while True:
        B = [[rng.randint(-bound, bound) for _ in range(n)] for _ in range(n)]
        if la.det(B) != 0:
            return Lattice(la.mat_mul(B, la.transpose(B)))


def random_saturated(rng: random.Random, n: int, k: int, bound: int = 3) -> list[list[int]]:
    while True:
        gens = [[rng.randint(-bound, bound) for _ in range(n)] for _ in range(k)]
        if la.rank(gens) == k:
            return la.saturate(gens, n)


def random_matrix(rng: random.Random, n: int, m: int, bound: int = 3) -> list[list[int]]:
    while True:
        M = [[rng.randint(-bound, bound) for _ in range(m)] for _ in range(n)]
        if any(any(r) for r in M):
            return M


def random_tensor_subspace(rng: random.Random, E: Lattice, F: Lattice, r: int, bound: int = 2) -> TensorSubspace:
    n, m = E.rank, F.rank
    while True:
        gens = [random_matrix(rng, n, m, bound) for _ in range(r)]
        if la.rank([[x for row in g for x in row] for g in gens]) == r:
            return TensorSubspace(E, F, gens)


def random_filtration(rng: random.Random, n: int, max_steps: int = 3) -> fl.RFiltration:
    while True:
        B = [[rng.randint(-2, 2) for _ in range(n)] for _ in range(n)]
        if la.det(B) != 0:
            break
    weights = [Fraction(rng.randint(-6, 6), rng.randint(1, 3)) for _ in range(n)]
    if rng.random() < 0.5:
        k = rng.randint(1, max_steps)
        levels = [Fraction(rng.randint(-4, 4), rng.randint(1, 2)) for _ in range(k)]
        weights = [rng.choice(levels) for _ in range(n)]
    return fl.RFiltration.from_basis(B, weights)


def _g(L: Lattice) -> str:
    return json.dumps(matrix_json(L.gram), separators=(",", ":"))


def _ranks(rng: random.Random, cfg: TrialConfig, top: int | None = None) -> int:
    return rng.randint(cfg.rank_min, min(cfg.rank_max, top) if top else cfg.rank_max)


def _kind(mode: str) -> str:
    return EXACT if mode == EXACT_MODE else LOWER


# ------------------------------------------------------------ trials


def trial_theoremA(cfg: TrialConfig, case: str, rng: random.Random) -> list[CheckReport]:
    E = random_lattice(rng, _ranks(rng, cfg), cfg.entry_bound)
    F = random_lattice(rng, _ranks(rng, cfg), cfg.entry_bound)
    hE, hF, hT = hn_data(E), hn_data(F), hn_data(tensor(E, F))
    w = f"E={_g(E)} F={_g(F)}"
    lk = _kind(hT.mode)
    rk = EXACT if hE.mode == hF.mode == EXACT_MODE else LOWER
    base = hE.mu_max + hF.mu_max
    ell = min(harmonic_tail(E.rank), harmonic_tail(F.rank)) / 2
    out = [CheckReport.compare("theoremA", f"{case}:mumax_ell", cfg.seed, hT.mu_max, base + ell, w, lhs_kind=lk, rhs_kind=rk)]
    sig = varsigma_estimate(dual(F))
    out.append(CheckReport.compare("theoremA", f"{case}:varsigma", cfg.seed, hT.mu_max, hE.mu_max - sig.hi, w, lhs_kind=lk, rhs_kind=LOWER))
    # additivity of maximal slopes holds for factors of rank <= 3
    if E.rank <= 3 and F.rank <= 3:
        exact = hT.mode == EXACT_MODE and rk == EXACT
        out.append(CheckReport.equality("theoremA", f"{case}:additivity_rk3", cfg.seed, hT.mu_max, base, w, exact=exact))
    return out


def trial_theoremB(cfg: TrialConfig, case: str, rng: random.Random) -> list[CheckReport]:
    E = random_lattice(rng, _ranks(rng, cfg), cfg.entry_bound)
    F = random_lattice(rng, _ranks(rng, cfg), cfg.entry_bound)
    r = rng.randint(1, min(4, E.rank * F.rank))
    V = random_tensor_subspace(rng, E, F, r)
    hE, hF = hn_data(E), hn_data(F)
    rk = EXACT if hE.mode == hF.mode == EXACT_MODE else LOWER
    w = f"E={_g(E)} F={_g(F)} V={[list(map(str, b)) for b in V.basis()]}"
    out = [CheckReport.compare("theoremB", f"{case}:slope_V", cfg.seed, slope(V.lattice()), hE.mu_max + hF.mu_max, w, rhs_kind=rk)]
    if r == 1:
        s = TensorElement(E, F, V.basis_matrices()[0])
        out.extend(check_majoration(s, "theoremB", f"{case}:sudeg", cfg.seed))
    return out


def trial_tenserr(cfg: TrialConfig, case: str, rng: random.Random) -> list[CheckReport]:
    E = random_lattice(rng, _ranks(rng, cfg), cfg.entry_bound)
    F = random_lattice(rng, _ranks(rng, cfg), cfg.entry_bound)
    hE, hF, hT = hn_data(E), hn_data(F), hn_data(tensor(E, F))
    lk = _kind(hT.mode)
    rk = EXACT if hE.mode == hF.mode == EXACT_MODE else LOWER
    base = hE.mu_max + hF.mu_max
    w = f"E={_g(E)} F={_g(F)}"
    out = [
        CheckReport.compare("corollary_tenserr", f"{case}:half_ell", cfg.seed, hT.mu_max, base + harmonic_tail(E.rank * F.rank) / 2, w, lhs_kind=lk, rhs_kind=rk),
        CheckReport.compare("corollary_tenserr", f"{case}:half_log", cfg.seed, hT.mu_max, base + LogRational.half_log(E.rank * F.rank), w, lhs_kind=lk, rhs_kind=rk),
    ]
    Ls = [random_lattice(rng, rng.randint(1, 2), cfg.entry_bound) for _ in range(3)]
    hs = [hn_data(L) for L in Ls]
    h3 = hn_data(tensor_many(Ls))
    rhs = LogRational.zero()
    for L, h in zip(Ls, hs):
        rhs = rhs + h.mu_max + LogRational.half_log(L.rank)
    rk3 = EXACT if all(h.mode == EXACT_MODE for h in hs) else LOWER
    w3 = " ".join(_g(L) for L in Ls)
    out.append(CheckReport.compare("corollary_tenserr", f"{case}:triple", cfg.seed, h3.mu_max, rhs, w3, lhs_kind=_kind(h3.mode), rhs_kind=rk3))
    return out


def trial_lattice(cfg: TrialConfig, case: str, rng: random.Random) -> list[CheckReport]:
    n = rng.randint(cfg.rank_min, cfg.rank_max)
    L = random_lattice(rng, n, cfg.entry_bound)
    S = "lattice"
    out = checks.minkowski_sandwich(L, S, f"{case}:minkowski", cfg.seed)
    out += checks.transference(L, S, f"{case}:transfer", cfg.seed)
    out.append(checks.slope_sum(L, S, f"{case}:slope_sum", cfg.seed))
    out.append(checks.dual_negation(L, S, f"{case}:dual_ndeg", cfg.seed))
    if n >= 2:
        sub = random_saturated(rng, n, rng.randint(1, n - 1))
        out.append(checks.exact_sequence(L, sub, S, f"{case}:exact_seq", cfg.seed))
        out.append(checks.orthogonal_duality(L, sub, S, f"{case}:dualite", cfg.seed))
        out.append(checks.mumaxquot(L, sub, S, f"{case}:mumaxquot", cfg.seed))
        sub2 = random_saturated(rng, n, rng.randint(1, n - 1))
        out.append(checks.submodularity(L, sub, sub2, S, f"{case}:suraddi", cfg.seed))
    for r in out:
        r.witness = r.witness or f"L={_g(L)}"
    return out


def _eps_below_hs(s: TensorElement, case: str, seed: int) -> CheckReport:
    hs = hs_norm_sq(s)
    ev = eps_norm_sq(s)
    if not ev.exact and ev.upper > hs:
        ev.refine(Fraction(1, 1 << 40))
    lhs = Enclosure(ev.lower, ev.upper)
    return CheckReport.compare("tensor", case, seed, lhs, hs, f"M={[list(map(str, r)) for r in s.coeffs]}")


def trial_tensor(cfg: TrialConfig, case: str, rng: random.Random) -> list[CheckReport]:
    E = random_lattice(rng, _ranks(rng, cfg), cfg.entry_bound)
    F = random_lattice(rng, _ranks(rng, cfg), cfg.entry_bound)
    s = TensorElement(E, F, random_matrix(rng, E.rank, F.rank))
    out = [_eps_below_hs(s, f"{case}:eps_le_hs", cfg.seed)]
    e1, e2 = [rng.randint(-3, 3) for _ in range(E.rank)], [rng.randint(-3, 3) for _ in range(E.rank)]
    f1, f2 = [rng.randint(-3, 3) for _ in range(F.rank)], [rng.randint(-3, 3) for _ in range(F.rank)]
    out.append(checks.rk2loc(E, F, e1, e2, f1, f2, "tensor", f"{case}:rk2loc", cfg.seed))
    E2 = random_lattice(rng, 2, cfg.entry_bound)
    F2 = random_lattice(rng, 2, cfg.entry_bound)
    eb = _random_basis(rng, 2)
    fb = _random_basis(rng, 2)
    out.append(checks.two_stable(E2, F2, eb, fb, "tensor", f"{case}:2stable", cfg.seed))
    return out


def _random_basis(rng: random.Random, n: int) -> list[list[int]]:
    while True:
        B = [[rng.randint(-3, 3) for _ in range(n)] for _ in range(n)]
        if la.det(B) != 0:
            return B


def _random_unimodular(rng: random.Random, n: int, steps: int = 8) -> list[list[int]]:
    U = la.identity(n)
    for _ in range(steps):
        i, j = rng.sample(range(n), 2) if n > 1 else (0, 0)
        if i != j:
            c = rng.randint(-2, 2)
            U[i] = [a + c * b for a, b in zip(U[i], U[j])]
        if rng.random() < 0.2:
            U[i] = [-a for a in U[i]]
    return U


def trial_filtrations(cfg: TrialConfig, case: str, rng: random.Random) -> list[CheckReport]:
    n, m = rng.randint(1, 4), rng.randint(1, 3)
    F, G = random_filtration(rng, n), random_filtration(rng, m)
    S, sd = "filtrations", cfg.seed
    eF, eG = fl.expectation(F), fl.expectation(G)
    FG = fl.tensor(F, G)
    out = [CheckReport.equality(S, f"{case}:tensor_E", sd, fl.expectation(FG), eF + eG)]
    # ranks of the subquotients of the tensor filtration
    mF = dict(zip(F.weights, F.multiplicities))
    mG = dict(zip(G.weights, G.multiplicities))
    conv: dict[Fraction, int] = {}
    for (a, x), (b, y) in itertools.product(mF.items(), mG.items()):
        conv[a + b] = conv.get(a + b, 0) + x * y
    got = dict(zip(FG.weights, FG.multiplicities))
    out.append(CheckReport.equality(S, f"{case}:subquotients", sd, Fraction(int(got == conv)), Fraction(1), str(sorted(got.items()))))
    k = rng.randint(1, n)
    out.append(CheckReport.equality(S, f"{case}:exterior_E", sd, fl.expectation(fl.exterior(F, k)), k * eF, f"k={k}"))
    out.append(CheckReport.equality(S, f"{case}:dual_E", sd, fl.expectation(fl.dual(F)), -eF))
    a = Fraction(rng.randint(-5, 5), rng.randint(1, 4))
    out.append(CheckReport.equality(S, f"{case}:translate_E", sd, fl.expectation(fl.translate(F, a)), eF + a, f"a={a}"))
    eps = Fraction(rng.randint(1, 5), rng.randint(1, 4))
    out.append(CheckReport.equality(S, f"{case}:dilate_E", sd, fl.expectation(fl.dilate(F, eps)), eps * eF, f"eps={eps}"))
    out.append(CheckReport.equality(S, f"{case}:direct_sum_E", sd, fl.expectation(fl.direct_sum(F, G)) * (n + m), n * eF + m * eG))
    U = _random_unimodular(rng, n)
    avg = sum((fl.lambda_(F, row) for row in U), Fraction(0)) / n
    out.append(CheckReport.compare(S, f"{case}:basis_ineq", sd, avg, eF, f"U={U}"))
    x = [rng.randint(-3, 3) for _ in range(n)]
    y = [rng.randint(-3, 3) for _ in range(n)]
    if any(x) and any(y) and any(a + b for a, b in zip(x, y)):
        lx, ly, lxy = fl.lambda_(F, x), fl.lambda_(F, y), fl.lambda_(F, [a + b for a, b in zip(x, y)])
        out.append(CheckReport.compare(S, f"{case}:ultranorm", sd, min(lx, ly), lxy, f"x={x} y={y}"))
    return out


def trial_git(cfg: TrialConfig, case: str, rng: random.Random) -> list[CheckReport]:
    n, m = rng.randint(2, 3), rng.randint(2, 3)
    r = rng.randint(1, min(3, n * m - 1))
    E, F = standard(n), standard(m)
    V = random_tensor_subspace(rng, E, F, r, bound=1)
    S, sd = "git", cfg.seed
    w = f"V={[list(map(str, b)) for b in V.basis()]} shape={n}x{m}"
    out = []
    left, right = git.left_right_check(V, "left", seed=sd), git.left_right_check(V, "right", seed=sd)
    both = git.both_sided_check(V, budget=20_000, seed=sd, max_chain=1)
    if both.status == git.UNSTABLE:
        # the witness must re-verify exactly through the filtration calculus
        Fw = _filtration_from(both.witness["F"])
        Gw = _filtration_from(both.witness["G"])
        Vb = [list(b) for b in V.basis()]
        lhs = fl.expectation(Fw) + fl.expectation(Gw)
        rhs = fl.restricted_expectation(fl.tensor(Fw, Gw), Vb)
        out.append(CheckReport.compare(S, f"{case}:witness", sd, lhs, rhs, w, strict=True))
    else:
        # both-sided semistability implies one-sided semistability
        ok = left.status != git.UNSTABLE and right.status != git.UNSTABLE
        out.append(CheckReport.equality(S, f"{case}:both_implies_sides", sd, Fraction(int(ok)), Fraction(1), w))
    if r == 1:
        rho = la.rank(V.basis_matrices()[0])
        three = (left.status == git.STABLE_CERTIFIED) == (rho == n) == (left.status != git.UNSTABLE)
        out.append(CheckReport.equality(S, f"{case}:rank_one", sd, Fraction(int(three)), Fraction(1), w))
    # semistable subspaces of rank <= 3 obey the slope bound for random metrics
    if both.status != git.UNSTABLE and r <= 3:
        Em = random_lattice(rng, n, 3)
        Fm = random_lattice(rng, m, 3)
        Vm = TensorSubspace(Em, Fm, V.generators)
        out.append(CheckReport.compare(S, f"{case}:semi_slope", sd, slope(Vm.lattice()), slope(Em) + slope(Fm), w))
    return out


def _filtration_from(desc: dict) -> fl.RFiltration:
    steps = [([[Fraction(x) for x in row] for row in st["basis"]], Fraction(st["weight"])) for st in desc["steps"]]
    return fl.RFiltration.from_flag(desc["dim"], steps)


TRIALS: dict[str, Callable[[TrialConfig, str, random.Random], list[CheckReport]]] = {
    "theoremA": trial_theoremA,
    "theoremB": trial_theoremB,
    "corollary_tenserr": trial_tenserr,
    "lattice": trial_lattice,
    "tensor": trial_tensor,
    "filtrations": trial_filtrations,
    "git": trial_git,
}

SUITES = sorted(TRIALS) + ["oracles"]


# ------------------------------------------------------------ oracles


def _counterexample() -> TensorSubspace:
    def e(i, j):
        return [[int((a, b) == (i, j)) for b in range(3)] for a in range(3)]

    def add(A, B):
        return [[x + y for x, y in zip(r, s)] for r, s in zip(A, B)]

    return TensorSubspace(standard(3), standard(3), [add(e(0, 1), e(1, 0)), add(e(0, 2), e(2, 0))])


def suite_oracles(seed: int = 0) -> list[CheckReport]:
    S = "oracles"
    out = []
    for n in range(1, 7):
        A = root_lattice_A(n)
        out.append(CheckReport.equality(S, f"A{n}:slope", seed, slope(A), LogRational.half_log(Fraction(1, n + 1)).scale(Fraction(1, n))))
        h = hn_data(A)
        out.append(CheckReport.equality(S, f"A{n}:mumax", seed, h.mu_max, slope(A), exact=h.mode == EXACT_MODE))
    A2 = root_lattice_A(2)
    grp = automorphism_group(A2)
    out.append(CheckReport.equality(S, "A2:aut_order", seed, len(grp), 12))
    out.append(CheckReport.equality(S, "A2:commutant", seed, commutant_dimension(grp), 1))
    out.append(CheckReport.equality(S, "A2:mumax_value", seed, hn_data(A2).mu_max, LogRational.half_log(3).scale(Fraction(-1, 2))))
    out.append(CheckReport.equality(S, "A2:first_degree", seed, first_degree_Z(A2), LogRational.half_log(Fraction(1, 2))))
    out.append(CheckReport.equality(S, "A2:dual_ndeg", seed, ndeg(dual(A2)), LogRational.half_log(3)))
    w = IQVector(EISENSTEIN, ((1, 0), (0, 1), (-1, -1)))
    out.append(check_An_alpha_bound(2, w, S, "A2:eisenstein_alpha", seed))
    out.append(check_An_alpha_bound(2, IQVector.from_integers(EISENSTEIN, [0, 1, -1]), S, "A2:root_alpha", seed))
    best, _ = best_line_degree(A2, EISENSTEIN, 1)
    out.append(CheckReport.equality(S, "A2:best_iq_line", seed, best, LogRational.half_log(Fraction(1, 2))))
    out.append(CheckReport.equality(S, "A2:sudeg_gap", seed, hn_data(A2).mu_max - best, LogRational.log(Fraction(4, 3)).scale(Fraction(1, 4))))
    out.append(slope_inequality_check(LinearMap(A2, standard(3), A_embedding(2)), "injective", S, "A2:embedding_slope", seed))
    # A_2 (x) A_2: maximal slope is additive, and the triple bound with Z^2
    mu = hn_data(A2).mu_max
    hAA = hn_data(tensor(A2, A2))
    out.append(CheckReport.equality(S, "A2xA2:mumax", seed, hAA.mu_max, mu + mu, exact=hAA.mode == EXACT_MODE))
    h3 = hn_data(tensor_many([A2, A2, standard(2)]))
    rhs = mu + mu + LogRational.half_log(2) + LogRational.half_log(2) + LogRational.half_log(2)
    out.append(CheckReport.compare(S, "A2xA2xZ2:triple", seed, h3.mu_max, rhs, lhs_kind=EXACT if h3.mode == EXACT_MODE else LOWER))
    # a rank-one factor shifts the maximal slope by its degree
    E1, F1 = Lattice([[3]], "<3>"), Lattice([[2, 1], [1, 5]])
    out.append(CheckReport.equality(S, "rank1:mumax_shift", seed, hn_data(tensor(E1, F1)).mu_max, ndeg(E1) + hn_data(F1).mu_max))
    D = Lattice([[1, 0], [0, 4]], "diag(1,4)")
    h = hn_data(D)
    out.append(CheckReport.equality(S, "diag14:slopes", seed, Fraction(int(h.slopes == [LogRational.zero(), LogRational.log(Fraction(1, 2))])), Fraction(1), str([str(x) for x in h.slopes])))
    out += checks.transference(A2, S, "A2:transfer", seed)
    # trace element of A2 (x) A2^v
    t = TensorElement(A2, dual(A2), la.identity(2))
    out += check_majoration(t, S, "A2:trace_majoration", seed)
    V = _counterexample()
    left, right = git.left_right_check(V, "left"), git.left_right_check(V, "right")
    both = git.both_sided_check(V)
    for name, ver, want in (("left", left, git.STABLE_CERTIFIED), ("right", right, git.STABLE_CERTIFIED), ("both", both, git.UNSTABLE)):
        out.append(CheckReport.equality(S, f"counterexample:{name}", seed, Fraction(int(ver.status == want)), Fraction(1), ver.status))
    out.append(CheckReport.equality(S, "counterexample:margin", seed, both.margin if both.margin is not None else Fraction(-1), Fraction(1, 3)))
    # Gaussian points on A_3
    rng = random.Random(seed)
    for k in range(5):
        v = random_vector(GAUSS, 4, 3, rng, sum_zero=True)
        out.append(check_An_alpha_bound(3, v, S, f"A3:gauss_alpha:{k}", seed))
    return out


# ------------------------------------------------------------ running


def _run_trial(args) -> list[CheckReport]:
    suite, cfg, index = args
    case = f"t{index:05d}"
    rng = random.Random(trial_seed(cfg.seed, f"{suite}:{case}"))
    return TRIALS[suite](cfg, case, rng)


def run_suite(suite: str, cfg: TrialConfig, jobs: int = 1) -> list[CheckReport]:
    if suite == "oracles":
        return sorted(suite_oracles(cfg.seed), key=lambda r: (r.suite, r.case_id))
    if suite not in TRIALS:
        raise ValueError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")
    cfg = replace(cfg, suite=suite)
    tasks = [(suite, cfg, i) for i in range(cfg.trials)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            chunks = list(ex.map(_run_trial, tasks, chunksize=max(1, len(tasks) // (4 * jobs))))
    else:
        chunks = [_run_trial(t) for t in tasks]
    reports = [r for c in chunks for r in c]
    return sorted(reports, key=lambda r: (r.suite, r.case_id))


def run(suites: Sequence[str], cfg: TrialConfig, jobs: int = 1) -> list[CheckReport]:
    names = SUITES if list(suites) == ["all"] else list(suites)
    out = []
    for s in names:
        out.extend(run_suite(s, cfg, jobs))
    return sorted(out, key=lambda r: (r.suite, r.case_id))


def summary(reports: Sequence[CheckReport]) -> dict[str, int]:
    out = {PASS: 0, FAIL: 0, INCONCLUSIVE: 0}
    for r in reports:
        out[r.status] += 1
    return out


def write_csv(reports: Sequence[CheckReport], path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=CSV_COLUMNS, lineterminator="\n")
        w.writeheader()
        for r in reports:
            w.writerow(r.row())
