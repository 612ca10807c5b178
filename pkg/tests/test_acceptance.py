"""Acceptance criteria 1-10. Each test records one PASS/FAIL line, printed in
the terminal summary (see conftest.py)."""
import random
import time
from fractions import Fraction

from slopelab import checks
from slopelab import filtrations as fl
from slopelab import geometric as git
from slopelab import linalg as la
from slopelab.automorphisms import automorphism_group, commutant_dimension
from slopelab.formats import parse_filtration
from slopelab.harness import (
    TrialConfig,
    _counterexample,
    random_lattice,
    random_saturated,
    run_suite,
    summary,
    trial_seed,
)
from slopelab.hn import EXACT_MODE, hn_data, is_semistable
from slopelab.iq import EISENSTEIN, IQVector, best_line_degree, iq_line_degree
from slopelab.lattice import dual, root_lattice_A, slope, standard
from slopelab.logs import LogRational
from slopelab.minima import first_degree_Z
from slopelab.reports import FAIL, INCONCLUSIVE, PASS

RESULTS: list[str] = []


def record(n: int, ok: bool, detail: str) -> None:
    line = f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
    RESULTS.append(line)
    print(line)
    assert ok, line


def _rng(tag: str, i: int) -> random.Random:
    return random.Random(trial_seed(0, f"{tag}:{i}"))


def _statuses(reports) -> dict:
    return summary(reports)


def test_criterion_01_An_slopes():
    t = time.perf_counter()
    ok = all(slope(root_lattice_A(n)) == LogRational.log(Fraction(1, n + 1)).scale(Fraction(1, 2 * n)) for n in range(1, 7))
    dt = time.perf_counter() - t
    record(1, ok and dt < 1, f"mu(A_n) = -(1/2n) log(n+1) exact for n = 1..6 in {dt:.3f}s")


def test_criterion_02_A2_suite():
    t = time.perf_counter()
    A2 = root_lattice_A(2)
    grp = automorphism_group(A2)
    cert = is_semistable(A2)
    hn = hn_data(A2)
    line_Z = first_degree_Z(A2)
    # (1, w, w^2) in Z^3 and its coordinates (1, 1 + w) in the root basis of A_2
    w_amb = IQVector(EISENSTEIN, ((1, 0), (0, 1), (-1, -1)))
    w_A2 = IQVector(EISENSTEIN, ((1, 0), (1, 1)))
    d_amb, d_A2 = iq_line_degree(standard(3), w_amb), iq_line_degree(A2, w_A2)
    found, _ = best_line_degree(A2, EISENSTEIN, 1)
    sudeg_found = max(found, line_Z)
    dt = time.perf_counter() - t
    checks_ = {
        "semistable": cert.status == "SEMISTABLE" and "automorphism" in cert.reason,
        "|Aut|=12": len(grp) == 12,
        "commutant=1": commutant_dimension(grp) == 1,
        "mu_max=-1/4log3": hn.mode == EXACT_MODE and hn.mu_max == LogRational.half_log(Fraction(1, 3)).scale(Fraction(1, 2)),
        "Z-line=-1/2log2": line_Z == LogRational.half_log(Fraction(1, 2)),
        "eisenstein=-1/2log3": d_amb == d_A2 == LogRational.half_log(Fraction(1, 3)),
        "gap=1/4log(4/3)": hn.mu_max - sudeg_found == LogRational.log(Fraction(4, 3)).scale(Fraction(1, 4)),
        "time<5s": dt < 5,
    }
    bad = [k for k, v in checks_.items() if not v]
    record(2, not bad, f"A_2 suite {len(checks_) - len(bad)}/{len(checks_)} in {dt:.2f}s" + (f" failed: {bad}" if bad else ""))


def test_criterion_03_minkowski_sandwich():
    t = time.perf_counter()
    reps = []
    for i in range(500):
        rng = _rng("minkowski", i)
        L = random_lattice(rng, rng.randint(1, 4), 5)
        reps += checks.minkowski_sandwich(L, case_id=f"m{i}")
    dt = time.perf_counter() - t
    c = _statuses(reps)
    record(3, c[PASS] == len(reps) and dt < 300, f"Minkowski sandwich on 500 lattices (rank <= 4, bound 5): {c} in {dt:.1f}s")


def test_criterion_04_transference():
    reps, exact = [], 0
    for i in range(100):
        rng = _rng("transfer", i)
        L = random_lattice(rng, rng.randint(1, 3), 5)
        exact += hn_data(L).mode == EXACT_MODE and hn_data(dual(L)).mode == EXACT_MODE
        reps += checks.transference(L, case_id=f"t{i}")
    c = _statuses(reps)
    record(4, exact == 100 and c[PASS] == len(reps), f"transference on 100 lattices (rank <= 3): exact HN {exact}/100, {c}")


def test_criterion_05_theoremA():
    t = time.perf_counter()
    reps = run_suite("theoremA", TrialConfig(seed=0, rank_min=1, rank_max=3, entry_bound=5, trials=300))
    dt = time.perf_counter() - t
    c = _statuses(reps)
    add = [r for r in reps if r.case_id.endswith(":additivity_rk3")]
    exact = sum(r.status != INCONCLUSIVE for r in add)
    main_rows = [r for r in reps if r.case_id.endswith(":mumax_ell")]
    ok = c[FAIL] == 0 and exact >= 0.95 * 300 and len(main_rows) == 300 and dt < 1800
    record(5, ok, f"theorem A on 300 pairs (rank <= 3): exact certificates {exact}/300, rows {c} in {dt:.1f}s")


def test_criterion_06_theoremB():
    reps = run_suite("theoremB", TrialConfig(seed=0, rank_min=1, rank_max=3, entry_bound=5, trials=1000))
    c = _statuses(reps)
    main_rows = [r for r in reps if r.case_id.endswith(":slope_V")]
    sudeg = [r for r in reps if ":sudeg:" in r.case_id]
    ok = c[FAIL] == 0 and len(main_rows) == 1000 and all(r.status == PASS for r in main_rows) and sudeg and all(r.status == PASS for r in sudeg)
    record(6, bool(ok), f"theorem B on 1000 subspaces (rank <= 4): {c}, rank-one majoration rows {len(sudeg)}")


def test_criterion_07_filtrations():
    t = time.perf_counter()
    reps = run_suite("filtrations", TrialConfig(seed=0, trials=1200))
    dt = time.perf_counter() - t
    c = _statuses(reps)
    ok = len(reps) >= 10_000 and c[PASS] == len(reps) and dt < 60
    record(7, ok, f"{len(reps)} filtration identity checks: {c} in {dt:.1f}s")


def test_criterion_08_git_counterexample():
    V = _counterexample()
    left, right = git.left_right_check(V, "left"), git.left_right_check(V, "right")
    both = git.both_sided_check(V, seed=0)
    again = git.both_sided_check(V, seed=0)
    F = parse_filtration({"dim": 3, "steps": [{"basis": s["basis"], "weight": s["weight"]} for s in both.witness["F"]["steps"]]})
    G = parse_filtration({"dim": 3, "steps": [{"basis": s["basis"], "weight": s["weight"]} for s in both.witness["G"]["steps"]]})
    Vb = [list(b) for b in V.basis()]
    margin = fl.restricted_expectation(fl.tensor(F, G), Vb) - fl.expectation(F) - fl.expectation(G)
    ok = (
        left.status == git.STABLE_CERTIFIED
        and right.status == git.STABLE_CERTIFIED
        and both.status == git.UNSTABLE
        and both.margin == Fraction(1, 3)
        and margin == Fraction(1, 3)
        and again.witness == both.witness
    )
    record(8, ok, f"left {left.status}, right {right.status}, both {both.status}, margin {both.margin} (recomputed {margin})")


def test_criterion_09_duality_exactness():
    reps = []
    for i in range(500):
        rng = _rng("duality", i)
        n = rng.randint(2, 4)
        L = random_lattice(rng, n, 5)
        S = random_saturated(rng, n, rng.randint(1, n - 1))
        S2 = random_saturated(rng, n, rng.randint(1, n - 1))
        reps.append(checks.orthogonal_duality(L, S, case_id=f"d{i}"))
        reps.append(checks.exact_sequence(L, S, case_id=f"e{i}"))
        reps.append(checks.submodularity(L, S, S2, case_id=f"s{i}"))
    c = _statuses(reps)
    record(9, c[PASS] == len(reps), f"duality, exact sequence, submodularity on 500 pairs: {c}")


def test_criterion_10_eps_and_rk2loc():
    reps = run_suite("tensor", TrialConfig(seed=0, rank_min=1, rank_max=3, entry_bound=5, trials=1000))
    eps = [r for r in reps if r.case_id.endswith(":eps_le_hs")]
    loc = [r for r in reps if r.case_id.endswith(":rk2loc")]
    ce, cl = _statuses(eps), _statuses(loc)
    ok = len(eps) == len(loc) == 1000 and ce[PASS] == 1000 and cl[PASS] == 1000
    record(10, ok, f"eps <= hermitian {ce}, rk2loc {cl}")


def test_saturation_helper_is_exact():
    # guard for criterion 9: random_saturated really returns saturated bases
    rng = random.Random(0)
    for _ in range(50):
        S = random_saturated(rng, 4, rng.randint(1, 3))
        assert la.is_saturated(S)
