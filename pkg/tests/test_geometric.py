import math
from fractions import Fraction

from hypothesis import given, settings, strategies as st

from slopelab import filtrations as fl
from slopelab import geometric as git
from slopelab import linalg as la
from slopelab.harness import _counterexample
from slopelab.lattice import standard
from slopelab.tensor import TensorSubspace

from conftest import filtrations, int_matrices


def subspace(n, m, gens):
    return TensorSubspace(standard(n), standard(m), gens)


@st.composite
def small_subspaces(draw):
    n, m = draw(st.integers(2, 3)), draw(st.integers(2, 3))
    r = draw(st.integers(1, 3))
    gens = draw(st.lists(int_matrices(n, m, 1), min_size=r, max_size=r).filter(lambda g: la.rank([[x for row in M for x in row] for M in g]) == r))
    return subspace(n, m, gens)


@st.composite
def chain(draw, dim):
    k = draw(st.integers(1, 2))
    vecs = draw(int_matrices(dim, dim, 2).filter(lambda B: la.det(B) != 0))
    sizes = sorted(draw(st.sets(st.integers(1, dim - 1), min_size=1, max_size=min(k, dim - 1))))
    return tuple(tuple(tuple(Fraction(x) for x in v) for v in la.row_basis(vecs[:s])) for s in sizes)


@st.composite
def weights(draw, length):
    ws = sorted(draw(st.sets(st.integers(1, 6), min_size=length, max_size=length)), reverse=True)
    return tuple(ws) + (0,)


@given(small_subspaces(), st.data())
def test_fast_gap_matches_filtration_calculus(V, data):
    n, m = V.shape
    cE, cF = data.draw(chain(n)), data.draw(chain(m))
    wE, wF = data.draw(weights(len(cE))), data.draw(weights(len(cF)))
    Vb = [list(b) for b in V.basis()]
    pd = git._PairDims(Vb, cE, cF, n, m)
    F, G = git.flag_filtration(cE, wE, n), git.flag_filtration(cF, wF, m)
    gap = git._fast_gap(pd, wE, wF)
    assert gap == git.tensor_expectation_gap(Vb, F, G)
    # the gap is linear on the chamber through the point
    ell = git._chamber_functional(pd, wE, wF)
    free = list(wE[:-1]) + list(wF[:-1])
    assert gap == sum(a * b for a, b in zip(ell, free))
    # norms: closed form, quadratic form and filtration calculus agree
    N = git._norm_value(pd, wE, wF)
    Q = git._norm_form(pd, len(wE) - 1, len(wF) - 1)
    assert N == la.bilinear(free, Q, free)
    assert N == git.Pair(F, G, gap).norm_sq


@given(filtrations(max_dim=3), filtrations(max_dim=3))
def test_gap_vanishes_on_whole_space(F, G):
    n, m = F.dim, G.dim
    Vb = la.identity(n * m)
    assert git.tensor_expectation_gap(Vb, F, G) == 0


def test_counterexample():
    V = _counterexample()
    left, right = git.left_right_check(V, "left"), git.left_right_check(V, "right")
    assert left.status == right.status == git.STABLE_CERTIFIED
    both = git.both_sided_check(V)
    assert both.status == git.UNSTABLE
    assert both.margin == Fraction(1, 3)
    # witness pair: the lines <x1> and <y1> with weights (1, 0)
    for side in ("F", "G"):
        steps = both.witness[side]["steps"]
        assert [s["weight"] for s in steps] == ["1", "0"]
        assert steps[0]["basis"] == [["1", "0", "0"]]
    assert git.both_sided_check(V, seed=7).margin == Fraction(1, 3)


def test_theta_minimize_counterexample():
    (lo, hi), p = git.theta_minimize(_counterexample())
    assert p.gap == Fraction(1, 3)
    assert lo == hi == Fraction(-1, 2)
    assert p.theta_sq() == Fraction(1, 4)


def test_theta_interval_encloses():
    F = fl.RFiltration.from_basis(la.identity(2), [1, 0])
    p = git.Pair(F, F, Fraction(1, 5))
    lo, hi = p.theta_interval()
    val = -0.2 / math.sqrt(float(p.norm_sq))
    assert lo <= Fraction(val) + Fraction(1, 10**12) and Fraction(val) - Fraction(1, 10**12) <= hi
    assert lo < hi


def test_rank_one():
    V = subspace(2, 2, [[[1, 0], [0, 1]]])
    assert git.left_right_check(V, "left").status == git.STABLE_CERTIFIED
    assert git.both_sided_check(V).status == git.SEMISTABLE_CERTIFIED
    W = subspace(2, 2, [[[1, 1], [1, 1]]])
    ver = git.left_right_check(W, "left")
    assert ver.status == git.UNSTABLE and ver.margin == Fraction(1, 2)
    assert git.both_sided_check(W).status == git.UNSTABLE


def test_image_proper_is_unstable():
    # V inside <x1> (x) F
    V = subspace(2, 3, [[[1, 0, 0], [0, 0, 0]], [[0, 1, 0], [0, 0, 0]]])
    assert git.left_right_check(V, "left").status == git.UNSTABLE
    assert git.both_sided_check(V).status == git.UNSTABLE


@settings(max_examples=15)
@given(small_subspaces())
def test_unstable_witnesses_recheck(V):
    ver = git.both_sided_check(V, budget=5000, max_chain=1)
    if ver.status == git.UNSTABLE:
        assert ver.margin > 0
    if ver.status in (git.STABLE_CERTIFIED, git.SEMISTABLE_CERTIFIED, git.LIKELY_SEMISTABLE):
        assert git.left_right_check(V, "left").status != git.UNSTABLE
        assert git.left_right_check(V, "right").status != git.UNSTABLE


def test_totaro_equality_at_optimum():
    V = _counterexample()
    _, p = git.theta_minimize(V)
    lhs, rhs = git.totaro_check(V, p, p.F, p.G)
    assert lhs == rhs


def test_constraint_checks_counterexample():
    reps = git.constraint_checks(_counterexample(), "left")
    assert [r.status for r in reps] == ["PASS", "PASS"]
    # the line condition 2/r < rho/n + rho/m is necessary only: 1 < 4/3 holds here
    reps = git.constraint_checks(_counterexample(), "both")
    assert reps[0].case_id.endswith("lines_both")
    assert all(r.status == "PASS" for r in reps)


def test_constraint_checks_refute():
    # rank-one V of tensorial rank 1 cannot be left stable: 1 < 1/2 fails
    V = subspace(2, 2, [[[1, 0], [0, 0]]])
    reps = git.constraint_checks(V, "left")
    assert reps[0].status == "FAIL"
