import random
from fractions import Fraction

from hypothesis import given, strategies as st

from slopelab import checks
from slopelab import linalg as la
from slopelab.filtrations import RFiltration
from slopelab.lattice import Lattice, root_lattice_A
from slopelab.reports import FAIL, INCONCLUSIVE, PASS, CheckReport

from conftest import int_matrices, lattices


@given(lattices(max_rank=3))
def test_lattice_identities(L):
    for r in checks.minkowski_sandwich(L) + checks.transference(L) + checks.polygon_concavity(L):
        assert r.status == PASS
    assert checks.slope_sum(L).status == PASS
    assert checks.dual_negation(L).status == PASS


@given(lattices(min_rank=2, max_rank=3), st.data())
def test_subobject_identities(L, data):
    n = L.rank
    def sat():
        k = data.draw(st.integers(1, n - 1))
        g = data.draw(int_matrices(k, n, 3).filter(lambda g: la.rank(g) == k))
        return la.saturate(g, n)
    S1, S2 = sat(), sat()
    assert checks.exact_sequence(L, S1).status == PASS
    assert checks.orthogonal_duality(L, S1).status == PASS
    assert checks.submodularity(L, S1, S2).status == PASS
    assert checks.mumaxquot(L, S1).status == PASS


@given(lattices(max_rank=2), lattices(max_rank=2), st.data())
def test_tensor_checks(E, F, data):
    assert checks.tensor_additivity(E, F).status == PASS
    vec = lambda k: data.draw(st.lists(st.integers(-3, 3), min_size=k, max_size=k))
    assert checks.rk2loc(E, F, vec(E.rank), vec(E.rank), vec(F.rank), vec(F.rank)).status == PASS


def test_two_stable_and_irreducible():
    rng = random.Random(3)
    A2 = root_lattice_A(2)
    for _ in range(20):
        e = [[rng.randint(-3, 3) for _ in range(2)] for _ in range(2)]
        f = [[rng.randint(-3, 3) for _ in range(2)] for _ in range(2)]
        if la.det(e) and la.det(f):
            assert checks.two_stable(A2, Lattice([[2, 1], [1, 3]]), e, f).status == PASS
    assert checks.irreducible_semistable(A2).status == PASS
    assert checks.irreducible_semistable(Lattice([[1, 0], [0, 2]])) is None


def test_bogomolov_on_A2():
    F = RFiltration.from_basis([[1, 1], [0, 1]], [Fraction(3), Fraction(-1)])
    assert checks.bogomolov(root_lattice_A(2), F).status == PASS


def test_report_kinds():
    # a lower bound on the lhs cannot certify lhs <= rhs
    assert CheckReport.compare("s", "c", 0, 1, 2, lhs_kind="lower").status == INCONCLUSIVE
    assert CheckReport.compare("s", "c", 0, 3, 2, lhs_kind="lower").status == FAIL
    assert CheckReport.compare("s", "c", 0, 3, 2, rhs_kind="lower").status == INCONCLUSIVE
    assert CheckReport.compare("s", "c", 0, 1, 2, rhs_kind="lower").status == PASS
    assert CheckReport.equality("s", "c", 0, 1, 1, exact=False).status == INCONCLUSIVE
    row = CheckReport.compare("s", "c", 5, Fraction(1, 3), 1).row()
    assert row["lhs_exact"] == "1/3" and row["slack_float"] == "0.666666666667"
