import itertools
import math
from fractions import Fraction

from hypothesis import given

from slopelab import linalg as la
from slopelab.hn import hn_data
from slopelab.lattice import Lattice, dual, root_lattice_A, slope
from slopelab.logs import LogRational
from slopelab.minima import enumerate_vectors, first_degree_Z, first_minimum_sq, max_slope, successive_minima, varsigma_estimate

from conftest import lattices


def brute_lambda1_sq(G):
    """Box scan: |x_i|^2 <= lambda_1^2 (G^-1)_ii by Cauchy-Schwarz, lambda_1^2 <= min G_ii."""
    n = len(G)
    Gi = la.inverse(G)
    top = min(Fraction(G[i][i]) for i in range(n))
    bounds = [math.isqrt(int(top * Gi[i][i])) + 1 for i in range(n)]
    best = None
    for x in itertools.product(*[range(-b, b + 1) for b in bounds]):
        if any(x):
            v = la.bilinear(x, G, x)
            if best is None or v < best:
                best = v
    return Fraction(best)


def oracle_mu_max(L):
    """Closed forms for rank <= 3 from lambda_1 of L and of its dual."""
    n = L.rank
    cands = [slope(L)]
    if n >= 2:
        cands.append(LogRational.half_log(1 / brute_lambda1_sq(L.gram)))
    if n == 3:
        # rank-2 saturated sublattices are the kernels of primitive dual vectors
        cands.append(LogRational.half_log(1 / (L.det * brute_lambda1_sq(dual(L).gram))).scale(Fraction(1, 2)))
    return max(cands)


@given(lattices(max_rank=3))
def test_first_minimum_against_box_scan(L):
    nrm, v = first_minimum_sq(L.gram)
    assert nrm == brute_lambda1_sq(L.gram)
    assert L.norm_sq(v) == nrm
    assert first_degree_Z(L) == LogRational.half_log(1 / nrm)


@given(lattices(max_rank=3))
def test_max_slope_against_closed_form(L):
    cert = max_slope(L)
    assert cert.mode == "EXACT"
    assert cert.value == oracle_mu_max(L)
    assert slope(Lattice(L.gram_of(cert.witness))) == cert.value


@given(lattices(max_rank=4))
def test_successive_minima_are_realised_and_sorted(L):
    m = successive_minima(L)
    assert m.norms_sq == sorted(m.norms_sq)
    assert la.rank(m.vectors) == L.rank
    assert [L.norm_sq(v) for v in m.vectors] == m.norms_sq
    # Minkowski: the product of minima bounds the covolume from above
    assert math.prod(m.norms_sq) >= L.det


def test_enumeration_counts_A2():
    vl = enumerate_vectors(root_lattice_A(2).gram, 2)
    # three root pairs of norm 2
    assert vl.norms == [2, 2, 2]


def test_A2_minima():
    m = successive_minima(root_lattice_A(2))
    assert m.norms_sq == [2, 2]


@given(lattices(max_rank=3))
def test_varsigma_interval(L):
    e = varsigma_estimate(L)
    mu_min = hn_data(L).mu_min
    assert e.lo <= e.hi
    assert e.hi <= mu_min
    assert e.hi <= -first_degree_Z(dual(L))


def test_budget_env_gives_lower_bound(monkeypatch):
    L = Lattice([[5, 1, 2, 0, 1], [1, 6, 0, 2, 1], [2, 0, 7, 1, 0], [0, 2, 1, 8, 2], [1, 1, 0, 2, 9]])
    full = max_slope(L)
    assert full.mode == "EXACT"
    monkeypatch.setenv("SLOPELAB_BUDGET", "0.000001")
    cert = max_slope(L)
    assert cert.mode == "LOWER_BOUND"
    assert slope(L) <= cert.value <= full.value
