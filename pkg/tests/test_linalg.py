import itertools
from fractions import Fraction
from math import gcd

import pytest
import sympy
from hypothesis import given, strategies as st

from slopelab import linalg as la

from conftest import int_matrices, unimodular


def sym(M):
    return sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) if isinstance(x, Fraction) else x for x in r] for r in M])


def maximal_minor_gcd(S):
    k, n = len(S), len(S[0])
    g = 0
    for cols in itertools.combinations(range(n), k):
        g = gcd(g, int(sym([[row[c] for c in cols] for row in S]).det()))
    return g


def test_hnf_small_example():
    H, U = la.hnf([[2, 4], [1, 3]])
    assert H == [[1, 1], [0, 2]]
    assert la.mat_mul(U, [[2, 4], [1, 3]]) == H


@given(st.integers(1, 4).flatmap(lambda m: st.integers(1, 4).flatmap(lambda n: int_matrices(m, n, 6))))
def test_hnf_shape_and_transform(M):
    H, U = la.hnf(M)
    assert abs(la.det(U)) == 1
    assert la.mat_mul(U, M) == H
    # echelon with reduced entries above positive pivots
    last = -1
    for i, row in enumerate(H):
        nz = [j for j, x in enumerate(row) if x]
        if not nz:
            assert all(not any(r) for r in H[i:])
            break
        p = nz[0]
        assert p > last and row[p] > 0
        for k in range(i):
            assert 0 <= H[k][p] < row[p]
        last = p


@given(int_matrices(3, 3, 5), unimodular(3))
def test_hnf_is_invariant_under_row_operations(M, U):
    assert la.hnf_basis(M) == la.hnf_basis(la.mat_mul(U, M))


@given(st.integers(1, 4).flatmap(lambda n: int_matrices(n, n, 6)))
def test_det_matches_sympy(M):
    assert la.det(M) == sym(M).det()


@given(st.integers(1, 4).flatmap(lambda m: int_matrices(m, 4, 3)))
def test_rank_and_nullspace_match_sympy(M):
    assert la.rank(M) == sym(M).rank()
    ns = la.nullspace(M, 4)
    assert len(ns) == 4 - sym(M).rank()
    for v in ns:
        assert all(x == 0 for x in la.mat_vec(M, v))


@given(st.integers(1, 3).flatmap(lambda k: int_matrices(k, 4, 4)).filter(lambda S: la.rank(S) == len(S)))
def test_saturation_against_minor_gcd(S):
    sat = la.saturate(S, 4)
    assert len(sat) == len(S)
    assert maximal_minor_gcd(sat) == 1
    # same rational span
    assert la.rank(sat + S) == len(S)
    assert la.is_saturated(S) == (maximal_minor_gcd(S) == 1)


@given(st.integers(1, 3).flatmap(lambda k: int_matrices(k, 4, 4)).filter(lambda S: la.rank(S) == len(S)))
def test_complete_basis_is_unimodular(S):
    sat = la.saturate(S, 4)
    C = la.complete_basis(sat, 4)
    assert abs(la.det(sat + C)) == 1


@given(int_matrices(2, 4, 4))
def test_integer_kernel(A):
    K = la.integer_kernel(A, 4)
    assert len(K) == 4 - la.rank(A)
    for v in K:
        assert all(x == 0 for x in la.mat_vec(A, v))
    if K:
        assert maximal_minor_gcd(K) == 1


def test_inverse_and_kron():
    A = [[2, 1], [1, 1]]
    assert la.mat_mul(A, la.inverse(A)) == la.identity(2)
    assert la.kron([[1, 2]], [[0, 1], [1, 0]]) == [[0, 1, 0, 2], [1, 0, 2, 0]]


def test_saturate_rejects_empty():
    with pytest.raises(la.LinalgError):
        la.saturate([[0, 0]])
