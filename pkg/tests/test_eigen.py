from fractions import Fraction

import mpmath
import sympy
from hypothesis import given, strategies as st

from slopelab import linalg as la
from slopelab.eigen import charpoly, max_eigenvalue_interval, max_product_eigenvalue_interval, poly_gcd, poly_mul, sturm_sequence

from conftest import int_matrices


def sym_charpoly(M):
    x = sympy.Symbol("x")
    p = sympy.Poly(sympy.Matrix(M).charpoly(x).as_expr(), x)
    return [Fraction(int(c)) for c in reversed(p.all_coeffs())]


@given(st.integers(1, 4).flatmap(lambda n: int_matrices(n, n, 5)))
def test_charpoly_matches_sympy(M):
    # coefficients are stored lowest degree first
    assert charpoly(M) == sym_charpoly(M)


@given(st.integers(1, 4).flatmap(lambda n: int_matrices(n, n, 4)))
def test_max_eigenvalue_encloses_numeric(B):
    S = la.mat_mul(B, la.transpose(B))
    ev = max_eigenvalue_interval(S, Fraction(1, 1 << 30))
    top = max(mpmath.eigsy(mpmath.matrix(S))[0])
    assert ev.lower - Fraction(1, 10**9) <= Fraction(str(top)) <= ev.upper + Fraction(1, 10**9)
    if ev.exact:
        assert sympy.Rational(ev.lower.numerator, ev.lower.denominator) in sympy.Matrix(S).eigenvals()


def test_rational_eigenvalue_is_detected():
    ev = max_eigenvalue_interval([[2, 1], [1, 2]])
    assert ev.exact and ev.lower == 3
    ev = max_eigenvalue_interval([[1, 0], [0, 2]])
    assert ev.exact and ev.upper == 2


def test_irrational_eigenvalue_is_enclosed():
    ev = max_eigenvalue_interval([[1, 1], [1, 2]], Fraction(1, 1 << 40))
    phi2 = (3 + mpmath.sqrt(5)) / 2
    assert not ev.exact
    assert ev.lower < Fraction(str(phi2)) + Fraction(1, 10**12) and Fraction(str(phi2)) - Fraction(1, 10**12) < ev.upper


def test_product_eigenvalue():
    ev = max_product_eigenvalue_interval([[2, 0], [0, 1]], [[3, 0], [0, 1]])
    assert ev.exact and ev.lower == 6


def test_sturm_sequence_counts_roots():
    # (x - 1)(x - 2)(x + 3)
    p = poly_mul(poly_mul([Fraction(-1), Fraction(1)], [Fraction(-2), Fraction(1)]), [Fraction(3), Fraction(1)])
    seq = sturm_sequence(p)
    assert len(seq) == 4
    g = poly_gcd(p, [Fraction(-1), Fraction(1)])
    assert len(g) == 2
