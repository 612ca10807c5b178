import random

import pytest
from hypothesis import HealthCheck, settings, strategies as st

from slopelab import linalg as la
from slopelab.lattice import Lattice

settings.register_profile("default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@st.composite
def int_matrices(draw, rows, cols, bound=4):
    return [[draw(st.integers(-bound, bound)) for _ in range(cols)] for _ in range(rows)]


@st.composite
def lattices(draw, min_rank=1, max_rank=3, bound=3):
    n = draw(st.integers(min_rank, max_rank))
    B = draw(int_matrices(n, n, bound).filter(lambda B: la.det(B) != 0))
    return Lattice(la.mat_mul(B, la.transpose(B)))


@pytest.fixture
def rng():
    return random.Random(12345)


@st.composite
def unimodular(draw, n, steps=6):
    U = la.identity(n)
    for _ in range(draw(st.integers(0, steps))):
        i, j = draw(st.integers(0, n - 1)), draw(st.integers(0, n - 1))
        c = draw(st.integers(-2, 2))
        if i != j:
            U[i] = [a + c * b for a, b in zip(U[i], U[j])]
        elif draw(st.booleans()):
            U[i] = [-a for a in U[i]]
    return U


@st.composite
def filtrations(draw, min_dim=1, max_dim=4):
    from slopelab.filtrations import RFiltration

    n = draw(st.integers(min_dim, max_dim))
    B = draw(int_matrices(n, n, 2).filter(lambda B: la.det(B) != 0))
    ws = draw(st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=3), min_size=n, max_size=n))
    return RFiltration.from_basis(B, ws)


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)
