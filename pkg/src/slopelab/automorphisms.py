"""Automorphism groups of lattices and their commutants."""
from __future__ import annotations

from typing import Sequence

from . import linalg as la
from .lattice import Lattice
from .minima import enumerate_vectors

GROUP_CAP = 100_000


class AutomorphismCapExceeded(RuntimeError):
    def __init__(self, msg: str, partial: list):
        super().__init__(msg)
        self.partial = partial


def automorphism_group(L: Lattice, cap: int = GROUP_CAP) -> list[list[list[int]]]:
    """All integer U with U G U^T = G (rows of U are the images of the basis)."""
    n = L.rank
    s = la.denominator_lcm(L.gram)
    G = [[int(x * s) for x in row] for row in L.gram]
    diag = [G[i][i] for i in range(n)]
    vl = enumerate_vectors(G, max(diag), primitive_only=False)
    by_norm: dict[int, list[list[int]]] = {}
    for v, nv in zip(vl.vectors, vl.norms):
        by_norm.setdefault(int(nv), []).extend([list(v), [-x for x in v]])
    cands = [by_norm.get(d, []) for d in diag]

    def ip(u, v):
        return la.bilinear(u, G, v)

    out: list[list[list[int]]] = []
    rows: list[list[int]] = []

    def rec(i: int):
        if i == n:
            out.append([r[:] for r in rows])
            if len(out) > cap:
                raise AutomorphismCapExceeded("automorphism group exceeds the cap", out[: min(len(out), 16)])
            return
        for v in cands[i]:
            if all(ip(v, rows[j]) == G[i][j] for j in range(i)):
                rows.append(v)
                rec(i + 1)
                rows.pop()

    rec(0)
    return out


def commutant_dimension(group: Sequence[Sequence[Sequence[int]]]) -> int:
    """dim_Q { X : X U = U X for every U in the group }."""
    if not group:
        raise ValueError("empty group")
    n = len(group[0])
    eqs = []
    for U in group:
        # (XU - UX)_{ab} = sum_c X_ac U_cb - U_ac X_cb
        for a in range(n):
            for b in range(n):
                row = [0] * (n * n)
                for c in range(n):
                    row[a * n + c] += U[c][b]
                    row[c * n + b] -= U[a][c]
                if any(row):
                    eqs.append(row)
    if not eqs:
        return n * n
    return n * n - la.rank(eqs)


def is_absolutely_irreducible(group: Sequence[Sequence[Sequence[int]]]) -> bool:
    return commutant_dimension(group) == 1
