"""JSON file formats for lattices, tensor subspaces, filtrations and IQ vectors.

Rationals are written as integers, as {"n": .., "d": ..} objects, or as
"n/d" strings. Errors name the offending field path.
"""
from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Any

from .filtrations import RFiltration
from .iq import IQVector, ring
from .lattice import Lattice
from .tensor import TensorSubspace


class FormatError(ValueError):
    pass


def _fail(path: str, msg: str):
    raise FormatError(f"{path or '<root>'}: {msg}")


def read_json(path: str | Path) -> Any:
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise FormatError(f"{p}: cannot read ({exc.strerror})") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{p}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None


def parse_rational(x: Any, path: str) -> Fraction:
    if isinstance(x, bool):
        _fail(path, "expected a rational, got a boolean")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError):
            _fail(path, f"cannot parse rational {x!r}")
    if isinstance(x, dict):
        if set(x) != {"n", "d"} or not all(isinstance(x[k], int) and not isinstance(x[k], bool) for k in "nd"):
            _fail(path, 'rational objects need integer fields "n" and "d"')
        if x["d"] == 0:
            _fail(path, "zero denominator")
        return Fraction(x["n"], x["d"])
    _fail(path, f"expected a rational, got {type(x).__name__}")


def parse_matrix(x: Any, path: str, square: bool = False) -> list[list[Fraction]]:
    if not isinstance(x, list) or not x:
        _fail(path, "expected a non-empty list of rows")
    rows = []
    for i, row in enumerate(x):
        if not isinstance(row, list):
            _fail(f"{path}[{i}]", "expected a list")
        rows.append([parse_rational(v, f"{path}[{i}][{j}]") for j, v in enumerate(row)])
    width = len(rows[0])
    for i, row in enumerate(rows):
        if len(row) != width:
            _fail(f"{path}[{i}]", f"row has {len(row)} entries, expected {width}")
    if square and width != len(rows):
        _fail(path, "matrix is not square")
    return rows


def _field(obj: dict, key: str, path: str) -> Any:
    if not isinstance(obj, dict):
        _fail(path, "expected an object")
    if key not in obj:
        _fail(path, f"missing field {key!r}")
    return obj[key]


def parse_lattice(obj: Any, path: str = "") -> Lattice:
    gram = parse_matrix(_field(obj, "gram", path), f"{path}.gram".lstrip("."), square=True)
    label = obj.get("label", "")
    try:
        return Lattice(gram, str(label))
    except ValueError as exc:
        _fail(f"{path}.gram".lstrip("."), str(exc))


def _resolve(obj: Any, base: Path | None, path: str) -> Any:
    if isinstance(obj, str):
        p = Path(obj)
        if base is not None and not p.is_absolute():
            p = base / p
        return read_json(p)
    return obj


def parse_tensor_subspace(obj: Any, path: str = "", base: Path | None = None) -> TensorSubspace:
    left = parse_lattice(_resolve(_field(obj, "left", path), base, path), f"{path}.left".lstrip("."))
    right = parse_lattice(_resolve(_field(obj, "right", path), base, path), f"{path}.right".lstrip("."))
    gens = _field(obj, "generators", path)
    if not isinstance(gens, list) or not gens:
        _fail(f"{path}.generators".lstrip("."), "expected a non-empty list of matrices")
    mats = []
    for k, g in enumerate(gens):
        p = f"{path}.generators[{k}]".lstrip(".")
        M = parse_matrix(g, p)
        if len(M) != left.rank or len(M[0]) != right.rank:
            _fail(p, f"expected a {left.rank}x{right.rank} matrix")
        mats.append(M)
    try:
        return TensorSubspace(left, right, mats)
    except ValueError as exc:
        _fail(f"{path}.generators".lstrip("."), str(exc))


def parse_filtration(obj: Any, path: str = "") -> RFiltration:
    dim = _field(obj, "dim", path)
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 0:
        _fail(f"{path}.dim".lstrip("."), "expected a non-negative integer")
    steps = _field(obj, "steps", path)
    if not isinstance(steps, list):
        _fail(f"{path}.steps".lstrip("."), "expected a list")
    parsed = []
    for k, st in enumerate(steps):
        p = f"{path}.steps[{k}]".lstrip(".")
        B = parse_matrix(_field(st, "basis", p), f"{p}.basis")
        if len(B[0]) != dim:
            _fail(f"{p}.basis", f"vectors must have {dim} coordinates")
        parsed.append((B, parse_rational(_field(st, "weight", p), f"{p}.weight")))
    try:
        return RFiltration.from_flag(dim, parsed)
    except ValueError as exc:
        _fail(f"{path}.steps".lstrip("."), str(exc))


def parse_iq_vector(obj: Any, path: str = "") -> IQVector:
    tag = _field(obj, "ring", path)
    try:
        R = ring(str(tag))
    except ValueError as exc:
        _fail(f"{path}.ring".lstrip("."), str(exc))
    coords = _field(obj, "coords", path)
    if not isinstance(coords, list) or not coords:
        _fail(f"{path}.coords".lstrip("."), "expected a non-empty list of [a, b] pairs")
    out = []
    for k, c in enumerate(coords):
        if not (isinstance(c, list) and len(c) == 2 and all(isinstance(x, int) and not isinstance(x, bool) for x in c)):
            _fail(f"{path}.coords[{k}]".lstrip("."), "expected a pair of integers")
        out.append((c[0], c[1]))
    return IQVector(R, tuple(out))


# ------------------------------------------------------------ writing


def rational_json(x) -> Any:
    x = Fraction(x)
    return x.numerator if x.denominator == 1 else {"n": x.numerator, "d": x.denominator}


def matrix_json(M) -> list:
    return [[rational_json(v) for v in row] for row in M]


def lattice_json(L: Lattice) -> dict:
    return {"label": L.label, "gram": matrix_json(L.gram)}


def tensor_subspace_json(V: TensorSubspace) -> dict:
    return {"left": lattice_json(V.left), "right": lattice_json(V.right), "generators": [matrix_json(g) for g in V.generators]}


def filtration_json(F: RFiltration) -> dict:
    return {"dim": F.dim, "steps": [{"basis": matrix_json(S), "weight": rational_json(w)} for S, w in zip(F.steps, F.weights)]}


def iq_vector_json(v: IQVector) -> dict:
    return {"ring": v.ring.name.lower(), "coords": [list(c) for c in v.coords]}


def load_lattice(path: str | Path) -> Lattice:
    return parse_lattice(read_json(path))


def load_tensor_subspace(path: str | Path) -> TensorSubspace:
    return parse_tensor_subspace(read_json(path), base=Path(path).parent)


def load_filtration(path: str | Path) -> RFiltration:
    return parse_filtration(read_json(path))


def load_iq_vector(path: str | Path) -> IQVector:
    return parse_iq_vector(read_json(path))
