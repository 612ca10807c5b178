import json
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from slopelab import formats
from slopelab.filtrations import RFiltration
from slopelab.formats import FormatError
from slopelab.iq import IQVector, RINGS
from slopelab.tensor import TensorSubspace

from conftest import filtrations, int_matrices, lattices


def roundtrip(obj):
    return json.loads(json.dumps(obj))


@given(lattices(max_rank=4))
def test_lattice_roundtrip(L):
    assert formats.parse_lattice(roundtrip(formats.lattice_json(L))).gram == L.gram


@given(filtrations())
def test_filtration_roundtrip(F):
    assert formats.parse_filtration(roundtrip(formats.filtration_json(F))) == F


@given(st.fractions(max_denominator=1000))
def test_rational_roundtrip(x):
    assert formats.parse_rational(roundtrip(formats.rational_json(x)), "x") == x
    assert formats.parse_rational(f"{x.numerator}/{x.denominator}", "x") == x


@given(lattices(max_rank=2), lattices(max_rank=2), st.data())
def test_tensor_subspace_roundtrip(E, F, data):
    gens = [data.draw(int_matrices(E.rank, F.rank, 2).filter(lambda M: any(any(r) for r in M)))]
    V = TensorSubspace(E, F, gens)
    W = formats.parse_tensor_subspace(roundtrip(formats.tensor_subspace_json(V)))
    assert W.basis() == V.basis() and W.left.gram == E.gram


@given(st.sampled_from(list(RINGS)), st.lists(st.tuples(st.integers(-5, 5), st.integers(-5, 5)), min_size=1, max_size=4))
def test_iq_roundtrip(tag, cs):
    v = IQVector(RINGS[tag], tuple(cs))
    assert formats.parse_iq_vector(roundtrip(formats.iq_vector_json(v))) == v


@pytest.mark.parametrize(
    "obj, msg",
    [
        ({"gram": [[1, 2], [3]]}, "gram[1]: row has 1 entries"),
        ({"gram": [[1, {"n": 1}]]}, "gram[0][1]"),
        ({"gram": [[1, 0], [0, 1]], "x": 1, "label": "ok"}, None),
        ({"gram": [[1, True]]}, "gram[0][1]: expected a rational, got a boolean"),
        ({"gram": [[1, 2], [2, 1]]}, "gram:"),
        ({}, "missing field 'gram'"),
        ({"gram": [[{"n": 1, "d": 0}]]}, "zero denominator"),
    ],
)
def test_lattice_errors(obj, msg):
    if msg is None:
        formats.parse_lattice(obj)
        return
    with pytest.raises(FormatError, match=msg.replace("[", r"\[").replace("]", r"\]")):
        formats.parse_lattice(obj)


def test_filtration_errors():
    with pytest.raises(FormatError, match=r"steps\[0\].basis"):
        formats.parse_filtration({"dim": 2, "steps": [{"basis": [[1, 0, 0]], "weight": 1}]})
    with pytest.raises(FormatError, match="steps"):
        formats.parse_filtration({"dim": 2, "steps": [{"basis": [[1, 0]], "weight": 0}, {"basis": [[1, 0], [0, 1]], "weight": 1}]})


def test_tensor_subspace_file_references(tmp_path):
    (tmp_path / "e.json").write_text('{"label": "E", "gram": [[2, 1], [1, 2]]}')
    (tmp_path / "v.json").write_text('{"left": "e.json", "right": {"gram": [[1]]}, "generators": [[[1], [1]]]}')
    V = formats.load_tensor_subspace(tmp_path / "v.json")
    assert V.left.label == "E" and V.dim == 1
    (tmp_path / "w.json").write_text('{"left": "e.json", "right": {"gram": [[1]]}, "generators": [[[1, 0], [1, 0]]]}')
    with pytest.raises(FormatError, match=r"generators\[0\]: expected a 2x1 matrix"):
        formats.load_tensor_subspace(tmp_path / "w.json")


def test_json_syntax_error_reports_position(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text('{"gram": [[1, 0],\n [0 1]]}')
    with pytest.raises(FormatError, match="line 2 column"):
        formats.load_lattice(p)


def test_iq_errors():
    with pytest.raises(FormatError, match="ring"):
        formats.parse_iq_vector({"ring": "z5", "coords": [[1, 0]]})
    with pytest.raises(FormatError, match=r"coords\[1\]"):
        formats.parse_iq_vector({"ring": "gauss", "coords": [[1, 0], [1]]})


def test_trivial_filtration_file():
    F = formats.parse_filtration({"dim": 1, "steps": [{"basis": [[1]], "weight": {"n": 1, "d": 2}}]})
    assert F == RFiltration.trivial(1, Fraction(1, 2))
