import pytest

from algebra.tropical_core import INF, TropicalMatrix
from utils.errors import InstanceFormatError
from utils.serialization import (
    dump_json,
    exponent_from_json,
    load_json,
    load_matrix,
    matrix_from_json,
    matrix_to_json,
    scalar_from_json,
    scalar_to_json,
)


def test_scalar_encoding():
    assert scalar_to_json(INF) == "inf"
    assert scalar_to_json(-5) == -5
    assert scalar_to_json(2**63) == str(2**63)
    assert scalar_to_json(-(2**63)) == -(2**63)


@pytest.mark.parametrize("value, expected", [("inf", INF), (" INF ", INF), ("-12", -12), (7, 7)])
def test_scalar_decoding(value, expected):
    assert scalar_from_json(value) == expected


@pytest.mark.parametrize("value", [True, 1.5, "1e3", None, "infinity"])
def test_scalar_decoding_rejects(value):
    with pytest.raises(InstanceFormatError):
        scalar_from_json(value)


def test_matrix_encoding():
    matrix = TropicalMatrix([[0, INF], [2**70, -1]])
    data = matrix_to_json(matrix)
    assert data == {"order": 2, "entries": [[0, "inf"], [str(2**70), -1]]}
    assert matrix_from_json(data) == matrix


@pytest.mark.parametrize(
    "data",
    [
        {"order": 2},
        {"entries": [1, 2]},
        {"entries": [[1, 2], [3]]},
        {"order": 3, "entries": [[1, 2], [3, 4]]},
        {"entries": [[1.5]]},
        "matrix",
    ],
)
def test_matrix_decoding_rejects(data):
    with pytest.raises(InstanceFormatError):
        matrix_from_json(data)


def test_exponents():
    assert exponent_from_json("123456789012345678901234567890") == 123456789012345678901234567890
    assert exponent_from_json(5) == 5
    for bad in (0, "-3", True, "abc", 2.5):
        with pytest.raises(InstanceFormatError):
            exponent_from_json(bad)


def test_files(tmp_path):
    path = tmp_path / "m.json"
    dump_json(matrix_to_json(TropicalMatrix([[1, INF], [0, 2]])), str(path))
    assert path.read_text().endswith("}\n")
    assert load_matrix(str(path)) == TropicalMatrix([[1, INF], [0, 2]])

    broken = tmp_path / "broken.json"
    broken.write_text("{")
    with pytest.raises(InstanceFormatError):
        load_json(str(broken))
