"""
JSON encoding for matrices, pairs, transcripts and reports.

Matrices are encoded as ``{"order": n, "entries": [[...], ...]}`` in row-major
order. INF is the string ``"inf"``; finite entries are JSON integers, or decimal
strings once they leave the signed 64-bit range. Exponents are always decimal
strings.
"""

import json
import re

from algebra.tropical_core import (
    INF,
    DifferenceMatrix,
    TropicalInfinity,
    TropicalMatrix,
)
from utils.errors import DimensionError, DomainError, InstanceFormatError

INT64_MIN = -(2**63)
INT64_MAX = 2**63 - 1
INF_TOKEN = "inf"

_DECIMAL = re.compile(r"^-?\d+$")


def scalar_to_json(value):
    if isinstance(value, TropicalInfinity):
        return INF_TOKEN
    if INT64_MIN <= value <= INT64_MAX:
        return value
    return str(value)


def scalar_from_json(value):
    if isinstance(value, bool):
        raise InstanceFormatError(f"Invalid matrix entry: {value!r}")
    if isinstance(value, int):
        return value
    if isinstance(value, str):
        token = value.strip()
        if token.lower() == INF_TOKEN:
            return INF
        if _DECIMAL.match(token):
            return int(token)
    raise InstanceFormatError(f"Invalid matrix entry: {value!r}")


def _entries_to_json(matrix) -> dict:
    return {
        "order": matrix.order,
        "entries": [[scalar_to_json(v) for v in row] for row in matrix.key()],
    }


def matrix_to_json(matrix: TropicalMatrix) -> dict:
    return _entries_to_json(matrix)


def difference_to_json(diff: DifferenceMatrix) -> dict:
    return _entries_to_json(diff)


def matrix_from_json(data) -> TropicalMatrix:
    """
    Decodes a matrix object, checking that ``order`` matches the entries.

    :raises InstanceFormatError: on any structural or value problem.
    """
    if not isinstance(data, dict) or "entries" not in data:
        raise InstanceFormatError("Matrix object needs an 'entries' field")
    entries = data["entries"]
    if not isinstance(entries, list) or not all(isinstance(r, list) for r in entries):
        raise InstanceFormatError("'entries' must be an array of arrays")
    try:
        matrix = TropicalMatrix([[scalar_from_json(v) for v in row] for row in entries])
    except (DimensionError, DomainError) as e:
        raise InstanceFormatError(f"Invalid matrix: {e}") from e
    order = data.get("order", matrix.order)
    if order != matrix.order:
        raise InstanceFormatError(
            f"Declared order {order!r} does not match entries of order {matrix.order}"
        )
    return matrix


def exponent_to_json(n: int) -> str:
    return str(n)


def exponent_from_json(value) -> int:
    if isinstance(value, bool):
        raise InstanceFormatError(f"Invalid exponent: {value!r}")
    if isinstance(value, str) and _DECIMAL.match(value.strip()):
        value = int(value.strip())
    if not isinstance(value, int) or value < 1:
        raise InstanceFormatError(f"Exponent must be a positive integer: {value!r}")
    return value


def pair_to_json(pair) -> dict:
    return {"m": matrix_to_json(pair.m), "h": matrix_to_json(pair.h)}


def transcript_to_dict(transcript) -> dict:
    return {
        "m": matrix_to_json(transcript.m),
        "h": matrix_to_json(transcript.h),
        "a": exponent_to_json(transcript.a),
        "b": exponent_to_json(transcript.b),
        "m_a": matrix_to_json(transcript.m_a),
        "m_b": matrix_to_json(transcript.m_b),
        "h_a": matrix_to_json(transcript.h_a),
        "h_b": matrix_to_json(transcript.h_b),
        "key_alice": matrix_to_json(transcript.key_alice),
        "key_bob": matrix_to_json(transcript.key_bob),
        "keys_agree": transcript.keys_agree,
    }


def witness_to_dict(witness) -> dict:
    return {
        "p": pair_to_json(witness.p),
        "q": pair_to_json(witness.q),
        "r": pair_to_json(witness.r),
        "left": pair_to_json(witness.left),
        "right": pair_to_json(witness.right),
    }


def load_json(path: str):
    """Reads a JSON document, turning parse errors into InstanceFormatError."""
    try:
        with open(path, "r") as f:
            return json.load(f)
    except json.JSONDecodeError as e:
        raise InstanceFormatError(f"{path} is not valid JSON: {e}") from e


def dump_json(data, path: str) -> None:
    with open(path, "w") as f:
        json.dump(data, f, indent=2)
        f.write("\n")


def load_matrix(path: str) -> TropicalMatrix:
    return matrix_from_json(load_json(path))
