"""
Exact min-plus (tropical) arithmetic over the integers extended with +infinity.

Scalars are plain Python ints (unbounded) or the ``INF`` singleton. Matrices keep
their entries in read-only numpy object arrays, so every operation below is a pure
function of immutable values and the integers never overflow.
"""

import functools
import numbers
from typing import Iterable, Sequence, Union

import numpy as np

from utils.errors import DimensionError, DomainError


@functools.total_ordering
class TropicalInfinity:
    """The additive identity of the min-plus semiring, greater than every integer."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __reduce__(self):
        return TropicalInfinity, ()

    @staticmethod
    def _comparable(other) -> bool:
        return isinstance(other, TropicalInfinity) or (
            isinstance(other, int) and not isinstance(other, bool)
        )

    def __add__(self, other):
        if self._comparable(other):
            return self
        return NotImplemented

    __radd__ = __add__

    def __eq__(self, other):
        return isinstance(other, TropicalInfinity)

    def __lt__(self, other):
        if self._comparable(other):
            return False
        return NotImplemented

    def __hash__(self):
        return hash("tropical-infinity")

    def __repr__(self):
        return "INF"

    def __str__(self):
        return "inf"


INF = TropicalInfinity()

TropicalScalar = Union[int, TropicalInfinity]


def to_scalar(value) -> TropicalScalar:
    """
    Normalizes a value into a tropical scalar.

    :param value: int, numpy integer, INF or float infinity.
    :return: a Python int or INF.
    """
    if isinstance(value, TropicalInfinity):
        return value
    if isinstance(value, bool):
        raise DomainError(f"Booleans are not tropical scalars: {value!r}")
    if isinstance(value, numbers.Integral):
        return int(value)
    if isinstance(value, float) and value == float("inf"):
        return INF
    raise DomainError(f"Not a tropical scalar: {value!r}")


def trop_add(x: TropicalScalar, y: TropicalScalar) -> TropicalScalar:
    """x ⊕ y = min(x, y)."""
    return min(x, y)


def trop_mul(x: TropicalScalar, y: TropicalScalar) -> TropicalScalar:
    """x ⊗ y = x + y, absorbed by INF."""
    return x + y


def _freeze(array: np.ndarray) -> np.ndarray:
    array.flags.writeable = False
    return array


def _rows_to_array(rows: Iterable[Sequence], convert) -> np.ndarray:
    rows = [list(row) for row in rows]
    order = len(rows)
    if order == 0:
        raise DimensionError("A matrix needs at least one row")
    if any(len(row) != order for row in rows):
        raise DimensionError(
            f"Matrix is not square: row lengths {[len(r) for r in rows]}"
        )
    array = np.empty((order, order), dtype=object)
    for i, row in enumerate(rows):
        for j, value in enumerate(row):
            array[i, j] = convert(value)
    return array


class TropicalMatrix:
    """An immutable square matrix over the min-plus semiring."""

    __slots__ = ("_entries", "_key")

    def __init__(self, rows: Iterable[Sequence]):
        self._entries = _freeze(_rows_to_array(rows, to_scalar))
        self._key = None

    @classmethod
    def _wrap(cls, array: np.ndarray) -> "TropicalMatrix":
        matrix = cls.__new__(cls)
        matrix._entries = _freeze(array)
        matrix._key = None
        return matrix

    @classmethod
    def identity(cls, order: int) -> "TropicalMatrix":
        """0 on the diagonal, INF elsewhere: the ⊗-identity."""
        array = np.full((order, order), INF, dtype=object)
        for i in range(order):
            array[i, i] = 0
        return cls._wrap(array)

    @classmethod
    def infinite(cls, order: int) -> "TropicalMatrix":
        """All entries INF: the ⊕-identity."""
        return cls._wrap(np.full((order, order), INF, dtype=object))

    @classmethod
    def zeros(cls, order: int) -> "TropicalMatrix":
        array = np.empty((order, order), dtype=object)
        array.fill(0)
        return cls._wrap(array)

    @property
    def order(self) -> int:
        return self._entries.shape[0]

    @property
    def entries(self) -> np.ndarray:
        return self._entries

    @property
    def T(self) -> "TropicalMatrix":
        return transpose(self)

    def key(self) -> tuple:
        """Hashable canonical form (row-major tuple of tuples)."""
        if self._key is None:
            self._key = tuple(tuple(row) for row in self._entries.tolist())
        return self._key

    def tolist(self) -> list:
        return [list(row) for row in self.key()]

    def is_finite(self) -> bool:
        return not any(isinstance(v, TropicalInfinity) for row in self.key() for v in row)

    def __getitem__(self, index):
        return self._entries[index]

    def __eq__(self, other):
        if not isinstance(other, TropicalMatrix):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __add__(self, other: "TropicalMatrix") -> "TropicalMatrix":
        return mat_add(self, other)

    def __mul__(self, other: "TropicalMatrix") -> "TropicalMatrix":
        return mat_mul(self, other)

    def __repr__(self):
        return f"TropicalMatrix({self.tolist()!r})"


class DifferenceMatrix:
    """An immutable square matrix of plain integers under classical arithmetic."""

    __slots__ = ("_entries", "_key")

    def __init__(self, rows: Iterable[Sequence]):
        self._entries = _freeze(_rows_to_array(rows, _to_finite_int))
        self._key = None

    @classmethod
    def _wrap(cls, array: np.ndarray) -> "DifferenceMatrix":
        matrix = cls.__new__(cls)
        matrix._entries = _freeze(array)
        matrix._key = None
        return matrix

    @classmethod
    def zeros(cls, order: int) -> "DifferenceMatrix":
        array = np.empty((order, order), dtype=object)
        array.fill(0)
        return cls._wrap(array)

    @classmethod
    def sum_of(cls, diffs: Iterable["DifferenceMatrix"], order: int) -> "DifferenceMatrix":
        """Classical sum of a (possibly empty) run of difference matrices."""
        total = cls.zeros(order)
        for diff in diffs:
            total = total + diff
        return total

    @property
    def order(self) -> int:
        return self._entries.shape[0]

    @property
    def entries(self) -> np.ndarray:
        return self._entries

    def key(self) -> tuple:
        if self._key is None:
            self._key = tuple(tuple(row) for row in self._entries.tolist())
        return self._key

    def tolist(self) -> list:
        return [list(row) for row in self.key()]

    def is_zero(self) -> bool:
        return all(v == 0 for row in self.key() for v in row)

    def add_to(self, matrix: TropicalMatrix) -> TropicalMatrix:
        """Classical entrywise ``matrix + self``; the matrix must be finite."""
        _check_same_order(matrix, self)
        if not matrix.is_finite():
            raise DomainError("Classical addition needs a matrix without INF entries")
        return TropicalMatrix._wrap(matrix.entries + self._entries)

    def __getitem__(self, index):
        return self._entries[index]

    def __add__(self, other: "DifferenceMatrix") -> "DifferenceMatrix":
        if not isinstance(other, DifferenceMatrix):
            return NotImplemented
        _check_same_order(self, other)
        return DifferenceMatrix._wrap(self._entries + other._entries)

    def __sub__(self, other: "DifferenceMatrix") -> "DifferenceMatrix":
        if not isinstance(other, DifferenceMatrix):
            return NotImplemented
        _check_same_order(self, other)
        return DifferenceMatrix._wrap(self._entries - other._entries)

    def __mul__(self, factor: int) -> "DifferenceMatrix":
        if isinstance(factor, bool) or not isinstance(factor, numbers.Integral):
            return NotImplemented
        return DifferenceMatrix._wrap(self._entries * int(factor))

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, DifferenceMatrix):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"DifferenceMatrix({self.tolist()!r})"


def _to_finite_int(value) -> int:
    scalar = to_scalar(value)
    if isinstance(scalar, TropicalInfinity):
        raise DomainError("Difference matrices cannot hold INF")
    return scalar


def _check_same_order(*matrices) -> None:
    orders = {m.order for m in matrices}
    if len(orders) > 1:
        raise DimensionError(f"Matrix orders differ: {sorted(orders)}")


def mat_add(y: TropicalMatrix, z: TropicalMatrix) -> TropicalMatrix:
    """Y ⊕ Z, the entrywise minimum."""
    _check_same_order(y, z)
    return TropicalMatrix._wrap(np.minimum(y.entries, z.entries))


def mat_mul(y: TropicalMatrix, z: TropicalMatrix) -> TropicalMatrix:
    """Y ⊗ Z with X_ij = min_k (Y_ik + Z_kj)."""
    _check_same_order(y, z)
    sums = y.entries[:, :, None] + z.entries[None, :, :]
    return TropicalMatrix._wrap(np.min(sums, axis=1))


def adjoint(x: TropicalMatrix, h: TropicalMatrix) -> TropicalMatrix:
    """X ∘ H = X ⊕ H ⊕ (X ⊗ H)."""
    _check_same_order(x, h)
    return mat_add(mat_add(x, h), mat_mul(x, h))


def mat_sub_classical(p: TropicalMatrix, q: TropicalMatrix) -> DifferenceMatrix:
    """
    Classical entrywise difference P - Q.

    :raises DomainError: if either operand holds an INF entry.
    """
    _check_same_order(p, q)
    if not (p.is_finite() and q.is_finite()):
        raise DomainError(
            "Classical subtraction is undefined for INF entries; "
            "the sequence left the finite regime"
        )
    return DifferenceMatrix._wrap(p.entries - q.entries)


def transpose(m: TropicalMatrix) -> TropicalMatrix:
    return TropicalMatrix._wrap(m.entries.T.copy())
