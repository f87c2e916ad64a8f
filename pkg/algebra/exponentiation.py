import numbers
from typing import Callable, TypeVar

from utils.errors import DomainError

T = TypeVar("T")
BinaryOp = Callable[[T, T], T]


def check_exponent(n) -> int:
    """Positive integer exponents only: the semigroups here have no identity."""
    if isinstance(n, bool) or not isinstance(n, numbers.Integral):
        raise DomainError(f"Exponent must be an integer, got {n!r}")
    if n < 1:
        raise DomainError(f"Exponent must be at least 1, got {n}")
    return int(n)


def square_and_multiply(element: T, n: int, op: BinaryOp) -> T:
    """
    Computes the n-th power of ``element`` under ``op`` with O(log n) operations.

    Bits are processed most significant first. Only meaningful when ``op`` is
    associative.
    """
    n = check_exponent(n)
    result = element
    for bit in bin(n)[3:]:
        result = op(result, result)
        if bit == "1":
            result = op(result, element)
    return result


def power_right_to_left(element: T, n: int, op: BinaryOp) -> T:
    """Same power as ``square_and_multiply`` but scanning bits least significant first."""
    n = check_exponent(n)
    result = None
    base = element
    while n:
        if n & 1:
            result = base if result is None else op(result, base)
        n >>= 1
        if n:
            base = op(base, base)
    return result


def fold_left(element: T, n: int, op: BinaryOp) -> T:
    """((x·x)·x)··· with n factors."""
    n = check_exponent(n)
    result = element
    for _ in range(n - 1):
        result = op(result, element)
    return result


def fold_right(element: T, n: int, op: BinaryOp) -> T:
    """x·(x·(x···)) with n factors."""
    n = check_exponent(n)
    result = element
    for _ in range(n - 1):
        result = op(element, result)
    return result
