import operator

import pytest

from algebra.exponentiation import (
    check_exponent,
    fold_left,
    fold_right,
    power_right_to_left,
    square_and_multiply,
)
from utils.errors import DomainError


def concat(x, y):
    return x + y


@pytest.mark.parametrize("n", [1, 2, 3, 7, 8, 63, 64, 1000])
def test_powers_of_an_integer_under_addition(n):
    assert square_and_multiply(3, n, operator.add) == 3 * n
    assert power_right_to_left(3, n, operator.add) == 3 * n
    assert fold_left(3, n, operator.add) == 3 * n


def test_huge_exponent_uses_logarithmic_steps():
    calls = []

    def counting_add(x, y):
        calls.append(1)
        return x + y

    n = 2**64 + 5
    assert square_and_multiply(1, n, counting_add) == n
    assert len(calls) <= 2 * n.bit_length()


def test_fold_orders_differ_for_a_non_commutative_operation():
    assert fold_left("ab", 3, concat) == "ababab"
    assert fold_right("ab", 3, concat) == "ababab"

    def bracket(x, y):
        return f"({x}{y})"

    assert fold_left("x", 3, bracket) == "((xx)x)"
    assert fold_right("x", 3, bracket) == "(x(xx))"
    assert square_and_multiply("x", 3, bracket) == "((xx)x)"
    assert square_and_multiply("x", 4, bracket) == "((xx)(xx))"


@pytest.mark.parametrize("bad", [0, -1, True, 2.0, "3"])
def test_check_exponent_rejects(bad):
    with pytest.raises(DomainError):
        check_exponent(bad)


@pytest.mark.parametrize("power", [square_and_multiply, power_right_to_left, fold_left, fold_right])
def test_zero_exponent_is_rejected(power):
    with pytest.raises(DomainError):
        power(1, 0, operator.add)
