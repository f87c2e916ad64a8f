"""
The second protocol's pair operation and why it cannot be exponentiated.

The operation ((H ⊗ Mᵀ) ⊕ (Mᵀ ⊗ H) ⊕ S, G ⊗ H) is not associative, so "(M, H)^a"
depends on how the product is bracketed. Everything here computes powers with an
explicitly chosen bracketing and reports, never assumes, key agreement.
"""

from dataclasses import dataclass
from enum import Enum
from typing import List, Optional, Sequence

import numpy as np

from algebra.exponentiation import (
    check_exponent,
    fold_left,
    fold_right,
    square_and_multiply,
)
from algebra.tropical_core import TropicalMatrix, mat_add, mat_mul, transpose
from utils.errors import DimensionError, DomainError
from utils.logger import logger
from utils.serialization import transcript_to_dict, witness_to_dict

VIOLATION_ORDERS = (2, 3, 4)
VIOLATION_ENTRY_RANGE = (-3, 3)


@dataclass(frozen=True)
class PairTwo:
    m: TropicalMatrix
    h: TropicalMatrix

    def __post_init__(self):
        if self.m.order != self.h.order:
            raise DimensionError(
                f"Pair components differ in order: {self.m.order} vs {self.h.order}"
            )

    @property
    def order(self) -> int:
        return self.m.order


class FoldOrder(Enum):
    LEFT = "left"
    RIGHT = "right"
    SQUARE_AND_MULTIPLY = "square-and-multiply"


def pair_op2(p: PairTwo, q: PairTwo) -> PairTwo:
    """(M, G)(S, H) = ((H ⊗ Mᵀ) ⊕ (Mᵀ ⊗ H) ⊕ S, G ⊗ H)."""
    m_t = transpose(p.m)
    m = mat_add(mat_add(mat_mul(q.h, m_t), mat_mul(m_t, q.h)), q.m)
    return PairTwo(m, mat_mul(p.h, q.h))


@dataclass(frozen=True)
class AssocWitness:
    """A triple whose two bracketings disagree: left = (p·q)·r, right = p·(q·r)."""

    p: PairTwo
    q: PairTwo
    r: PairTwo
    left: PairTwo
    right: PairTwo

    def __post_init__(self):
        if self.left == self.right:
            raise DomainError("Both groupings agree; this is not a witness")

    @property
    def m_differs(self) -> bool:
        return self.left.m != self.right.m

    @property
    def h_differs(self) -> bool:
        return self.left.h != self.right.h

    def to_dict(self) -> dict:
        return witness_to_dict(self)


def check_associativity(p: PairTwo, q: PairTwo, r: PairTwo) -> Optional[AssocWitness]:
    """
    Evaluates both groupings of p·q·r.

    :return: an AssocWitness when they differ, None when they agree.
    """
    left = pair_op2(pair_op2(p, q), r)
    right = pair_op2(p, pair_op2(q, r))
    if left == right:
        return None
    return AssocWitness(p=p, q=q, r=r, left=left, right=right)


def published_counterexample() -> PairTwo:
    """The pair (A, B) with A = [[0, -1], [0, 0]] and B = [[0, -2], [0, 0]]."""
    return PairTwo(
        TropicalMatrix([[0, -1], [0, 0]]),
        TropicalMatrix([[0, -2], [0, 0]]),
    )


def fold_power_left(p: PairTwo, n: int) -> PairTwo:
    return fold_left(p, n, pair_op2)


def fold_power_right(p: PairTwo, n: int) -> PairTwo:
    return fold_right(p, n, pair_op2)


def power2(p: PairTwo, n: int, fold: FoldOrder) -> PairTwo:
    """(M, H)^n under an explicit bracketing; the result depends on ``fold``."""
    if fold is FoldOrder.LEFT:
        return fold_power_left(p, n)
    if fold is FoldOrder.RIGHT:
        return fold_power_right(p, n)
    return square_and_multiply(p, n, pair_op2)


def derive_key2(
    other_m: TropicalMatrix, own_h: TropicalMatrix, own_m: TropicalMatrix
) -> TropicalMatrix:
    """K = (M_other ⊗ H_own) ⊕ M_own, as the protocol states it."""
    return mat_add(mat_mul(other_m, own_h), own_m)


@dataclass(frozen=True)
class ExchangeTranscriptTwo:
    m: TropicalMatrix
    h: TropicalMatrix
    a: int
    b: int
    fold: FoldOrder
    m_a: TropicalMatrix
    m_b: TropicalMatrix
    h_a: TropicalMatrix
    h_b: TropicalMatrix
    key_alice: TropicalMatrix
    key_bob: TropicalMatrix

    @property
    def keys_agree(self) -> bool:
        return self.key_alice == self.key_bob

    def to_dict(self) -> dict:
        data = transcript_to_dict(self)
        data["fold"] = self.fold.value
        return data


def run_exchange2(
    m: TropicalMatrix, h: TropicalMatrix, a: int, b: int, fold: FoldOrder
) -> ExchangeTranscriptTwo:
    """
    Runs the second protocol with the bracketing chosen by the caller.

    Key agreement is not guaranteed; check ``keys_agree`` on the result.
    """
    base = PairTwo(m, h)
    a, b = check_exponent(a), check_exponent(b)
    alice = power2(base, a, fold)
    bob = power2(base, b, fold)
    transcript = ExchangeTranscriptTwo(
        m=m,
        h=h,
        a=a,
        b=b,
        fold=fold,
        m_a=alice.m,
        m_b=bob.m,
        h_a=alice.h,
        h_b=bob.h,
        key_alice=derive_key2(bob.m, alice.h, alice.m),
        key_bob=derive_key2(alice.m, bob.h, bob.m),
    )
    if not transcript.keys_agree:
        logger.info(f"Protocol two keys disagree (a={a}, b={b}, fold={fold.value})")
    return transcript


def _random_pair(rng: np.random.Generator, order: int, low: int, high: int) -> PairTwo:
    def draw():
        values = rng.integers(low, high, size=(order, order), endpoint=True)
        return TropicalMatrix(values.astype(object).tolist())

    return PairTwo(draw(), draw())


def sample_violations(
    seed: int,
    samples: int = 1000,
    orders: Sequence[int] = VIOLATION_ORDERS,
    entry_range: Sequence[int] = VIOLATION_ENTRY_RANGE,
    stop_after: Optional[int] = None,
) -> List[AssocWitness]:
    """
    Draws random integer triples and collects associativity violations.

    :param seed: seed for numpy's PCG64 generator.
    :param samples: number of triples to test.
    :param orders: matrix orders to cycle through.
    :param entry_range: inclusive (low, high) for uniform entries.
    :param stop_after: stop once this many witnesses were found.
    """
    rng = np.random.default_rng(seed)
    low, high = entry_range
    witnesses = []
    draws = 0
    for index in range(samples):
        draws += 1
        order = orders[index % len(orders)]
        triple = [_random_pair(rng, order, low, high) for _ in range(3)]
        witness = check_associativity(*triple)
        if witness is not None:
            witnesses.append(witness)
            if stop_after is not None and len(witnesses) >= stop_after:
                break
    logger.debug(f"Associativity sampling: {len(witnesses)} violations in {draws} draws")
    return witnesses
