from dataclasses import dataclass

from algebra.exponentiation import check_exponent, square_and_multiply
from algebra.tropical_core import TropicalMatrix, adjoint, mat_add
from utils.errors import DimensionError
from utils.logger import logger
from utils.serialization import transcript_to_dict


@dataclass(frozen=True)
class PairOne:
    """An element (M, H) of the first protocol's semigroup."""

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


def pair_op1(p: PairOne, q: PairOne) -> PairOne:
    """(X, G)(Y, H) = ((X ∘ H) ⊕ Y, G ∘ H)."""
    return PairOne(mat_add(adjoint(p.m, q.h), q.m), adjoint(p.h, q.h))


def pair_pow1(p: PairOne, n: int) -> PairOne:
    """
    (M, H)^n by square-and-multiply.

    :param p: the base pair.
    :param n: positive exponent; 0 is rejected because the semigroup has no identity.
    :return: (M_n, H_n)
    """
    return square_and_multiply(p, n, pair_op1)


def derive_key1(
    other_m: TropicalMatrix, own_h: TropicalMatrix, own_m: TropicalMatrix
) -> TropicalMatrix:
    """K = (M_other ∘ H_own) ⊕ M_own."""
    return mat_add(adjoint(other_m, own_h), own_m)


@dataclass(frozen=True)
class ExchangeTranscript:
    m: TropicalMatrix
    h: TropicalMatrix
    a: int
    b: int
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
        return transcript_to_dict(self)


def run_exchange(
    m: TropicalMatrix, h: TropicalMatrix, a: int, b: int
) -> ExchangeTranscript:
    """Runs both sides of the first protocol honestly and returns everything they computed."""
    base = PairOne(m, h)
    a, b = check_exponent(a), check_exponent(b)

    alice = pair_pow1(base, a)
    bob = pair_pow1(base, b)

    transcript = ExchangeTranscript(
        m=m,
        h=h,
        a=a,
        b=b,
        m_a=alice.m,
        m_b=bob.m,
        h_a=alice.h,
        h_b=bob.h,
        key_alice=derive_key1(bob.m, alice.h, alice.m),
        key_bob=derive_key1(alice.m, bob.h, bob.m),
    )
    if not transcript.keys_agree:
        logger.error(f"Key mismatch in protocol one exchange (order {m.order})")
    return transcript
