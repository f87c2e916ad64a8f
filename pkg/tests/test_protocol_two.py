import pytest

from algebra.tropical_core import TropicalMatrix, mat_add, mat_mul
from protocols.protocol_two import (
    AssocWitness,
    FoldOrder,
    PairTwo,
    check_associativity,
    derive_key2,
    fold_power_left,
    fold_power_right,
    pair_op2,
    published_counterexample,
    power2,
    run_exchange2,
    sample_violations,
)
from utils.errors import DimensionError, DomainError

SQUARE = PairTwo(
    TropicalMatrix([[-3, -2], [-1, -3]]), TropicalMatrix([[-2, -2], [0, -2]])
)
RIGHT_FOLD = PairTwo(
    TropicalMatrix([[-3, -2], [-3, -3]]), TropicalMatrix([[-2, -4], [-2, -2]])
)
LEFT_FOLD = PairTwo(
    TropicalMatrix([[-4, -5], [-3, -4]]), TropicalMatrix([[-2, -4], [-2, -2]])
)


@pytest.fixture
def pair():
    return published_counterexample()


def test_pair_op2_definition(pair):
    q = PairTwo(TropicalMatrix([[1, 0], [2, 3]]), TropicalMatrix([[0, 4], [-1, 1]]))
    product = pair_op2(pair, q)
    m_t = pair.m.T
    assert product.m == mat_add(mat_add(mat_mul(q.h, m_t), mat_mul(m_t, q.h)), q.m)
    assert product.h == mat_mul(pair.h, q.h)


def test_pair_rejects_mixed_orders():
    with pytest.raises(DimensionError):
        PairTwo(TropicalMatrix.zeros(1), TropicalMatrix.zeros(2))


def test_published_square(pair):
    assert pair_op2(pair, pair) == SQUARE


def test_published_cubes_differ(pair):
    assert fold_power_right(pair, 3) == RIGHT_FOLD
    assert fold_power_left(pair, 3) == LEFT_FOLD
    assert LEFT_FOLD != RIGHT_FOLD


def test_check_associativity_returns_witness(pair):
    witness = check_associativity(pair, pair, pair)
    assert witness is not None
    assert witness.left == LEFT_FOLD
    assert witness.right == RIGHT_FOLD
    assert witness.m_differs
    assert not witness.h_differs
    assert witness.to_dict()["left"]["m"]["entries"] == [[-4, -5], [-3, -4]]


def test_check_associativity_none_when_groupings_agree():
    zero = PairTwo(TropicalMatrix.zeros(2), TropicalMatrix.zeros(2))
    assert check_associativity(zero, zero, zero) is None


def test_witness_requires_disagreement(pair):
    with pytest.raises(DomainError):
        AssocWitness(p=pair, q=pair, r=pair, left=SQUARE, right=SQUARE)


def test_power2_depends_on_fold(pair):
    assert power2(pair, 3, FoldOrder.LEFT) == LEFT_FOLD
    assert power2(pair, 3, FoldOrder.RIGHT) == RIGHT_FOLD
    assert power2(pair, 3, FoldOrder.SQUARE_AND_MULTIPLY) == LEFT_FOLD
    assert power2(pair, 1, FoldOrder.RIGHT) == pair


def test_exchange_reports_fold_and_key_agreement(pair):
    transcript = run_exchange2(pair.m, pair.h, 4, 4, FoldOrder.RIGHT)
    assert transcript.keys_agree
    data = transcript.to_dict()
    assert data["fold"] == "right"
    assert data["a"] == "4"
    alice = fold_power_right(pair, 4)
    assert transcript.m_a == alice.m
    assert transcript.key_alice == derive_key2(transcript.m_b, alice.h, alice.m)


def test_exchange_rejects_zero_exponent(pair):
    with pytest.raises(DomainError):
        run_exchange2(pair.m, pair.h, 0, 2, FoldOrder.LEFT)


def test_sampling_finds_violations():
    witnesses = sample_violations(seed=0, samples=200)
    assert witnesses
    for witness in witnesses:
        assert witness.left != witness.right
        assert witness.left == pair_op2(pair_op2(witness.p, witness.q), witness.r)


def test_sampling_is_deterministic_and_can_stop_early():
    first = sample_violations(seed=3, samples=100)
    second = sample_violations(seed=3, samples=100)
    assert [w.to_dict() for w in first] == [w.to_dict() for w in second]
    assert len(sample_violations(seed=3, samples=100, stop_after=1)) == 1


def test_folds_agree_up_to_two_and_differ_at_four(pair):
    for n in (1, 2):
        assert fold_power_left(pair, n) == fold_power_right(pair, n)
    assert fold_power_left(pair, 4) != fold_power_right(pair, 4)


def test_fold_powers_reject_zero(pair):
    with pytest.raises(DomainError):
        fold_power_left(pair, 0)
    with pytest.raises(DomainError):
        fold_power_right(pair, 0)
