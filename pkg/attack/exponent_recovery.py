import time
from dataclasses import dataclass, field
from typing import Dict, NamedTuple, Optional

from algebra.tropical_core import DifferenceMatrix, TropicalMatrix, mat_sub_classical
from attack.period_finder import (
    DEFAULT_MAX_STEPS,
    DEFAULT_VALIDATION_WINDOW,
    PeriodFinder,
    PeriodInfo,
    iter_m_sequence,
)
from protocols.protocol_one import PairOne, derive_key1, pair_pow1
from utils.errors import (
    AttackFailedError,
    DimensionError,
    DomainError,
    PeriodNotFoundError,
)
from utils.logger import logger
from utils.serialization import exponent_to_json


class RecoveryMethod:
    LOOKUP = "lookup"
    DEGENERATE = "degenerate"
    PERIODIC = "periodic"


@dataclass(frozen=True)
class ExponentSolution:
    a: int
    k: Optional[int] = None
    x: Optional[int] = None
    method: str = RecoveryMethod.PERIODIC


@dataclass(frozen=True)
class AttackResult:
    recovered_a: int
    k: Optional[int]
    x: Optional[int]
    d_used: Optional[int]
    rho_used: Optional[int]
    false_period_retries: int
    verified: bool
    method: str
    linear_factor: Optional[int] = None
    timings: Dict[str, float] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "recovered_a": exponent_to_json(self.recovered_a),
            "k": self.k,
            "x": None if self.x is None else str(self.x),
            "d": self.d_used,
            "rho": self.rho_used,
            "false_period_retries": self.false_period_retries,
            "verified": self.verified,
            "method": self.method,
            "linear_factor": self.linear_factor,
            "timings_s": {phase: round(t, 3) for phase, t in self.timings.items()},
        }


class KeyRecovery(NamedTuple):
    key: TropicalMatrix
    result: AttackResult


def _common_quotient(
    numerator: DifferenceMatrix, period_sum: DifferenceMatrix
) -> Optional[int]:
    """
    The single x with numerator = x · period_sum entrywise, if there is one.

    Entries where the period sum is 0 only constrain the numerator to be 0; every
    other entry must divide exactly and agree on the quotient.
    """
    x = None
    for num_row, den_row in zip(numerator.key(), period_sum.key()):
        for num, den in zip(num_row, den_row):
            if den == 0:
                if num != 0:
                    return None
                continue
            quotient, remainder = divmod(num, den)
            if remainder:
                return None
            if x is None:
                x = quotient
            elif quotient != x:
                return None
    return x


def solve_exponent(info: PeriodInfo, m_a: TropicalMatrix) -> Optional[ExponentSolution]:
    """
    Solves d + x·ρ + k = a for the public M_a, given a period candidate.

    With Y = M_a - M_{d+1}, the exponent a = d + x·ρ + k (1 <= k <= ρ, x >= 1)
    satisfies Y = x · Σ_{i=d+1}^{d+ρ} D_i + Σ_{i=d+1}^{d+k-1} D_i. Terms that
    are already cached are matched directly, and a period of zero differences
    resolves to a = d + 1.

    :return: the solution with the smallest k, or None when no k is consistent
        (the usual symptom of a false period).
    """
    if m_a.order != info.order:
        raise DimensionError(f"M_a has order {m_a.order}, expected {info.order}")

    for n, snapshot in enumerate(info.m_snapshots, start=1):
        if snapshot == m_a:
            return ExponentSolution(a=n, method=RecoveryMethod.LOOKUP)

    if info.is_degenerate:
        return ExponentSolution(a=info.d + 1, method=RecoveryMethod.DEGENERATE)

    try:
        y = mat_sub_classical(m_a, info.snapshot(info.d + 1))
    except DomainError:
        return None

    partial = DifferenceMatrix.zeros(info.order)
    for k in range(1, info.rho + 1):
        x = _common_quotient(y - partial, info.period_sum)
        if x is not None and x >= 1:
            return ExponentSolution(
                a=info.d + x * info.rho + k, k=k, x=x, method=RecoveryMethod.PERIODIC
            )
        partial = partial + info.diff(info.d + k)
    return None


def verify_candidate(
    m: TropicalMatrix, h: TropicalMatrix, m_a: TropicalMatrix, a: int
) -> bool:
    """True iff the first component of (M, H)^a equals M_a."""
    if isinstance(a, bool) or not isinstance(a, int) or a < 1:
        return False
    return pair_pow1(PairOne(m, h), a).m == m_a


def recover_exponent(
    m: TropicalMatrix,
    h: TropicalMatrix,
    m_a: TropicalMatrix,
    max_steps: int = DEFAULT_MAX_STEPS,
    validation_window: int = DEFAULT_VALIDATION_WINDOW,
) -> AttackResult:
    """
    Recovers an exponent a' with M_{a'} = M_a from the public M, H and M_a.

    Period candidates are tried in scan order; a candidate whose solution is
    missing or fails verification counts as a false period and the search resumes
    past it. If M_a shows up among the enumerated terms it is returned directly.

    :raises AttackFailedError: when the step budget runs out.
    """
    if not (m.order == h.order == m_a.order):
        raise DimensionError(
            f"Orders differ: M={m.order}, H={h.order}, M_a={m_a.order}"
        )

    finder = PeriodFinder(iter_m_sequence(m, h), max_steps, validation_window)
    candidates = finder.candidates()
    timings = {"period": 0.0, "solve": 0.0, "verify": 0.0}
    retries = 0

    while True:
        started = time.perf_counter()
        try:
            info = next(candidates)
        except PeriodNotFoundError as e:
            timings["period"] += time.perf_counter() - started
            index = finder.index_of(m_a)
            if index is not None:
                lookup = ExponentSolution(a=index, method=RecoveryMethod.LOOKUP)
                return _finish(m, h, m_a, lookup, None, retries, timings)
            raise AttackFailedError(
                f"Attack failed after {finder.steps} terms and {retries} false periods"
            ) from e
        timings["period"] += time.perf_counter() - started

        started = time.perf_counter()
        index = finder.index_of(m_a)
        if index is not None:
            solution = ExponentSolution(a=index, method=RecoveryMethod.LOOKUP)
        else:
            solution = solve_exponent(info, m_a)
        timings["solve"] += time.perf_counter() - started

        if solution is None:
            finder.mark_unsolvable(info)
            retries += 1
            logger.debug(f"No exponent for d={info.d}, rho={info.rho}; resuming search")
            continue

        result = _finish(m, h, m_a, solution, info, retries, timings)
        if result.verified:
            return result
        if solution.method == RecoveryMethod.LOOKUP:
            raise AttackFailedError("Enumerated term failed verification")
        retries += 1
        logger.debug(f"Candidate a={solution.a} failed verification; resuming search")


def _finish(
    m: TropicalMatrix,
    h: TropicalMatrix,
    m_a: TropicalMatrix,
    solution: ExponentSolution,
    info: Optional[PeriodInfo],
    retries: int,
    timings: Dict[str, float],
) -> AttackResult:
    started = time.perf_counter()
    verified = verify_candidate(m, h, m_a, solution.a)
    timings["verify"] += time.perf_counter() - started

    result = AttackResult(
        recovered_a=solution.a,
        k=solution.k,
        x=solution.x,
        d_used=info.d if info else None,
        rho_used=info.rho if info else None,
        false_period_retries=retries,
        verified=verified,
        method=solution.method,
        linear_factor=info.linear_factor if info else None,
        timings=dict(timings),
    )
    if verified:
        logger.info(
            f"Recovered a={solution.a} via {result.method} "
            f"(d={result.d_used}, rho={result.rho_used}, retries={retries})"
        )
    return result


def attack_exchange(
    m: TropicalMatrix,
    h: TropicalMatrix,
    m_a: TropicalMatrix,
    m_b: TropicalMatrix,
    max_steps: int = DEFAULT_MAX_STEPS,
    validation_window: int = DEFAULT_VALIDATION_WINDOW,
) -> KeyRecovery:
    """Recovers a, rebuilds H_a and derives Alice's key K = (M_b ∘ H_a) ⊕ M_a."""
    result = recover_exponent(m, h, m_a, max_steps, validation_window)
    h_a = pair_pow1(PairOne(m, h), result.recovered_a).h
    return KeyRecovery(key=derive_key1(m_b, h_a, m_a), result=result)


def recover_shared_key(
    m: TropicalMatrix,
    h: TropicalMatrix,
    m_a: TropicalMatrix,
    m_b: TropicalMatrix,
    max_steps: int = DEFAULT_MAX_STEPS,
) -> TropicalMatrix:
    return attack_exchange(m, h, m_a, m_b, max_steps).key
