"""
Detection of the defect d and period ρ of a public matrix sequence.

The sequence M_1 = M, M_n = (M_{n-1} ∘ H) ⊕ M eventually behaves almost linearly
periodically, which makes its difference sequence D_n = M_{n+1} - M_n (classical
subtraction) eventually periodic. A repeated difference D_i = D_j is a candidate
(d, ρ) = (i - 1, j - i); candidates are re-checked over a validation window before
they are handed to the exponent solver.
"""

from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Tuple

from algebra.tropical_core import (
    DifferenceMatrix,
    TropicalMatrix,
    adjoint,
    mat_add,
    mat_sub_classical,
)
from utils.errors import DimensionError, DomainError, PeriodNotFoundError
from utils.logger import logger
from utils.serialization import difference_to_json, matrix_to_json

OBSERVED_MAX_DEFECT = 2151  # largest defect seen over 10000 attacked instances
DEFAULT_MAX_STEPS = 10 * OBSERVED_MAX_DEFECT + 64
DEFAULT_VALIDATION_WINDOW = 2


def iter_m_sequence(m: TropicalMatrix, h: TropicalMatrix) -> Iterator[TropicalMatrix]:
    """Yields M_1, M_2, ... without end."""
    if m.order != h.order:
        raise DimensionError(f"M and H differ in order: {m.order} vs {h.order}")
    current = m
    while True:
        yield current
        current = mat_add(adjoint(current, h), m)


def iter_h_sequence(h: TropicalMatrix) -> Iterator[TropicalMatrix]:
    """Yields H_1 = H, H_n = H_{n-1} ∘ H: the private component of (M, H)^n."""
    current = h
    while True:
        yield current
        current = adjoint(current, h)


def _take(terms: Iterator[TropicalMatrix], limit: int) -> List[TropicalMatrix]:
    if limit < 1:
        raise DomainError(f"Sequence limit must be at least 1, got {limit}")
    return [next(terms) for _ in range(limit)]


def enumerate_m_sequence(
    m: TropicalMatrix, h: TropicalMatrix, limit: int
) -> List[TropicalMatrix]:
    """[M_1, ..., M_limit]"""
    return _take(iter_m_sequence(m, h), limit)


def enumerate_h_sequence(h: TropicalMatrix, limit: int) -> List[TropicalMatrix]:
    """[H_1, ..., H_limit]"""
    return _take(iter_h_sequence(h), limit)


@dataclass(frozen=True)
class PeriodInfo:
    """
    A validated (d, ρ) candidate together with the enumerated prefix it rests on.

    Indices follow the sequence: ``diffs[n - 1]`` is D_n for n in 1..d+ρ and
    ``m_snapshots[n - 1]`` is M_n for n in 1..d+ρ+1.
    """

    d: int
    rho: int
    diffs: Tuple[DifferenceMatrix, ...]
    m_snapshots: Tuple[TropicalMatrix, ...]
    period_sum: DifferenceMatrix

    @property
    def order(self) -> int:
        return self.period_sum.order

    @property
    def first_index(self) -> int:
        return self.d + 1

    @property
    def repeat_index(self) -> int:
        return self.d + 1 + self.rho

    @property
    def position(self) -> Tuple[int, int]:
        """Scan position of this candidate, used to resume the search past it."""
        return self.repeat_index, self.first_index

    def diff(self, n: int) -> DifferenceMatrix:
        return self.diffs[n - 1]

    def snapshot(self, n: int) -> TropicalMatrix:
        return self.m_snapshots[n - 1]

    def partial_sum(self, count: int) -> DifferenceMatrix:
        """Σ D_i for i = d+1 .. d+count (the empty sum for count = 0)."""
        return DifferenceMatrix.sum_of(
            self.diffs[self.d : self.d + count], self.order
        )

    @property
    def is_degenerate(self) -> bool:
        """True when every difference inside the period is the zero matrix."""
        return all(self.diff(n).is_zero() for n in range(self.d + 1, self.d + self.rho + 1))

    @property
    def linear_factor(self) -> Optional[int]:
        """The common entry of the period sum, or None when its entries differ."""
        values = {v for row in self.period_sum.key() for v in row}
        return values.pop() if len(values) == 1 else None

    def to_dict(self) -> dict:
        return {
            "d": self.d,
            "rho": self.rho,
            "linear_factor": self.linear_factor,
            "period_sum": difference_to_json(self.period_sum),
            "first_term": matrix_to_json(self.snapshot(1)),
        }


class PeriodFinder:
    """
    Lazily enumerates a matrix sequence and its differences, detecting repeats.

    Differences are indexed by content in a dict, so each new term is checked for
    a repeat in constant time. ``candidates()`` yields validated candidates in scan
    order: increasing repeat index, then increasing first index.
    """

    def __init__(
        self,
        terms: Iterator[TropicalMatrix],
        max_steps: int = DEFAULT_MAX_STEPS,
        validation_window: int = DEFAULT_VALIDATION_WINDOW,
    ):
        if max_steps < 1:
            raise DomainError(f"max_steps must be positive, got {max_steps}")
        if validation_window < 0:
            raise DomainError(f"validation_window must be >= 0, got {validation_window}")
        self._terms = iter(terms)
        self.max_steps = max_steps
        self.validation_window = validation_window
        self.snapshots: List[TropicalMatrix] = []
        self.diffs: List[DifferenceMatrix] = []
        self._diff_index: Dict[DifferenceMatrix, List[int]] = {}
        self._diff_ids: List[int] = []
        self._unsolvable: Dict[int, List[int]] = {}
        self._term_index: Dict[TropicalMatrix, int] = {}

    @property
    def steps(self) -> int:
        """Number of terms enumerated so far."""
        return len(self.snapshots)

    def _extend_to(self, term_count: int) -> None:
        while len(self.snapshots) < term_count:
            if len(self.snapshots) >= self.max_steps:
                raise PeriodNotFoundError(
                    f"No validated period within {self.max_steps} terms"
                )
            term = next(self._terms)
            if self.snapshots:
                diff = mat_sub_classical(term, self.snapshots[-1])
                self.diffs.append(diff)
                indices = self._diff_index.setdefault(diff, [])
                self._diff_ids.append(indices[0] if indices else len(self.diffs))
                indices.append(len(self.diffs))
            self.snapshots.append(term)
            self._term_index.setdefault(term, len(self.snapshots))

    def diff(self, n: int) -> DifferenceMatrix:
        self._extend_to(n + 1)
        return self.diffs[n - 1]

    def index_of(self, matrix: TropicalMatrix) -> Optional[int]:
        """First index n with M_n equal to ``matrix`` among the terms enumerated so far."""
        return self._term_index.get(matrix)

    def is_periodic(self, d: int, rho: int, window: int) -> bool:
        """Checks D_{n+ρ} = D_n for every n in (d, d + window·ρ]."""
        return all(
            self._diff_id(n + rho) == self._diff_id(n)
            for n in range(d + 1, d + window * rho + 1)
        )

    def _diff_id(self, n: int) -> int:
        """Index of the first difference equal to D_n."""
        self._extend_to(n + 1)
        return self._diff_ids[n - 1]

    def _repeats(self, start: int, stop: int, rho: int) -> bool:
        ids = self._diff_ids
        return all(ids[n + rho - 1] == ids[n - 1] for n in range(start, stop + 1))

    def mark_unsolvable(self, info: PeriodInfo) -> None:
        """
        Records a candidate for which M_a has no solution. Later candidates with the
        same first index whose period block repeats a recorded ρ have none either,
        so they are not yielded.
        """
        self._unsolvable.setdefault(info.first_index, []).append(info.rho)

    def _covered(self, first: int, rho: int) -> bool:
        return any(
            rho % known == 0 and self._repeats(first, first + rho - known - 1, known)
            for known in self._unsolvable.get(first, ())
        )

    def candidates(
        self, resume_from: Optional[Tuple[int, int]] = None
    ) -> Iterator[PeriodInfo]:
        """
        :param resume_from: scan position (repeat index, first index) of a candidate
            rejected downstream; only candidates strictly after it are yielded.
        :raises PeriodNotFoundError: once the step budget is exhausted.
        """
        j = 2
        while True:
            current = self.diff(j)
            for i in self._diff_index[current]:
                if i >= j:
                    break
                if resume_from is not None and (j, i) <= resume_from:
                    continue
                d, rho = i - 1, j - i
                if self._covered(i, rho):
                    continue
                if self.is_periodic(d, rho, self.validation_window):
                    logger.debug(f"Period candidate d={d}, rho={rho} after {self.steps} terms")
                    yield self._build_info(d, rho)
                else:
                    logger.debug(f"Rejected repeat d={d}, rho={rho} in validation window")
            j += 1

    def _build_info(self, d: int, rho: int) -> PeriodInfo:
        order = self.snapshots[0].order
        period = self.diffs[d : d + rho]
        return PeriodInfo(
            d=d,
            rho=rho,
            diffs=tuple(self.diffs[: d + rho]),
            m_snapshots=tuple(self.snapshots[: d + rho + 1]),
            period_sum=DifferenceMatrix.sum_of(period, order),
        )


def find_period(
    m: TropicalMatrix,
    h: TropicalMatrix,
    max_steps: int = DEFAULT_MAX_STEPS,
    resume_from: Optional[PeriodInfo] = None,
    validation_window: int = DEFAULT_VALIDATION_WINDOW,
) -> PeriodInfo:
    """
    Returns the earliest validated (d, ρ) of the M_n sequence.

    :param resume_from: a previously returned candidate that failed downstream;
        the search continues strictly past it.
    :raises PeriodNotFoundError: if ``max_steps`` terms show no validated repeat.
    :raises DomainError: if an INF entry reaches the difference sequence.
    """
    finder = PeriodFinder(iter_m_sequence(m, h), max_steps, validation_window)
    position = resume_from.position if resume_from is not None else None
    return next(finder.candidates(position))


def find_h_period(
    h: TropicalMatrix,
    max_steps: int = DEFAULT_MAX_STEPS,
    validation_window: int = DEFAULT_VALIDATION_WINDOW,
) -> PeriodInfo:
    """Earliest validated (d, ρ) of the H_n sequence."""
    finder = PeriodFinder(iter_h_sequence(h), max_steps, validation_window)
    return next(finder.candidates())


def check_periodicity(
    info: PeriodInfo,
    m: TropicalMatrix,
    h: TropicalMatrix,
    window: int = DEFAULT_VALIDATION_WINDOW,
) -> bool:
    """Re-enumerates the sequence and checks D_{n+ρ} = D_n over the window."""
    terms = enumerate_m_sequence(m, h, info.d + (window + 1) * info.rho + 1)
    diffs = [mat_sub_classical(b, a) for a, b in zip(terms, terms[1:])]
    return all(
        diffs[n + info.rho - 1] == diffs[n - 1]
        for n in range(info.d + 1, info.d + window * info.rho + 1)
    )


def check_reconstruction(info: PeriodInfo) -> bool:
    """M_n = M_1 + Σ_{i<n} D_i for every cached term."""
    first = info.snapshot(1)
    running = DifferenceMatrix.zeros(info.order)
    for n, snapshot in enumerate(info.m_snapshots, start=1):
        if running.add_to(first) != snapshot:
            return False
        if n <= len(info.diffs):
            running = running + info.diff(n)
    return True
