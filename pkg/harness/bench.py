"""
Seeded end-to-end trials of the key recovery attack and their statistics.

Each trial generates an instance, runs the honest exchange, times the attack on
the public transcript alone, and compares the recovered key with the honest one.
"""

import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from functools import partial
from typing import List, Optional, Sequence, Tuple

import pandas as pd

from attack.exponent_recovery import attack_exchange
from harness.instance_config import InstanceConfig
from harness.instances import gen_instance
from protocols.protocol_one import run_exchange
from utils.errors import AttackFailedError
from utils.logger import logger
from utils.serialization import dump_json, exponent_to_json

TRIAL_COLUMNS = [
    "trial",
    "instance_id",
    "d",
    "rho",
    "retries",
    "success",
    "method",
    "recovered_a",
    "true_a",
]
TIMING_COLUMN = "attack_time_s"

FORMAT_CSV = "csv"
FORMAT_JSON = "json"


@dataclass(frozen=True)
class TrialResult:
    trial: int
    instance_id: str
    d: Optional[int]
    rho: Optional[int]
    retries: int
    attack_time: float
    success: bool
    recovered_a: Optional[str]
    true_a: str
    method: Optional[str]

    def to_row(self, include_timing: bool = False) -> dict:
        row = {column: getattr(self, column) for column in TRIAL_COLUMNS}
        if include_timing:
            row[TIMING_COLUMN] = self.attack_time
        return row


def run_trial(config: InstanceConfig, trial_index: int) -> TrialResult:
    """
    Runs one trial. Only the attack itself is timed; an attack failure is
    recorded as success=False rather than raised.
    """
    instance = gen_instance(config, trial_index)
    transcript = run_exchange(instance.m, instance.h, instance.a, instance.b)

    started = time.perf_counter()
    try:
        recovery = attack_exchange(
            instance.m, instance.h, transcript.m_a, transcript.m_b, config.max_steps
        )
    except AttackFailedError as e:
        elapsed = round(time.perf_counter() - started, 3)
        logger.error(f"Trial {trial_index} ({instance.instance_id}) failed: {e}")
        return TrialResult(
            trial=trial_index,
            instance_id=instance.instance_id,
            d=None,
            rho=None,
            retries=0,
            attack_time=elapsed,
            success=False,
            recovered_a=None,
            true_a=exponent_to_json(instance.a),
            method=None,
        )
    elapsed = round(time.perf_counter() - started, 3)

    result = recovery.result
    success = transcript.keys_agree and recovery.key == transcript.key_alice
    if not success:
        logger.error(f"Trial {trial_index} ({instance.instance_id}): recovered key differs")
    logger.debug(
        f"Trial {trial_index}: d={result.d_used}, rho={result.rho_used}, "
        f"retries={result.false_period_retries}, {elapsed:.3f}s"
    )
    return TrialResult(
        trial=trial_index,
        instance_id=instance.instance_id,
        d=result.d_used,
        rho=result.rho_used,
        retries=result.false_period_retries,
        attack_time=elapsed,
        success=success,
        recovered_a=exponent_to_json(result.recovered_a),
        true_a=exponent_to_json(instance.a),
        method=result.method,
    )


@dataclass(frozen=True)
class StatsSummary:
    trials: int
    max_d: Optional[int]
    median_d: Optional[int]
    mean_d: Optional[float]
    max_rho: Optional[int]
    median_rho: Optional[int]
    mean_rho: Optional[float]
    max_time: float
    median_time: float
    mean_time: float
    success_rate: float

    def to_table(self) -> dict:
        """Statistics keyed by the row names of the attack results table."""
        return {
            "Maximum d": self.max_d,
            "Median d": self.median_d,
            "Mean d": self.mean_d,
            "Maximal rho": self.max_rho,
            "Median rho": self.median_rho,
            "Mean rho": self.mean_rho,
            "Maximum attack time (s)": self.max_time,
            "Median attack time (s)": self.median_time,
            "Mean attack time (s)": self.mean_time,
            "Success Rate": self.success_rate,
            "Trials": self.trials,
        }


def _describe(values: pd.Series, integral: bool):
    """(max, lower median, mean) of a series, or Nones when it is empty."""
    values = values.dropna()
    if values.empty:
        return None, None, None
    maximum = values.max()
    median = values.quantile(0.5, interpolation="lower")
    mean = round(float(values.mean()), 3)
    if integral:
        return int(maximum), int(median), mean
    return round(float(maximum), 3), round(float(median), 3), mean


def summarize(results: Sequence[TrialResult]) -> StatsSummary:
    """
    Aggregates trial results. Medians of even-sized sets take the lower middle
    value; trials without a period (lookup fallbacks, failures) are left out of
    the d and rho statistics.
    """
    if not results:
        raise ValueError("Cannot summarize an empty set of trials")
    df = pd.DataFrame([asdict(r) for r in results])
    max_d, median_d, mean_d = _describe(pd.to_numeric(df["d"]), integral=True)
    max_rho, median_rho, mean_rho = _describe(pd.to_numeric(df["rho"]), integral=True)
    max_time, median_time, mean_time = _describe(df["attack_time"], integral=False)
    return StatsSummary(
        trials=len(df),
        max_d=max_d,
        median_d=median_d,
        mean_d=mean_d,
        max_rho=max_rho,
        median_rho=median_rho,
        mean_rho=mean_rho,
        max_time=max_time,
        median_time=median_time,
        mean_time=mean_time,
        success_rate=float(df["success"].mean()),
    )


def run_bench(config: InstanceConfig) -> Tuple[StatsSummary, List[TrialResult]]:
    """
    Runs ``config.trials`` trials, on a process pool when ``config.workers > 1``.

    :return: the summary and the per-trial results ordered by trial index.
    """
    indices = range(config.trials)
    logger.info(
        f"Running {config.trials} trials (order={config.order}, seed={config.seed}, "
        f"workers={config.workers})"
    )
    if config.workers > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as executor:
            results = list(executor.map(partial(run_trial, config), indices))
    else:
        results = [run_trial(config, index) for index in indices]
    results.sort(key=lambda r: r.trial)

    summary = summarize(results)
    logger.info(
        f"Success rate {summary.success_rate:.2%}, median d={summary.median_d}, "
        f"median rho={summary.median_rho}"
    )
    return summary, results


def trials_frame(results: Sequence[TrialResult], include_timing: bool = False) -> pd.DataFrame:
    df = pd.DataFrame([r.to_row(include_timing) for r in results])
    for column in ("d", "rho"):
        df[column] = df[column].astype("Int64")
    return df


def write_outputs(
    summary: StatsSummary,
    results: Sequence[TrialResult],
    out_dir: str,
    fmt: str = FORMAT_CSV,
    include_timings: bool = False,
) -> List[str]:
    """
    Writes ``summary.json`` and ``trials.csv`` (or ``trials.json``).

    Per-trial files only hold deterministic columns unless ``include_timings`` is
    set; otherwise wall-clock times go to a separate ``timings.csv``.

    :return: the paths written.
    """
    if fmt not in (FORMAT_CSV, FORMAT_JSON):
        raise ValueError(f"Unknown output format: {fmt}")
    os.makedirs(out_dir, exist_ok=True)
    written = []

    summary_path = os.path.join(out_dir, "summary.json")
    dump_json(summary.to_table(), summary_path)
    written.append(summary_path)

    trials_path = os.path.join(out_dir, f"trials.{fmt}")
    if fmt == FORMAT_CSV:
        trials_frame(results, include_timings).to_csv(
            trials_path, index=False, lineterminator="\n"
        )
    else:
        dump_json([r.to_row(include_timings) for r in results], trials_path)
    written.append(trials_path)

    if not include_timings:
        timings_path = os.path.join(out_dir, "timings.csv")
        pd.DataFrame(
            {
                "trial": [r.trial for r in results],
                TIMING_COLUMN: [r.attack_time for r in results],
            }
        ).to_csv(timings_path, index=False, lineterminator="\n")
        written.append(timings_path)

    logger.debug(f"Wrote {', '.join(written)}")
    return written
