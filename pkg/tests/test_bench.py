import json

import pandas as pd
import pytest

from harness.bench import (
    TrialResult,
    run_bench,
    run_trial,
    summarize,
    trials_frame,
    write_outputs,
)
from harness.instance_config import InstanceConfig
from utils.errors import AttackFailedError


def make_result(trial, d=1, rho=1, attack_time=0.5, success=True):
    return TrialResult(
        trial=trial,
        instance_id=f"0-{trial}",
        d=d,
        rho=rho,
        retries=0,
        attack_time=attack_time,
        success=success,
        recovered_a="5",
        true_a="5",
        method="periodic",
    )


def test_run_trial_succeeds(desk_config):
    result = run_trial(desk_config, 0)
    assert result.success
    assert result.trial == 0
    assert result.instance_id == "7-0"
    assert result.attack_time >= 0
    assert result.recovered_a is not None
    assert isinstance(result.true_a, str)


@pytest.mark.parametrize(
    "config",
    [
        InstanceConfig(order=3, entry_min=5, entry_max=5, exp_max=10**6),
        InstanceConfig(order=3, entry_min=-3, entry_max=-3, exp_max=10**6),
        InstanceConfig(order=1, exp_max=10**6),
    ],
)
def test_run_trial_special_configs(config):
    assert run_trial(config, 0).success


def test_run_trial_records_attack_failure(desk_config, mocker):
    mocker.patch("harness.bench.attack_exchange", side_effect=AttackFailedError("budget"))
    result = run_trial(desk_config, 1)
    assert not result.success
    assert result.d is None and result.rho is None
    assert result.recovered_a is None


def test_summarize_single_trial():
    summary = summarize([make_result(0, d=4, rho=2, attack_time=0.25)])
    assert summary.max_d == summary.median_d == summary.mean_d == 4
    assert summary.max_rho == summary.median_rho == summary.mean_rho == 2
    assert summary.max_time == summary.median_time == summary.mean_time == 0.25
    assert summary.success_rate == 1.0


def test_summarize_takes_lower_median_and_skips_missing_periods():
    results = [make_result(i, d=d, rho=1) for i, d in enumerate([4, 1, 3, 2])]
    results.append(make_result(4, d=None, rho=None, success=False))
    summary = summarize(results)
    assert summary.median_d == 2
    assert summary.max_d == 4
    assert summary.mean_d == 2.5
    assert summary.success_rate == 0.8
    assert summary.trials == 5


def test_summarize_rejects_empty():
    with pytest.raises(ValueError):
        summarize([])


def test_table_uses_result_row_names():
    table = summarize([make_result(0)]).to_table()
    assert list(table)[:3] == ["Maximum d", "Median d", "Mean d"]
    assert table["Success Rate"] == 1.0
    assert "Median attack time (s)" in table


def test_trials_frame_keeps_integer_columns():
    df = trials_frame([make_result(0, d=3), make_result(1, d=None, rho=None)])
    assert str(df["d"].dtype) == "Int64"
    assert "attack_time_s" not in df.columns
    assert "attack_time_s" in trials_frame([make_result(0)], include_timing=True).columns


def test_write_outputs_csv(tmp_path):
    results = [make_result(0), make_result(1, d=None, rho=None)]
    written = write_outputs(summarize(results), results, str(tmp_path))
    assert sorted(p.split("/")[-1] for p in written) == [
        "summary.json",
        "timings.csv",
        "trials.csv",
    ]
    trials = pd.read_csv(tmp_path / "trials.csv")
    assert list(trials.columns) == [
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
    assert (tmp_path / "trials.csv").read_text().splitlines()[2].startswith("1,0-1,,")
    assert json.loads((tmp_path / "summary.json").read_text())["Maximum d"] == 1


def test_write_outputs_json_with_timings(tmp_path):
    results = [make_result(0)]
    write_outputs(summarize(results), results, str(tmp_path), "json", include_timings=True)
    rows = json.loads((tmp_path / "trials.json").read_text())
    assert rows[0]["attack_time_s"] == 0.5
    assert not (tmp_path / "timings.csv").exists()


def test_write_outputs_rejects_unknown_format(tmp_path):
    results = [make_result(0)]
    with pytest.raises(ValueError):
        write_outputs(summarize(results), results, str(tmp_path), "xml")


def test_bench_is_deterministic(desk_config, tmp_path):
    for name in ("first", "second"):
        summary, results = run_bench(desk_config)
        write_outputs(summary, results, str(tmp_path / name))
    first = (tmp_path / "first" / "trials.csv").read_bytes()
    assert first == (tmp_path / "second" / "trials.csv").read_bytes()
    assert summary.success_rate == 1.0


def test_process_pool_matches_serial_run(desk_config):
    _, serial = run_bench(desk_config)
    _, pooled = run_bench(desk_config.model_copy(update={"workers": 2}))
    assert [r.to_row() for r in serial] == [r.to_row() for r in pooled]


@pytest.mark.slow
def test_default_configuration_attack_succeeds_everywhere():
    summary, results = run_bench(InstanceConfig(trials=100))
    assert len(results) == 100
    assert summary.success_rate == 1.0
