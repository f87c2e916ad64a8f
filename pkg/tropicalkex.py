import functools
import json
import logging
import sys

import click

from algebra.tropical_core import TropicalMatrix
from attack.exponent_recovery import attack_exchange, recover_exponent
from attack.period_finder import (
    DEFAULT_MAX_STEPS,
    check_periodicity,
    check_reconstruction,
    find_h_period,
    find_period,
)
from harness.bench import FORMAT_CSV, FORMAT_JSON, run_bench, write_outputs
from harness.instance_config import load_config
from harness.instances import Instance, gen_instance, instance_from_dict, instance_to_dict
from protocols.protocol_one import run_exchange
from protocols.protocol_two import (
    FoldOrder,
    fold_power_left,
    fold_power_right,
    pair_op2,
    published_counterexample,
    run_exchange2,
    sample_violations,
)
from utils.errors import (
    AttackFailedError,
    InstanceFormatError,
    PeriodNotFoundError,
    TropicalKexError,
)
from utils.logger import logger
from utils.serialization import (
    dump_json,
    load_json,
    load_matrix,
    matrix_from_json,
    matrix_to_json,
    pair_to_json,
)

EXIT_INPUT_ERROR = 2
EXIT_ATTACK_FAILED = 3


def handle_errors(command):
    """Maps package errors to exit statuses: 3 for a failed attack, 2 for bad input."""

    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except (AttackFailedError, PeriodNotFoundError) as e:
            click.echo(f"Attack failed: {e}", err=True)
            sys.exit(EXIT_ATTACK_FAILED)
        except (TropicalKexError, OSError) as e:
            click.echo(f"Error: {e}", err=True)
            sys.exit(EXIT_INPUT_ERROR)

    return wrapper


def instance_options(command):
    """Flags shared by every command that builds an InstanceConfig."""
    options = [
        click.option("--config", "config_path", type=click.Path(dir_okay=False),
                     help="JSON file with instance parameters; flags override it."),
        click.option("--order", type=int, help="Matrix order."),
        click.option("--entry-min", type=int, help="Smallest matrix entry."),
        click.option("--entry-max", type=int, help="Largest matrix entry."),
        click.option("--exp-min", type=int, help="Smallest private exponent."),
        click.option("--exp-max", type=int, help="Largest private exponent."),
        click.option("--seed", type=int, help="Seed of the instance generator."),
        click.option("--max-steps", type=int, help="Term budget of the period search."),
    ]
    for option in reversed(options):
        command = option(command)
    return command


def _config(config_path=None, **flags):
    return load_config(config_path, **flags)


def _emit(data, out=None):
    if out:
        dump_json(data, out)
        click.echo(f"Wrote {out}")
    else:
        click.echo(json.dumps(data, indent=2))


def _load_instance(path: str) -> Instance:
    return instance_from_dict(load_json(path))


def _matrix_field(data: dict, key: str, path: str) -> TropicalMatrix:
    if key not in data:
        raise InstanceFormatError(f"{path} has no '{key}' matrix")
    return matrix_from_json(data[key])


@click.group()
@click.option("--debug", is_flag=True, help="Log at DEBUG level.")
def cli(debug):
    """Tropical semidirect-product key exchange: protocols, attack and benchmarks."""
    if debug:
        logger.set_level(logging.DEBUG)


@cli.command()
@instance_options
@click.option("--instance", "instance_path", type=click.Path(exists=True, dir_okay=False),
              help="Instance JSON (as written by gen); generated when omitted.")
@click.option("--trial", type=int, default=0, show_default=True,
              help="Trial index of the generated instance.")
@click.option("--protocol", type=click.Choice(["one", "two"]), default="one",
              show_default=True)
@click.option("--fold", type=click.Choice([f.value for f in FoldOrder]),
              help="Bracketing of powers; required with --protocol two.")
@click.option("--out", type=click.Path(dir_okay=False), help="Write the transcript here.")
@handle_errors
def exchange(instance_path, trial, protocol, fold, out, config_path, **flags):
    """Run an honest key exchange and print its transcript."""
    if protocol == "two" and fold is None:
        raise click.UsageError("--protocol two needs an explicit --fold")

    if instance_path:
        instance = _load_instance(instance_path)
    else:
        instance = gen_instance(_config(config_path, **flags), trial)

    if protocol == "one":
        transcript = run_exchange(instance.m, instance.h, instance.a, instance.b)
    else:
        transcript = run_exchange2(
            instance.m, instance.h, instance.a, instance.b, FoldOrder(fold)
        )
    _emit(transcript.to_dict(), out)


@cli.command()
@click.option("--transcript", "transcript_path", type=click.Path(exists=True, dir_okay=False),
              help="JSON holding m, h, m_a and optionally m_b (e.g. an exchange transcript).")
@click.option("--m", "m_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--h", "h_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--m-a", "m_a_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--m-b", "m_b_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--max-steps", type=int, default=DEFAULT_MAX_STEPS, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False))
@handle_errors
def attack(transcript_path, m_path, h_path, m_a_path, m_b_path, max_steps, out):
    """Recover the private exponent, and the shared key when M_b is given."""
    if transcript_path:
        data = load_json(transcript_path)
        if not isinstance(data, dict):
            raise InstanceFormatError(f"{transcript_path} must contain a JSON object")
        m = _matrix_field(data, "m", transcript_path)
        h = _matrix_field(data, "h", transcript_path)
        m_a = _matrix_field(data, "m_a", transcript_path)
        m_b = matrix_from_json(data["m_b"]) if "m_b" in data else None
    elif m_path and h_path and m_a_path:
        m, h, m_a = load_matrix(m_path), load_matrix(h_path), load_matrix(m_a_path)
        m_b = load_matrix(m_b_path) if m_b_path else None
    else:
        raise InstanceFormatError("Pass --transcript, or --m, --h and --m-a")

    if m_b is None:
        report = recover_exponent(m, h, m_a, max_steps).to_dict()
    else:
        recovery = attack_exchange(m, h, m_a, m_b, max_steps)
        report = recovery.result.to_dict()
        report["key"] = matrix_to_json(recovery.key)
    _emit(report, out)


@cli.command()
@instance_options
@click.option("--trials", type=int, help="Number of trials.")
@click.option("--workers", type=int, help="Worker processes.")
@click.option("--out", "out_dir", type=click.Path(file_okay=False), default="bench_out",
              show_default=True, help="Output directory.")
@click.option("--format", "fmt", type=click.Choice([FORMAT_CSV, FORMAT_JSON]),
              default=FORMAT_CSV, show_default=True, help="Format of the per-trial file.")
@click.option("--timings-in-trials", is_flag=True,
              help="Put attack times in the per-trial file instead of timings.csv.")
@handle_errors
def bench(out_dir, fmt, timings_in_trials, config_path, **flags):
    """Attack a batch of seeded random instances and summarize the results."""
    config = _config(config_path, **flags)
    summary, results = run_bench(config)
    write_outputs(summary, results, out_dir, fmt, timings_in_trials)
    for name, value in summary.to_table().items():
        click.echo(f"{name:<26} {value}")
    if summary.success_rate < 1.0:
        sys.exit(EXIT_ATTACK_FAILED)


@cli.command("check-assoc")
@click.option("--paper", "published", is_flag=True, help="Evaluate the published counterexample.")
@click.option("--samples", type=click.IntRange(min=0), default=0, show_default=True,
              help="Random triples to test for further violations.")
@click.option("--seed", type=click.IntRange(min=0), default=0, show_default=True)
@handle_errors
def check_assoc(published, samples, seed):
    """Show that the second protocol's pair operation is not associative."""
    report = {}
    if published or not samples:
        pair = published_counterexample()
        square = pair_op2(pair, pair)
        right = fold_power_right(pair, 3)
        left = fold_power_left(pair, 3)
        report["published"] = {
            "pair": pair_to_json(pair),
            "square": pair_to_json(square),
            "right_fold": pair_to_json(right),
            "left_fold": pair_to_json(left),
            "associative": left == right,
        }
    if samples:
        witnesses = sample_violations(seed, samples)
        report["sampling"] = {
            "samples": samples,
            "seed": seed,
            "violations": len(witnesses),
            "first_witness": witnesses[0].to_dict() if witnesses else None,
        }
    _emit(report)


@cli.command()
@instance_options
@click.option("--trial", type=int, default=0, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), help="Write the instance here.")
@handle_errors
def gen(trial, out, config_path, **flags):
    """Generate a random instance (M, H, a, b)."""
    instance = gen_instance(_config(config_path, **flags), trial)
    _emit(instance_to_dict(instance), out)


@cli.command()
@instance_options
@click.option("--instance", "instance_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--trial", type=int, default=0, show_default=True)
@click.option("--sequence", type=click.Choice(["m", "h"]), default="m", show_default=True,
              help="M_n (public) or H_n (private) sequence.")
@handle_errors
def period(instance_path, trial, sequence, config_path, **flags):
    """Report the defect d, period rho and linear factor of a sequence."""
    config = _config(config_path, **flags)
    if instance_path:
        instance = _load_instance(instance_path)
    else:
        instance = gen_instance(config, trial)
    budget = config.max_steps

    if sequence == "m":
        info = find_period(instance.m, instance.h, budget)
        report = info.to_dict()
        report["periodic"] = check_periodicity(info, instance.m, instance.h)
    else:
        info = find_h_period(instance.h, budget)
        report = info.to_dict()
    report["sequence"] = sequence
    report["reconstructs"] = check_reconstruction(info)
    _emit(report)


if __name__ == "__main__":
    cli()
