#############################################################################
# cli.py
#
# asdrp-capacity command line: classify, bound, sweep, mi, simulate
#
# Sat Oct 17 2026
#############################################################################

from dotenv import load_dotenv, find_dotenv
load_dotenv(find_dotenv())

import functools
import json
import logging
import math
import sys
from pathlib import Path
from typing import Optional

import click
import numpy as np
from pydantic import ValidationError

from asdrp.capacity.base import finite_or_none, to_jsonable
from asdrp.capacity.bounds import evaluate_scheme
from asdrp.capacity.classifier import DEFAULT_INSPECT_RANGE, classify
from asdrp.capacity.mi_oracle import estimate_mi, parse_law
from asdrp.capacity.signaling import (SignalingScheme, sample_sequence,
                                      select_guard_length)
from asdrp.channel.profiles import parse_profile
from asdrp.channel.simulator import ChannelConfig, simulate
from asdrp.errors import CapacityError
from asdrp.harness.config import SweepConfig, db_to_linear, env_log_level
from asdrp.harness.sweep import csv_text, run_sweep, write_csv, write_report
from asdrp.harness.svg_plot import write_svg

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERIC = 2
BITS_KEYS = {"upsilon", "lower_bound_raw", "lower_bound", "asymptotic_limit", "value", "std_err"}


def _emit(payload: dict) -> None:
    click.echo(json.dumps(finite_or_none(payload), indent=2, allow_nan=False))


def _in_bits(payload: dict, bits: bool) -> dict:
    if not bits:
        return payload
    return {
        k: (v / math.log(2.0) if k in BITS_KEYS and isinstance(v, float) else v)
        for k, v in payload.items()
    }


def _exit_codes(command):
    """Map validation failures to exit 1 and numeric failures to exit 2."""
    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        ctx = click.get_current_context()
        try:
            return command(*args, **kwargs)
        except (ValidationError, json.JSONDecodeError) as e:
            click.echo(f"invalid input: {e}", err=True)
            ctx.exit(EXIT_USAGE)
        except CapacityError as e:
            click.echo(f"{type(e).__name__}: {e}", err=True)
            ctx.exit(EXIT_NUMERIC)
    return wrapper


class CapacityGroup(click.Group):
    """click group whose usage errors exit with status 1 instead of 2."""

    def main(self, args=None, prog_name=None, standalone_mode=True, **extra):
        try:
            rv = super().main(args=args, prog_name=prog_name, standalone_mode=False, **extra)
        except click.ClickException as e:
            e.show()
            sys.exit(EXIT_USAGE)
        except click.Abort:
            click.echo("Aborted!", err=True)
            sys.exit(EXIT_USAGE)
        if standalone_mode:
            sys.exit(rv if isinstance(rv, int) else EXIT_OK)
        return rv


@click.group(cls=CapacityGroup)
@click.option("-v", "--verbose", count=True, help="-v for INFO, -vv for DEBUG.")
def cli(verbose: int) -> None:
    """Capacity lower bounds for noncoherent multipath fading channels."""
    level = {0: env_log_level(), 1: "INFO"}.get(verbose, "DEBUG")
    logging.basicConfig(level=level, format="%(asctime)s %(name)s %(levelname)s %(message)s", force=True)


@cli.command("classify")
@click.argument("profile_spec")
@click.option("--inspect-range", default=DEFAULT_INSPECT_RANGE, show_default=True, type=click.IntRange(min=8))
@_exit_codes
def classify_cmd(profile_spec: str, inspect_range: int) -> None:
    """Bounded / unbounded verdict for a JSON profile spec."""
    report = classify(parse_profile(profile_spec), inspect_range=inspect_range)
    _emit(to_jsonable(report))


@cli.command("bound")
@click.argument("profile_spec")
@click.option("--snr", type=float, help="Linear SNR.")
@click.option("--snr-db", type=float, help="SNR in dB.")
@click.option("--sigma-sq", default=1.0, show_default=True, type=float)
@click.option("--tau", type=click.IntRange(min=1), help="Data length; defaults to tau = L.")
@click.option("--rho", type=float, help="Geometric majorant ratio for the asymptotic limit.")
@click.option("--bits", is_flag=True, help="Display information quantities in bits.")
@_exit_codes
def bound_cmd(profile_spec: str, snr: Optional[float], snr_db: Optional[float], sigma_sq: float,
              tau: Optional[int], rho: Optional[float], bits: bool) -> None:
    """Capacity lower bound at a single SNR."""
    if (snr is None) == (snr_db is None):
        raise click.UsageError("give exactly one of --snr and --snr-db")
    snr = snr if snr is not None else db_to_linear(snr_db)
    report = evaluate_scheme(parse_profile(profile_spec), snr, sigma_sq, tau=tau, rho=rho)
    _emit(_in_bits(to_jsonable(report), bits))


@cli.command("sweep")
@click.option("--config", "config_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--out", "out_path", type=click.Path(dir_okay=False), help="CSV path; overrides the config.")
@click.option("--seed", type=click.IntRange(0, 2**64 - 1), help="Overrides the config seed.")
@click.option("--bits", is_flag=True, help="Display information quantities in bits (the CSV stays in nats).")
@click.option("--no-oracle", is_flag=True, help="Skip the MI oracle.")
@click.option("--progress/--no-progress", default=False)
@_exit_codes
def sweep_cmd(config_path: str, out_path: Optional[str], seed: Optional[int], bits: bool,
              no_oracle: bool, progress: bool) -> None:
    """Run an SNR sweep from a JSON config and write CSV, report and plot."""
    config = SweepConfig.from_file(config_path)
    overrides = {}
    if out_path is not None:
        overrides["csv_path"] = Path(out_path)
    if seed is not None:
        overrides["seed"] = seed
    if no_oracle:
        overrides["oracle"] = False
    config = config.model_copy(update=overrides)

    result = run_sweep(config, progress=progress)
    if config.csv_path is not None:
        write_csv(result, config.csv_path)
        report_path = config.report_path or config.csv_path.with_suffix(".json")
        write_report(result, report_path)
    if config.svg_path is not None:
        write_svg(result, config.svg_path, y_label="bits" if bits else "nats")
    click.echo(csv_text(result, bits=bits), nl=False)


@cli.command("mi")
@click.argument("law_spec")
@click.option("--alpha-h", default=1.0, show_default=True, type=float)
@click.option("--sigma-w-sq", required=True, type=float)
@click.option("--n-samples", default=10**6, show_default=True, type=click.IntRange(min=10**4))
@click.option("--seed", default=0, show_default=True, type=click.IntRange(0, 2**64 - 1))
@click.option("--partitions", default=1, show_default=True, type=click.IntRange(min=1))
@click.option("--jobs", default=1, show_default=True, type=int)
@click.option("--bits", is_flag=True)
@_exit_codes
def mi_cmd(law_spec: str, alpha_h: float, sigma_w_sq: float, n_samples: int, seed: int,
           partitions: int, jobs: int, bits: bool) -> None:
    """Monte-Carlo I(X; HX + W) for a JSON input law."""
    law = parse_law(json.loads(law_spec))
    est = estimate_mi(
        law, alpha_h, sigma_w_sq, n_samples=n_samples,
        rng=np.random.default_rng(seed), n_partitions=partitions, n_jobs=jobs,
    )
    _emit(_in_bits(to_jsonable(est), bits))


@cli.command("simulate")
@click.argument("profile_spec")
@click.option("--snr", required=True, type=float, help="Linear SNR; P = SNR * sigma^2.")
@click.option("--sigma-sq", default=1.0, show_default=True, type=float)
@click.option("--blocks", default=4, show_default=True, type=click.IntRange(min=1))
@click.option("--seed", default=0, show_default=True, type=click.IntRange(0, 2**64 - 1))
@click.option("--out", "out_path", type=click.Path(dir_okay=False), help="CSV path; stdout if omitted.")
@_exit_codes
def simulate_cmd(profile_spec: str, snr: float, sigma_sq: float, blocks: int, seed: int,
                 out_path: Optional[str]) -> None:
    """Drive the channel with the guard-interval scheme and dump inputs and outputs."""
    profile = parse_profile(profile_spec)
    power = snr * sigma_sq
    scheme = SignalingScheme.with_equal_lengths(select_guard_length(profile, power, sigma_sq), power)
    x = sample_sequence(scheme, blocks, np.random.default_rng(seed))
    y = simulate(ChannelConfig.for_power(profile, sigma_sq, power, seed=seed), x)

    lines = ["k,x_re,x_im,y_re,y_im"]
    for k, (xk, yk) in enumerate(zip(x, y), start=1):
        lines.append(",".join([str(k)] + [format(v, ".17g") for v in (xk.real, xk.imag, yk.real, yk.imag)]))
    text = "\n".join(lines) + "\n"
    if out_path is None:
        click.echo(text, nl=False)
    else:
        Path(out_path).write_bytes(text.encode("utf-8"))
        logger.info("wrote %d samples to %s", len(x), out_path)


def main() -> None:
    cli()


if __name__ == "__main__":
    main()
