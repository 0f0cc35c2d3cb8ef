import argparse
import logging
import sys
import typing

import logfire
import logging_bullet_train
import pydantic
from rich.console import Console
from rich.table import Table

import collabdiv
from collabdiv.harness.cache import PointCache
from collabdiv.harness.config_file import (
    PRESETS,
    ExperimentFile,
    load_experiment_file,
    normalize_keys,
    preset_experiment,
)
from collabdiv.harness.records import BerRecord, read_records_csv, write_records_csv
from collabdiv.harness.runner import run_sweep
from collabdiv.harness.settings import Settings
from collabdiv.harness.stats import (
    ebn0_gain_at_ber,
    estimate_diversity_order,
    select_curve,
)
from collabdiv.harness.theory import theoretical_ber
from collabdiv.shared.errors import (
    InvalidArgumentError,
    NotEstimableError,
    SweepPointError,
)

logger = logging.getLogger("collabdiv")
console = Console(stderr=True)

EXIT_OK: typing.Final = 0
EXIT_INVALID: typing.Final = 2
EXIT_NOT_ESTIMABLE: typing.Final = 3

SIMULATE_FLAGS: typing.Final = (
    "scheme",
    "ebn0",
    "beta_db",
    "mu_db",
    "spreading",
    "groups",
    "timing_sigma",
    "observed_group",
    "min_errors",
    "max_bits",
    "confidence",
    "frames_per_trial",
    "seed",
    "out",
    "workers",
)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="collabdiv",
        description="Monte Carlo BER simulator for full-rate collaborative "
        + "diversity over uplink orthogonal CDMA.",
    )
    parser.add_argument("--version", action="version", version=collabdiv.__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    simulate = sub.add_parser("simulate", help="Run one experiment grid")
    simulate.add_argument("--scheme", default="proposed")
    simulate.add_argument("--ebn0", default="0:2:30", help="start:step:stop or list")
    simulate.add_argument("--beta-db", default="10")
    simulate.add_argument("--mu-db", default="beta")
    simulate.add_argument("--spreading", type=int, default=16)
    simulate.add_argument("--groups", default="1", choices=["1", "full"])
    simulate.add_argument("--timing-sigma", default="0")
    simulate.add_argument("--observed-group", default="0")
    simulate.add_argument("--min-errors", type=int, default=200)
    simulate.add_argument("--max-bits", type=int, default=20_000_000)
    simulate.add_argument("--confidence", type=float, default=0.95)
    simulate.add_argument("--frames-per-trial", type=int, default=2048)
    simulate.add_argument("--seed", type=int, default=0)
    simulate.add_argument("--out", default=None)
    simulate.add_argument("--workers", type=int, default=None)

    sweep = sub.add_parser("sweep", help="Run an experiment file or preset")
    source = sweep.add_mutually_exclusive_group(required=True)
    source.add_argument("--spec", help="key=value experiment file")
    source.add_argument("--preset", choices=sorted(PRESETS))
    sweep.add_argument("--out", default=None)
    sweep.add_argument("--workers", type=int, default=None)

    analyze = sub.add_parser("analyze", help="Read results and estimate metrics")
    analyze.add_argument("kind", choices=["gain", "diversity"])
    analyze.add_argument("--in", dest="input", required=True)
    analyze.add_argument("--scheme", default="proposed")
    analyze.add_argument("--reference", default="noncoop")
    analyze.add_argument("--target-ber", type=float, default=1e-3)
    analyze.add_argument("--beta-db", type=float, default=None)
    analyze.add_argument("--timing-sigma", type=float, default=None)
    analyze.add_argument("--min-ebn0", type=float, default=float("-inf"))
    analyze.add_argument("--max-ebn0", type=float, default=float("inf"))

    plot = sub.add_parser("plot", help="Render BER curves from a results CSV")
    plot.add_argument("--in", dest="input", required=True)
    plot.add_argument("--out", required=True)

    return parser


def setup_observability(settings: Settings) -> None:
    logging_bullet_train.set_logger(logger)
    logger.setLevel(settings.log_level)
    logfire.configure(
        send_to_logfire="if-token-present",
        service_name=collabdiv.__name__,
        service_version=collabdiv.__version__,
        console=False,
    )


def render_records(records: typing.Sequence[BerRecord]) -> None:
    table = Table(title="BER")
    for column in ("scheme", "Eb/N0", "beta", "sigma", "bits", "errors", "BER"):
        table.add_column(column)
    table.add_column("theory")
    for r in records:
        theory = theoretical_ber(r.scheme, r.ebn0_db)
        table.add_row(
            r.scheme.value,
            f"{r.ebn0_db:g}",
            f"{r.beta_db:g}",
            f"{r.timing_sigma:g}",
            str(r.bits),
            str(r.errors) + ("*" if r.truncated else ""),
            f"{r.ber:.3e}",
            "" if theory is None else f"{theory:.3e}",
        )
    console.print(table)


def run_experiment(
    experiment: ExperimentFile,
    settings: Settings,
    *,
    out: typing.Optional[str] = None,
    workers: typing.Optional[int] = None,
) -> int:
    spec = experiment.to_spec()
    workers = workers or experiment.workers or settings.workers
    out = out or experiment.out

    cache = PointCache(settings.cache_dir) if settings.cache_dir else None
    try:
        records = run_sweep(spec, workers=workers, cache=cache)
    finally:
        if cache is not None:
            cache.close()

    if out is None:
        write_records_csv(records, sys.stdout)
    else:
        write_records_csv(records, out)
        logger.info(f"Wrote {len(records)} records to {out}")
    render_records(records)
    return EXIT_OK


def run_analysis(args: argparse.Namespace) -> int:
    records = read_records_csv(args.input)
    curve = select_curve(
        records,
        args.scheme.replace("-", "_"),
        beta_db=args.beta_db,
        timing_sigma=args.timing_sigma,
        min_ebn0_db=args.min_ebn0,
        max_ebn0_db=args.max_ebn0,
    )
    if not curve:
        raise NotEstimableError(f"No records for scheme {args.scheme}")

    if args.kind == "diversity":
        order = estimate_diversity_order(curve)
        print(f"{order:.6g}")
        console.print(f"Diversity order of {args.scheme}: {order:.3f}")
        return EXIT_OK

    reference = select_curve(
        records,
        args.reference.replace("-", "_"),
        min_ebn0_db=args.min_ebn0,
        max_ebn0_db=args.max_ebn0,
    )
    if not reference:
        raise NotEstimableError(f"No records for reference {args.reference}")
    gain = ebn0_gain_at_ber(curve, reference, args.target_ber)
    print(f"{gain:.6g}")
    console.print(
        f"Gain of {args.scheme} over {args.reference} at BER "
        + f"{args.target_ber:g}: {gain:.2f} dB"
    )
    return EXIT_OK


def dispatch(args: argparse.Namespace, settings: Settings) -> int:
    if args.command == "simulate":
        raw = {flag: getattr(args, flag) for flag in SIMULATE_FLAGS}
        experiment = ExperimentFile.model_validate(normalize_keys(raw))
        return run_experiment(experiment, settings)

    if args.command == "sweep":
        experiment = (
            load_experiment_file(args.spec)
            if args.spec is not None
            else preset_experiment(args.preset)
        )
        return run_experiment(
            experiment, settings, out=args.out, workers=args.workers
        )

    if args.command == "analyze":
        return run_analysis(args)

    if args.command == "plot":
        from collabdiv.harness.plotting import plot_ber_curves

        plot_ber_curves(read_records_csv(args.input), args.out)
        return EXIT_OK

    raise InvalidArgumentError(f"Unknown command: {args.command}")


def main(argv: typing.Optional[typing.Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        settings = Settings()
        setup_observability(settings)
        return dispatch(args, settings)
    except NotEstimableError as e:
        logger.error(f"Not estimable: {e}")
        console.print(f"[red]Not estimable:[/red] {e}")
        return EXIT_NOT_ESTIMABLE
    except (InvalidArgumentError, pydantic.ValidationError, ValueError) as e:
        logger.error(f"Invalid arguments: {e}")
        console.print(f"[red]Invalid arguments:[/red] {e}")
        return EXIT_INVALID
    except SweepPointError as e:
        if isinstance(e.__cause__, (InvalidArgumentError, pydantic.ValidationError)):
            console.print(f"[red]Invalid arguments:[/red] {e}")
            return EXIT_INVALID
        raise
    except FileNotFoundError as e:
        console.print(f"[red]File not found:[/red] {e}")
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
