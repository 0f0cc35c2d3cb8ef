import concurrent.futures
import logging
import math
import typing

import logfire

from collabdiv.harness.cache import PointCache, point_key
from collabdiv.harness.records import BerRecord, StoppingRule, SweepSpec
from collabdiv.harness.stats import wilson_interval
from collabdiv.protocol.config import Scheme, SchemeConfig
from collabdiv.protocol.dispatch import simulate_frames
from collabdiv.shared.errors import SweepPointError
from collabdiv.shared.seeding import derive_seed, stable_key, trial_rng

logger = logging.getLogger(__name__)

BITS_PER_FRAME: typing.Final[typing.Dict[Scheme, int]] = {
    Scheme.PROPOSED: 2,
    Scheme.PROPOSED_GENIE: 2,
    Scheme.NONCOOP: 1,
    Scheme.ALAMOUTI: 2,
}
BASELINES: typing.Final = frozenset({Scheme.NONCOOP, Scheme.ALAMOUTI})


class SweepPoint(typing.NamedTuple):
    config: SchemeConfig
    ebn0_db: float
    seed: int


def trial_frames(config: SchemeConfig, rule: StoppingRule, trial_index: int) -> int:
    """Frames in trial ``trial_index``; the last trial is cut to land on
    ``max_bits``. Depends only on the index, never on results."""

    max_frames = math.ceil(rule.max_bits / BITS_PER_FRAME[config.scheme])
    remaining = max_frames - trial_index * rule.frames_per_trial
    return max(0, min(rule.frames_per_trial, remaining))


def run_trial(
    config: SchemeConfig,
    ebn0_db: float,
    rule: StoppingRule,
    seed: int,
    trial_index: int,
) -> typing.Tuple[int, int]:
    """One independently seeded batch of frames: ``(bits, errors)``."""

    frames = trial_frames(config, rule, trial_index)
    batch = simulate_frames(config, ebn0_db, trial_rng(seed, trial_index), frames)
    return batch.bits, batch.final_error_count


def _run_trial_args(args: typing.Tuple) -> typing.Tuple[int, int]:
    return run_trial(*args)


def run_ber_point(
    config: SchemeConfig,
    ebn0_db: float,
    rule: StoppingRule,
    seed: int,
    *,
    workers: int = 1,
) -> BerRecord:
    """Simulate until ``rule.min_errors`` errors or ``rule.max_bits`` bits.

    Trials run in waves of ``workers`` but are merged strictly in trial order
    and merging stops at the first trial meeting the rule, so the record does
    not depend on the worker count.
    """

    with logfire.span(
        f"run_ber_point:{config.scheme.value}",
        ebn0_db=ebn0_db,
        beta_db=config.profile.beta_db,
        timing_sigma=config.timing_sigma,
        seed=seed,
    ) as span:
        bits = errors = 0
        trial_index = 0
        done = False
        executor = (
            concurrent.futures.ProcessPoolExecutor(max_workers=workers)
            if workers > 1
            else None
        )
        try:
            while not done:
                wave = [
                    (config, ebn0_db, rule, seed, trial_index + i)
                    for i in range(max(1, workers))
                    if trial_frames(config, rule, trial_index + i) > 0
                ]
                if not wave:
                    break
                results = (
                    executor.map(_run_trial_args, wave)
                    if executor is not None
                    else map(_run_trial_args, wave)
                )
                for trial_bits, trial_errors in results:
                    bits += trial_bits
                    errors += trial_errors
                    trial_index += 1
                    if errors >= rule.min_errors or bits >= rule.max_bits:
                        done = True
                        break
        finally:
            if executor is not None:
                executor.shutdown(cancel_futures=True)

        truncated = errors < rule.min_errors
        ci_low, ci_high = wilson_interval(errors, bits, rule.confidence)
        span.set_attributes({"bits": bits, "errors": errors, "truncated": truncated})
        if truncated:
            logger.info(
                f"{config.scheme.value} @ {ebn0_db} dB truncated at {bits} bits "
                + f"with {errors} errors"
            )

        return BerRecord(
            scheme=config.scheme,
            ebn0_db=ebn0_db,
            beta_db=config.profile.beta_db,
            mu_db=config.profile.effective_mu_db,
            timing_sigma=config.timing_sigma,
            bits=bits,
            errors=errors,
            ber=errors / bits,
            ci_low=ci_low,
            ci_high=ci_high,
            truncated=truncated,
            seed=seed,
        )


def sweep_points(spec: SweepSpec) -> typing.List[SweepPoint]:
    """Grid points in output order: scheme, beta, timing sigma, then Eb/N0.

    Baselines ignore beta and timing error, so they are evaluated once per
    Eb/N0 at the first value of each of those grids.
    """

    points: typing.List[SweepPoint] = []
    for scheme in spec.schemes:
        baseline = scheme in BASELINES
        betas = spec.beta_grid[:1] if baseline else spec.beta_grid
        sigmas = spec.timing_sigma_grid[:1] if baseline else spec.timing_sigma_grid
        for beta_index, beta_db in enumerate(betas):
            profile = spec.template.profile.model_copy(update={"beta_db": beta_db})
            for sigma_index, sigma in enumerate(sigmas):
                config = spec.template.model_copy(
                    update={
                        "scheme": scheme,
                        "profile": profile,
                        "timing_sigma": sigma,
                    }
                )
                config = SchemeConfig.model_validate(config.model_dump())
                for ebn0_index, ebn0_db in enumerate(spec.ebn0_grid):
                    seed = derive_seed(
                        spec.base_seed,
                        stable_key(scheme.value),
                        ebn0_index,
                        beta_index,
                        sigma_index,
                    )
                    points.append(SweepPoint(config, ebn0_db, seed))
    return points


def _run_point(point: SweepPoint, rule: StoppingRule) -> BerRecord:
    try:
        return run_ber_point(point.config, point.ebn0_db, rule, point.seed)
    except Exception as e:
        raise SweepPointError(
            str(e),
            scheme=point.config.scheme.value,
            ebn0_db=point.ebn0_db,
            beta_db=point.config.profile.beta_db,
            timing_sigma=point.config.timing_sigma,
        ) from e


def run_sweep(
    spec: SweepSpec,
    *,
    workers: int = 1,
    cache: typing.Optional[PointCache] = None,
    on_record: typing.Optional[typing.Callable[[BerRecord], None]] = None,
) -> typing.List[BerRecord]:
    """Evaluate every grid point; points run in parallel across ``workers``
    processes and records come back in grid order."""

    points = sweep_points(spec)
    with logfire.span("run_sweep", points=len(points), workers=workers):
        records: typing.List[typing.Optional[BerRecord]] = [None] * len(points)
        keys = [
            point_key(p.config, p.ebn0_db, spec.rule, p.seed) for p in points
        ]
        pending: typing.List[int] = []
        for i, key in enumerate(keys):
            cached = cache.get(key) if cache is not None else None
            if cached is not None:
                records[i] = cached
            else:
                pending.append(i)
        logger.info(
            f"Sweep: {len(points)} points, {len(points) - len(pending)} cached"
        )

        def finish(i: int, record: BerRecord) -> None:
            records[i] = record
            if cache is not None:
                cache.set(keys[i], record)
            if on_record is not None:
                on_record(record)

        if workers > 1 and len(pending) > 1:
            with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as pool:
                futures = {
                    i: pool.submit(_run_point, points[i], spec.rule) for i in pending
                }
                for i in pending:
                    finish(i, futures[i].result())
        else:
            for i in pending:
                finish(i, _run_point(points[i], spec.rule))

        return [r for r in records if r is not None]
