import logging
import math
import typing

import numpy as np
import scipy.stats

from collabdiv.harness.records import BerRecord
from collabdiv.shared.errors import InvalidArgumentError, NotEstimableError

logger = logging.getLogger(__name__)


def wilson_interval(
    errors: int, bits: int, confidence: float = 0.95
) -> typing.Tuple[float, float]:
    """Wilson score interval for a binomial proportion."""

    if bits < 1 or errors < 0 or errors > bits:
        raise InvalidArgumentError(f"Invalid counts: errors={errors}, bits={bits}")
    if not 0 < confidence < 1:
        raise InvalidArgumentError(f"Confidence must be in (0, 1), got {confidence}")

    z = float(scipy.stats.norm.ppf(0.5 + confidence / 2.0))
    p = errors / bits
    z2n = z * z / bits
    center = (p + z2n / 2.0) / (1.0 + z2n)
    half = z / (1.0 + z2n) * math.sqrt(p * (1.0 - p) / bits + z2n / (4.0 * bits))
    low = max(0.0, min(center - half, p))
    high = min(1.0, max(center + half, p))
    return low, high


def _sorted_curve(
    records: typing.Sequence[BerRecord],
) -> typing.Tuple[np.ndarray, np.ndarray]:
    ordered = sorted(records, key=lambda r: r.ebn0_db)
    ebn0 = np.array([r.ebn0_db for r in ordered], dtype=np.float64)
    ber = np.array([r.ber for r in ordered], dtype=np.float64)
    return ebn0, ber


def estimate_diversity_order(records: typing.Sequence[BerRecord]) -> float:
    """Least-squares slope of ``-log10(BER)`` against ``Eb/N0 / 10``."""

    if len(records) < 2:
        raise NotEstimableError("At least two BER points are required")
    ebn0, ber = _sorted_curve(records)
    if len(set(ebn0.tolist())) != len(ebn0):
        raise NotEstimableError("Eb/N0 values must be distinct")
    if np.any(ber <= 0):
        raise NotEstimableError("Diversity order needs nonzero BER at every point")
    slope, _ = np.polyfit(ebn0 / 10.0, -np.log10(ber), 1)
    return float(slope)


def required_ebn0_at_ber(
    records: typing.Sequence[BerRecord], target_ber: float
) -> float:
    """Eb/N0 where the curve crosses ``target_ber``, interpolated linearly in
    (dB, log10 BER)."""

    if not 0 < target_ber < 1:
        raise InvalidArgumentError(f"Target BER must be in (0, 1), got {target_ber}")
    ebn0, ber = _sorted_curve([r for r in records if r.ber > 0])
    log_target = math.log10(target_ber)
    log_ber = np.log10(ber)
    for i in range(len(ebn0) - 1):
        upper, lower = log_ber[i], log_ber[i + 1]
        if upper >= log_target >= lower:
            if upper == lower:
                return float(ebn0[i])
            t = (upper - log_target) / (upper - lower)
            return float(ebn0[i] + t * (ebn0[i + 1] - ebn0[i]))
    raise NotEstimableError(f"Curve does not bracket BER {target_ber:g}")


def ebn0_gain_at_ber(
    curve_a: typing.Sequence[BerRecord],
    curve_b: typing.Sequence[BerRecord],
    target_ber: float,
) -> float:
    """Required Eb/N0 of ``curve_b`` minus that of ``curve_a`` at ``target_ber``;
    positive when ``curve_a`` is better."""

    gain = required_ebn0_at_ber(curve_b, target_ber) - required_ebn0_at_ber(
        curve_a, target_ber
    )
    logger.debug(f"Eb/N0 gain at BER {target_ber:g}: {gain:.3f} dB")
    return gain


def select_curve(
    records: typing.Iterable[BerRecord],
    scheme: typing.Text,
    *,
    beta_db: typing.Optional[float] = None,
    timing_sigma: typing.Optional[float] = None,
    min_ebn0_db: float = -math.inf,
    max_ebn0_db: float = math.inf,
) -> typing.List[BerRecord]:
    curve = [
        r
        for r in records
        if r.scheme.value == scheme
        and (beta_db is None or math.isclose(r.beta_db, beta_db))
        and (timing_sigma is None or math.isclose(r.timing_sigma, timing_sigma))
        and min_ebn0_db <= r.ebn0_db <= max_ebn0_db
    ]
    return sorted(curve, key=lambda r: r.ebn0_db)
