import typing

import numpy as np
import numpy.typing as npt
import pydantic

from collabdiv.detectors.hypotheses import HypothesisSet
from collabdiv.shared.errors import InvalidArgumentError

TIE_THRESHOLD: typing.Final = 1e-12


class DetectionResult(pydantic.BaseModel):
    model_config = pydantic.ConfigDict(frozen=True)

    decided_tuple: typing.Tuple[complex, ...]
    index: int = pydantic.Field(ge=0)
    metric: float = pydantic.Field(ge=0)
    tie_flag: bool = False


class BatchDetection(pydantic.BaseModel):
    """Vectorized detector output: one decision per leading index."""

    model_config = pydantic.ConfigDict(frozen=True, arbitrary_types_allowed=True)

    indices: np.ndarray
    symbols: np.ndarray
    metrics: np.ndarray
    ties: np.ndarray


def _check_hypotheses(hypotheses: HypothesisSet) -> np.ndarray:
    if len(hypotheses) == 0:
        raise InvalidArgumentError("Hypothesis set is empty")
    return hypotheses.as_array()


def _squared_distances(
    z: npt.NDArray[np.complex128],
    gains: npt.NDArray[np.complex128],
    amplitude: float,
    candidates: npt.NDArray[np.complex128],
) -> npt.NDArray[np.float64]:
    # (..., Q) metrics |z - a * sum_l b_q[l] g[l]|^2
    if gains.shape[-1] != candidates.shape[-1]:
        raise InvalidArgumentError(
            f"Expected {candidates.shape[-1]} gains, got {gains.shape[-1]}"
        )
    expected = amplitude * np.einsum("...l,ql->...q", gains, candidates)
    return np.abs(z[..., np.newaxis] - expected) ** 2


def _decide(
    metrics: npt.NDArray[np.float64], candidates: npt.NDArray[np.complex128]
) -> BatchDetection:
    # argmin returns the first minimum, i.e. the lowest hypothesis index.
    indices = np.argmin(metrics, axis=-1)
    best = np.take_along_axis(metrics, indices[..., np.newaxis], axis=-1)[..., 0]
    if metrics.shape[-1] > 1:
        runner_up = np.partition(metrics, 1, axis=-1)[..., 1]
        ties = (runner_up - best) < TIE_THRESHOLD
    else:
        ties = np.zeros(best.shape, dtype=bool)
    return BatchDetection(
        indices=indices,
        symbols=candidates[indices],
        metrics=best,
        ties=ties,
    )


def ml_joint_detect_batch(
    z: npt.ArrayLike,
    gains: npt.ArrayLike,
    amplitude: float,
    hypotheses: HypothesisSet,
) -> BatchDetection:
    candidates = _check_hypotheses(hypotheses)
    metrics = _squared_distances(
        np.asarray(z, dtype=np.complex128),
        np.asarray(gains, dtype=np.complex128),
        amplitude,
        candidates,
    )
    return _decide(metrics, candidates)


def ml_joint_detect_combined_batch(
    z: npt.ArrayLike,
    z_prime: npt.ArrayLike,
    gains: npt.ArrayLike,
    gains_prime: npt.ArrayLike,
    amplitude: float,
    hypotheses: HypothesisSet,
) -> BatchDetection:
    candidates = _check_hypotheses(hypotheses)
    metrics = _squared_distances(
        np.asarray(z, dtype=np.complex128),
        np.asarray(gains, dtype=np.complex128),
        amplitude,
        candidates,
    ) + _squared_distances(
        np.asarray(z_prime, dtype=np.complex128),
        np.asarray(gains_prime, dtype=np.complex128),
        amplitude,
        candidates,
    )
    return _decide(metrics, candidates)


def _to_result(batch: BatchDetection) -> DetectionResult:
    return DetectionResult(
        decided_tuple=tuple(complex(s) for s in batch.symbols),
        index=int(batch.indices),
        metric=float(batch.metrics),
        tie_flag=bool(batch.ties),
    )


def ml_joint_detect(
    z: complex,
    gains: typing.Sequence[complex],
    amplitude: float,
    hypotheses: HypothesisSet,
) -> DetectionResult:
    """Single-observation joint ML decision over all co-channel tuples."""
    return _to_result(ml_joint_detect_batch(z, gains, amplitude, hypotheses))


def ml_joint_detect_combined(
    z: complex,
    z_prime: complex,
    gains: typing.Sequence[complex],
    gains_prime: typing.Sequence[complex],
    amplitude: float,
    hypotheses: HypothesisSet,
) -> DetectionResult:
    """Joint ML decision over the summed metrics of both access periods."""
    return _to_result(
        ml_joint_detect_combined_batch(
            z, z_prime, gains, gains_prime, amplitude, hypotheses
        )
    )
