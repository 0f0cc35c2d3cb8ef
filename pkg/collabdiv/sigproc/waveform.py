import typing

import numpy as np
import numpy.typing as npt

from collabdiv.shared.errors import InvalidArgumentError
from collabdiv.sigproc.codes import SpreadingCodeSet

# Complex chip samples; the last axis is one symbol period of N chips and any
# leading axes index independent frames.
ChipFrame: typing.TypeAlias = npt.NDArray[np.complex128]


def spread(
    symbol: complex | npt.ArrayLike,
    amplitude: float,
    code_index: int,
    code_set: SpreadingCodeSet,
) -> ChipFrame:
    """Chip frame ``amplitude * symbol * c_k``; array symbols give one frame per
    symbol."""

    if amplitude < 0:
        raise InvalidArgumentError(f"Amplitude must be nonnegative, got {amplitude}")
    code = code_set.code(code_index)
    symbols = np.asarray(symbol, dtype=np.complex128)
    return amplitude * symbols[..., np.newaxis] * code


def despread(
    frame: ChipFrame,
    code_index: int | npt.NDArray[np.integer],
    code_set: SpreadingCodeSet,
) -> complex | npt.NDArray[np.complex128]:
    frame = np.asarray(frame, dtype=np.complex128)
    if frame.ndim == 0 or frame.shape[-1] != code_set.order:
        raise InvalidArgumentError(
            f"Frame length {frame.shape[-1:]} does not match code order "
            + f"{code_set.order}"
        )

    if np.ndim(code_index) == 0:
        code = code_set.code(int(code_index))  # type: ignore[arg-type]
        out = frame @ code
    else:
        indices = np.asarray(code_index)
        if indices.min() < 0 or indices.max() >= code_set.order:
            raise InvalidArgumentError("Code index out of range")
        out = np.einsum("...j,...j->...", frame, code_set.codes[indices])

    if np.ndim(out) == 0:
        return complex(out)
    return out


def _shifted(frame: ChipFrame, shift: npt.NDArray[np.int64]) -> ChipFrame:
    # out[..., j] = frame[..., j - shift], zero where j - shift falls outside.
    n = frame.shape[-1]
    source = np.arange(n) - shift[..., np.newaxis]
    shape = np.broadcast_shapes(frame.shape, source.shape)
    source = np.broadcast_to(source, shape)
    valid = (source >= 0) & (source < n)
    gathered = np.take_along_axis(
        np.broadcast_to(frame, shape), np.clip(source, 0, n - 1), axis=-1
    )
    return np.where(valid, gathered, 0.0 + 0.0j)


def apply_fractional_delay(
    frame: ChipFrame, tau: float | npt.NDArray[np.floating]
) -> ChipFrame:
    """Delay rectangular chips by ``tau`` chips and resample at chip instants.

    For ``tau = n + f`` with ``0 <= f < 1`` the output is
    ``(1 - f) * in[j - n] + f * in[j - n - 1]``; negative ``tau`` advances the
    frame. Chips shifted in from outside the frame are zero. ``tau`` may be an
    array matching the frame's leading axes.
    """

    frame = np.asarray(frame, dtype=np.complex128)
    n_chips = frame.shape[-1]
    tau_arr = np.asarray(tau, dtype=np.float64)
    if np.any(np.abs(tau_arr) >= n_chips):
        raise InvalidArgumentError(
            f"Delay magnitude must be below the frame length {n_chips}"
        )
    if not np.any(tau_arr):
        return frame.copy()

    direction = np.where(tau_arr < 0, -1, 1)
    magnitude = np.abs(tau_arr)
    whole = np.floor(magnitude).astype(np.int64)
    frac = (magnitude - whole)[..., np.newaxis]

    lead = _shifted(frame, direction * whole)
    lag = _shifted(frame, direction * (whole + 1))
    return (1.0 - frac) * lead + frac * lag


def compose_multiuser_chip_signal(
    components: typing.Sequence[typing.Tuple[ChipFrame, float]],
) -> ChipFrame:
    if not components:
        raise InvalidArgumentError("At least one component is required")

    length = np.shape(components[0][0])[-1]
    total: ChipFrame | None = None
    for frame, tau in components:
        frame = np.asarray(frame, dtype=np.complex128)
        if frame.shape[-1] != length:
            raise InvalidArgumentError(
                f"Component length {frame.shape[-1]} does not match {length}"
            )
        delayed = frame if tau == 0 else apply_fractional_delay(frame, tau)
        total = delayed.copy() if total is None else total + delayed
    assert total is not None
    return total
