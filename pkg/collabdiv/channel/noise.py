import math
import typing

import numpy as np
import numpy.typing as npt
import pydantic

from collabdiv.channel.fading import db_to_linear
from collabdiv.shared.errors import InvalidArgumentError


class NoiseModel(pydantic.BaseModel):
    """Complex AWGN of variance ``n0`` per chip; unit-norm despreading keeps
    ``n0`` per despread output."""

    model_config = pydantic.ConfigDict(frozen=True)

    n0: float = pydantic.Field(ge=0)

    @property
    def std(self) -> float:
        return math.sqrt(self.n0)


def noise_variance_from_ebn0(ebn0_db: float, energy_per_bit: float) -> NoiseModel:
    if energy_per_bit <= 0:
        raise InvalidArgumentError(
            f"Energy per bit must be positive, got {energy_per_bit}"
        )
    return NoiseModel(n0=energy_per_bit / db_to_linear(ebn0_db))


def add_awgn(
    signal: complex | npt.ArrayLike,
    noise: NoiseModel,
    rng: np.random.Generator,
) -> typing.Any:
    values = np.asarray(signal, dtype=np.complex128)
    if noise.n0 == 0:
        out = values.copy()
    else:
        re = rng.standard_normal(values.shape)
        im = rng.standard_normal(values.shape)
        out = values + (re + 1j * im) * math.sqrt(noise.n0 / 2.0)
    if out.ndim == 0:
        return complex(out)
    return out
