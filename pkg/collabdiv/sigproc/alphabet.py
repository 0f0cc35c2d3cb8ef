import math
import typing

import numpy as np
import pydantic

ENERGY_TOLERANCE: typing.Final = 1e-9


class SymbolAlphabet(pydantic.BaseModel):
    """Constellation points in canonical order; index order defines hypothesis
    order."""

    model_config = pydantic.ConfigDict(frozen=True)

    name: typing.Text
    points: typing.Tuple[complex, ...]

    @pydantic.field_validator("points")
    @classmethod
    def validate_points(
        cls, points: typing.Tuple[complex, ...]
    ) -> typing.Tuple[complex, ...]:
        if len(points) < 2:
            raise ValueError("An alphabet needs at least two points")
        if len(set(points)) != len(points):
            raise ValueError("Alphabet points must be distinct")
        energy = sum(abs(p) ** 2 for p in points) / len(points)
        if abs(energy - 1.0) > ENERGY_TOLERANCE:
            raise ValueError(f"Alphabet must have unit average energy, got {energy}")
        return points

    @property
    def cardinality(self) -> int:
        return len(self.points)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.points, dtype=np.complex128)

    def draw(
        self, rng: np.random.Generator, size: typing.Tuple[int, ...]
    ) -> np.ndarray:
        return self.as_array()[rng.integers(self.cardinality, size=size)]


BPSK: typing.Final = SymbolAlphabet(name="bpsk", points=(-1 + 0j, 1 + 0j))
QPSK: typing.Final = SymbolAlphabet(
    name="qpsk",
    points=tuple(
        complex(re, im) / math.sqrt(2) for re in (-1, 1) for im in (-1, 1)
    ),
)
