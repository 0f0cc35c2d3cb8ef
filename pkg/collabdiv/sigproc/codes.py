import math
import typing

import numpy as np
import pydantic
import scipy.linalg

from collabdiv.shared.errors import InvalidArgumentError

ORTHONORMAL_TOLERANCE: typing.Final = 1e-12


def is_power_of_two(value: int) -> bool:
    return value >= 1 and (value & (value - 1)) == 0


class SpreadingCodeSet(pydantic.BaseModel):
    """Rows of a normalized Sylvester-Hadamard matrix; row ``k`` is ``c_k``."""

    model_config = pydantic.ConfigDict(frozen=True, arbitrary_types_allowed=True)

    order: int
    codes: np.ndarray

    @pydantic.model_validator(mode="after")
    def validate_codes(self) -> "SpreadingCodeSet":
        if not is_power_of_two(self.order):
            raise ValueError(f"Code order must be a power of two, got {self.order}")
        if self.codes.shape != (self.order, self.order):
            raise ValueError(
                f"Expected {self.order}x{self.order} codes, got {self.codes.shape}"
            )
        gram = self.codes @ self.codes.T
        if not np.allclose(gram, np.eye(self.order), atol=ORTHONORMAL_TOLERANCE):
            raise ValueError("Spreading codes are not orthonormal")
        self.codes.setflags(write=False)
        return self

    def code(self, index: int) -> np.ndarray:
        if not 0 <= index < self.order:
            raise InvalidArgumentError(
                f"Code index {index} out of range for order {self.order}"
            )
        return self.codes[index]

    def gram(self) -> np.ndarray:
        return self.codes @ self.codes.T


def generate_walsh_hadamard(order: int) -> SpreadingCodeSet:
    if not isinstance(order, (int, np.integer)) or not is_power_of_two(int(order)):
        raise InvalidArgumentError(f"Order must be a power of two >= 1, got {order}")
    order = int(order)
    codes = scipy.linalg.hadamard(order, dtype=np.float64) / math.sqrt(order)
    return SpreadingCodeSet(order=order, codes=codes)
