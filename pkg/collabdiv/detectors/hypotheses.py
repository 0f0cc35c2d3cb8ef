import itertools
import typing

import numpy as np
import pydantic

from collabdiv.shared.errors import InvalidArgumentError
from collabdiv.sigproc.alphabet import SymbolAlphabet


class HypothesisSet(pydantic.BaseModel):
    """All ``M**L`` candidate symbol tuples in lexicographic alphabet order."""

    model_config = pydantic.ConfigDict(frozen=True)

    alphabet: SymbolAlphabet
    users: int
    tuples: typing.Tuple[typing.Tuple[complex, ...], ...]

    @pydantic.model_validator(mode="after")
    def validate_tuples(self) -> "HypothesisSet":
        expected = self.alphabet.cardinality**self.users
        if len(self.tuples) != expected:
            raise ValueError(f"Expected {expected} hypotheses, got {len(self.tuples)}")
        if len(set(self.tuples)) != len(self.tuples):
            raise ValueError("Hypotheses must be distinct")
        return self

    def __len__(self) -> int:
        return len(self.tuples)

    def as_array(self) -> np.ndarray:
        """Shape ``(Q, L)`` complex matrix, one hypothesis per row."""
        return np.asarray(self.tuples, dtype=np.complex128).reshape(
            len(self.tuples), self.users
        )


def enumerate_hypotheses(alphabet: SymbolAlphabet, users: int) -> HypothesisSet:
    if users < 1:
        raise InvalidArgumentError(f"Group size must be >= 1, got {users}")
    return HypothesisSet(
        alphabet=alphabet,
        users=users,
        tuples=tuple(itertools.product(alphabet.points, repeat=users)),
    )
