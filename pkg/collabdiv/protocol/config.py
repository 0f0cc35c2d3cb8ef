import enum
import math
import typing

import numpy as np
import pydantic

from collabdiv.channel.fading import PowerProfile
from collabdiv.shared.errors import InvalidArgumentError
from collabdiv.sigproc.alphabet import BPSK, SymbolAlphabet
from collabdiv.sigproc.codes import is_power_of_two

GROUP_SIZE: typing.Final = 2


class Scheme(str, enum.Enum):
    PROPOSED = "proposed"
    PROPOSED_GENIE = "proposed_genie"
    NONCOOP = "noncoop"
    ALAMOUTI = "alamouti"

    @classmethod
    def parse(cls, value: typing.Text) -> "Scheme":
        try:
            return cls(value.strip().lower().replace("-", "_"))
        except ValueError as e:
            raise InvalidArgumentError(f"Unknown scheme: {value}") from e


class SchemeConfig(pydantic.BaseModel):
    model_config = pydantic.ConfigDict(frozen=True)

    scheme: Scheme = Scheme.PROPOSED
    users: int = GROUP_SIZE
    spreading: int = 16
    groups: int = 1
    profile: PowerProfile = pydantic.Field(default_factory=PowerProfile)
    timing_sigma: float = pydantic.Field(default=0.0, ge=0)
    alphabet: SymbolAlphabet = BPSK
    # ``None`` draws the observed group uniformly per frame.
    observed_group: typing.Optional[int] = 0

    @pydantic.model_validator(mode="after")
    def validate_config(self) -> "SchemeConfig":
        if self.users != GROUP_SIZE:
            raise ValueError(f"Only groups of {GROUP_SIZE} users are supported")
        if not is_power_of_two(self.spreading):
            raise ValueError("Spreading factor must be a power of two")
        if self.groups not in (1, self.spreading):
            raise ValueError("Active groups must be 1 or the spreading factor")
        if not math.isfinite(self.timing_sigma):
            raise ValueError("Timing sigma must be finite")
        if self.observed_group is not None and not (
            0 <= self.observed_group < self.spreading
        ):
            raise ValueError("Observed group must index a spreading code")
        if self.alphabet.cardinality != 2:
            raise ValueError("Frame simulators transmit BPSK symbols")
        return self

    @property
    def fully_loaded(self) -> bool:
        return self.groups == self.spreading

    def require(self, *schemes: Scheme) -> None:
        if self.scheme not in schemes:
            raise InvalidArgumentError(
                f"Scheme {self.scheme.value} not handled here, expected one of "
                + ", ".join(s.value for s in schemes)
            )


class EnergyModel(pydantic.BaseModel):
    """Transmit amplitude per period and the resulting energy per information
    bit."""

    model_config = pydantic.ConfigDict(frozen=True)

    per_period_amplitude: float = pydantic.Field(gt=0)
    energy_per_bit: float = pydantic.Field(gt=0)


def energy_model(config: SchemeConfig) -> EnergyModel:
    if config.scheme in (Scheme.PROPOSED, Scheme.PROPOSED_GENIE):
        # One share at the source in period 1, one at the relay in period 2.
        power = config.profile.per_terminal_power
        return EnergyModel(
            per_period_amplitude=math.sqrt(power), energy_per_bit=2 * power
        )
    if config.scheme == Scheme.ALAMOUTI:
        # Two antennas at half power each over two symbol periods carrying two
        # symbols.
        return EnergyModel(per_period_amplitude=math.sqrt(0.5), energy_per_bit=1.0)
    return EnergyModel(per_period_amplitude=1.0, energy_per_bit=1.0)


class FrameBatch(pydantic.BaseModel):
    """Symbols of ``frames`` independent frames; axis 0 indexes frames."""

    model_config = pydantic.ConfigDict(frozen=True, arbitrary_types_allowed=True)

    tx_bits: np.ndarray
    rx_bits: np.ndarray
    relay_bits: typing.Optional[np.ndarray] = None

    @property
    def frames(self) -> int:
        return int(self.tx_bits.shape[0])

    @property
    def bits(self) -> int:
        return int(self.tx_bits.size)

    @property
    def final_error_count(self) -> int:
        return int(np.count_nonzero(self.rx_bits != self.tx_bits))

    @property
    def relay_error_count(self) -> int:
        if self.relay_bits is None:
            return 0
        return int(np.count_nonzero(self.relay_bits != self.tx_bits))

    def frame(self, index: int) -> "FrameResult":
        return FrameResult(
            tx_bits=_to_ints(self.tx_bits[index]),
            rx_bits=_to_ints(self.rx_bits[index]),
            relay_bits=(
                _to_ints(self.relay_bits[index])
                if self.relay_bits is not None
                else None
            ),
        )


class FrameResult(pydantic.BaseModel):
    model_config = pydantic.ConfigDict(frozen=True)

    tx_bits: typing.Tuple[int, ...]
    rx_bits: typing.Tuple[int, ...]
    relay_bits: typing.Optional[typing.Tuple[int, ...]] = None

    @pydantic.model_validator(mode="after")
    def validate_symbols(self) -> "FrameResult":
        for bits in (self.tx_bits, self.rx_bits, self.relay_bits or ()):
            if any(b not in (-1, 1) for b in bits):
                raise ValueError("Frame symbols must be +1 or -1")
        if len(self.rx_bits) != len(self.tx_bits):
            raise ValueError("Decided and transmitted symbols differ in length")
        return self

    @property
    def final_error_count(self) -> int:
        return sum(a != b for a, b in zip(self.tx_bits, self.rx_bits))

    @property
    def relay_error_count(self) -> int:
        if self.relay_bits is None:
            return 0
        return sum(a != b for a, b in zip(self.tx_bits, self.relay_bits))


def _to_ints(values: np.ndarray) -> typing.Tuple[int, ...]:
    return tuple(int(round(float(np.real(v)))) for v in np.atleast_1d(values))
