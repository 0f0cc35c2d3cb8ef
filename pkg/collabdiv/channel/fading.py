import math
import typing

import numpy as np
import numpy.typing as npt
import pydantic

from collabdiv.shared.errors import InvalidArgumentError


def db_to_linear(value_db: float) -> float:
    return 10.0 ** (value_db / 10.0)


class PowerProfile(pydantic.BaseModel):
    """Link-quality ratios for one group.

    ``beta_db`` is the own user-to-relay link power over the uplink power and
    ``mu_db`` the own user-to-relay power over the co-channel-user-to-relay
    power. ``mu_db=None`` sets ``mu = beta``, the worst case studied.
    """

    model_config = pydantic.ConfigDict(frozen=True)

    uplink_variance: float = pydantic.Field(default=1.0, gt=0)
    beta_db: float = 10.0
    mu_db: typing.Optional[float] = None
    per_terminal_power: float = pydantic.Field(default=0.5, gt=0)

    @pydantic.field_validator("beta_db", "mu_db")
    @classmethod
    def validate_finite(cls, value: typing.Optional[float]) -> typing.Optional[float]:
        if value is not None and not math.isfinite(value):
            raise ValueError("Power ratios must be finite dB values")
        return value

    @property
    def effective_mu_db(self) -> float:
        return self.beta_db if self.mu_db is None else self.mu_db

    @property
    def beta(self) -> float:
        return db_to_linear(self.beta_db)

    @property
    def mu(self) -> float:
        return db_to_linear(self.effective_mu_db)

    @property
    def own_relay_variance(self) -> float:
        return self.beta * self.uplink_variance

    @property
    def cross_relay_variance(self) -> float:
        return self.beta / self.mu * self.uplink_variance

    def user_to_relay_variances(self) -> np.ndarray:
        own, cross = self.own_relay_variance, self.cross_relay_variance
        return np.array([[own, cross], [cross, own]], dtype=np.float64)


class GroupChannelState(pydantic.BaseModel):
    """Fading gains of one group for one frame (or a batch of frames).

    ``user_to_relay[..., l, i]`` is the gain from user ``ki`` to relay ``kl``;
    the diagonal holds own-user links.
    """

    model_config = pydantic.ConfigDict(frozen=True, arbitrary_types_allowed=True)

    uplink_p1: np.ndarray
    uplink_p2: np.ndarray
    user_to_relay: np.ndarray

    @pydantic.model_validator(mode="after")
    def validate_gains(self) -> "GroupChannelState":
        if self.uplink_p1.shape[-1:] != (2,) or self.uplink_p2.shape[-1:] != (2,):
            raise ValueError("Uplink gains must have a trailing axis of length 2")
        if self.user_to_relay.shape[-2:] != (2, 2):
            raise ValueError("User-to-relay gains must have trailing shape (2, 2)")
        for gains in (self.uplink_p1, self.uplink_p2, self.user_to_relay):
            if not np.all(np.isfinite(gains)):
                raise ValueError("Channel gains must be finite")
        return self

    @property
    def frames(self) -> int:
        return int(np.prod(self.uplink_p1.shape[:-1], dtype=np.int64))

    def relay_gains(self, relay: int) -> np.ndarray:
        """Gains (user k1, user k2) as seen by relay ``relay``."""
        return self.user_to_relay[..., relay, :]


def _complex_normal(
    rng: np.random.Generator, size: typing.Optional[typing.Tuple[int, ...]]
) -> complex | npt.NDArray[np.complex128]:
    # Unit-variance circularly-symmetric complex Gaussian.
    re = rng.standard_normal(size)
    im = rng.standard_normal(size)
    return (re + 1j * im) * math.sqrt(0.5)


def draw_rayleigh_gain(
    rng: np.random.Generator,
    variance: float,
    size: typing.Optional[typing.Tuple[int, ...]] = None,
) -> complex | npt.NDArray[np.complex128]:
    if variance < 0:
        raise InvalidArgumentError(f"Variance must be nonnegative, got {variance}")
    gain = _complex_normal(rng, size) * math.sqrt(variance)
    if size is None:
        return complex(gain)
    return gain


def draw_group_channels(
    rng: np.random.Generator,
    profile: PowerProfile,
    frames: typing.Optional[int] = None,
) -> GroupChannelState:
    lead: typing.Tuple[int, ...] = () if frames is None else (frames,)
    std_uplink = math.sqrt(profile.uplink_variance)
    uplink_p1 = _complex_normal(rng, lead + (2,)) * std_uplink
    uplink_p2 = _complex_normal(rng, lead + (2,)) * std_uplink
    user_to_relay = _complex_normal(rng, lead + (2, 2)) * np.sqrt(
        profile.user_to_relay_variances()
    )
    return GroupChannelState(
        uplink_p1=np.asarray(uplink_p1),
        uplink_p2=np.asarray(uplink_p2),
        user_to_relay=np.asarray(user_to_relay),
    )
