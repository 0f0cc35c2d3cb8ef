"""Closed-form BPSK error rates over Rayleigh fading, used as oracles."""

import typing

import numpy as np
import numpy.typing as npt
import scipy.optimize
import scipy.special

from collabdiv.channel.fading import db_to_linear
from collabdiv.protocol.config import Scheme
from collabdiv.shared.errors import NotEstimableError


def rayleigh_bpsk_ber(mean_snr: npt.ArrayLike) -> typing.Any:
    snr = np.asarray(mean_snr, dtype=np.float64)
    return 0.5 * (1.0 - np.sqrt(snr / (1.0 + snr)))


def mrc_bpsk_ber(branch_snr: npt.ArrayLike, branches: int) -> typing.Any:
    p = rayleigh_bpsk_ber(branch_snr)
    total = sum(
        scipy.special.comb(branches - 1 + k, k) * (1.0 - p) ** k
        for k in range(branches)
    )
    return p**branches * total


def alamouti_bpsk_ber(mean_snr: npt.ArrayLike) -> typing.Any:
    # Transmit power is split over the two antennas.
    return mrc_bpsk_ber(np.asarray(mean_snr, dtype=np.float64) / 2.0, 2)


THEORY: typing.Final[typing.Dict[Scheme, typing.Callable[[typing.Any], typing.Any]]] = {
    Scheme.NONCOOP: rayleigh_bpsk_ber,
    Scheme.ALAMOUTI: alamouti_bpsk_ber,
}


def theoretical_ber(scheme: Scheme, ebn0_db: float) -> typing.Optional[float]:
    func = THEORY.get(scheme)
    if func is None:
        return None
    return float(func(db_to_linear(ebn0_db)))


def required_ebn0_db(scheme: Scheme, target_ber: float) -> float:
    func = THEORY.get(scheme)
    if func is None:
        raise NotEstimableError(f"No closed form for scheme {scheme.value}")
    return float(
        scipy.optimize.brentq(
            lambda db: np.log10(func(db_to_linear(db))) - np.log10(target_ber),
            -30.0,
            90.0,
        )
    )
