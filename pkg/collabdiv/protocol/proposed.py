"""Two-period collaborative scheme for one group of two users and two relays.

Period 1: both users transmit on the group's code; each relay jointly detects
the co-channel pair and keeps its own user's symbol. Period 2: the relays
forward their decisions on the same code. The base-station combines both
despread observations in one joint ML decision.
"""

import logging
import typing

import numpy as np
import numpy.typing as npt

from collabdiv.channel.fading import draw_group_channels, draw_rayleigh_gain
from collabdiv.channel.noise import NoiseModel, add_awgn, noise_variance_from_ebn0
from collabdiv.detectors.hypotheses import enumerate_hypotheses
from collabdiv.detectors.joint_ml import (
    ml_joint_detect_batch,
    ml_joint_detect_combined_batch,
)
from collabdiv.protocol.config import (
    FrameBatch,
    FrameResult,
    Scheme,
    SchemeConfig,
    energy_model,
)
from collabdiv.shared.errors import InvalidArgumentError
from collabdiv.sigproc.codes import SpreadingCodeSet, generate_walsh_hadamard
from collabdiv.sigproc.waveform import apply_fractional_delay, despread

logger = logging.getLogger(__name__)


def superpose(
    gains: npt.NDArray[np.complex128],
    symbols: npt.NDArray[np.complex128],
    amplitude: float,
) -> npt.NDArray[np.complex128]:
    """Despread-domain sum ``amplitude * sum_i gains[..., i] * symbols[..., i]``."""
    return amplitude * np.einsum("...i,...i->...", gains, symbols)


def forwarding_period_observation(
    code_set: SpreadingCodeSet,
    observed_group: npt.NDArray[np.integer],
    group_codes: npt.NDArray[np.integer],
    gains: npt.NDArray[np.complex128],
    symbols: npt.NDArray[np.complex128],
    offsets: npt.NDArray[np.floating],
    amplitude: float,
    noise: NoiseModel,
    rng: np.random.Generator,
) -> npt.NDArray[np.complex128]:
    """Chip-level base-station reception of the relays' forwarding period.

    ``gains``, ``symbols`` and ``offsets`` have shape ``(frames, groups, 2)``,
    one entry per transmitting relay; ``group_codes`` ``(frames, groups)``
    names each group's code. Every relay's chip frame is delayed by its own
    offset, all relays are summed with chip-rate AWGN, and the sum is despread
    with the observed group's code.
    """

    codes = code_set.codes[group_codes][:, :, np.newaxis, :]
    chips = amplitude * (gains * symbols)[..., np.newaxis] * codes
    delayed = apply_fractional_delay(chips, offsets)
    received = add_awgn(delayed.sum(axis=(1, 2)), noise, rng)
    return np.asarray(despread(received, observed_group, code_set))


def _draw_offsets(
    rng: np.random.Generator, sigma: float, shape: typing.Tuple[int, ...], limit: int
) -> npt.NDArray[np.float64]:
    # Magnitude of a zero-mean Gaussian; clipped inside one symbol period.
    offsets = np.abs(rng.normal(0.0, sigma, size=shape))
    clipped = int(np.count_nonzero(offsets >= limit))
    if clipped:
        logger.debug(
            f"Clipped {clipped} of {offsets.size} timing offsets to {limit} chips"
        )
    return np.minimum(offsets, np.nextafter(float(limit), 0.0))


def _misaligned_forwarding(
    config: SchemeConfig,
    uplink_p2: npt.NDArray[np.complex128],
    relay_bits: npt.NDArray[np.complex128],
    amplitude: float,
    noise: NoiseModel,
    rng: np.random.Generator,
) -> npt.NDArray[np.complex128]:
    frames = relay_bits.shape[0]
    spreading = config.spreading
    code_set = generate_walsh_hadamard(spreading)

    if config.observed_group is None:
        observed = rng.integers(spreading, size=frames)
    else:
        observed = np.full(frames, config.observed_group, dtype=np.int64)
    own_offsets = _draw_offsets(rng, config.timing_sigma, (frames, 2), spreading)

    if not config.fully_loaded:
        return forwarding_period_observation(
            code_set,
            observed,
            observed[:, np.newaxis],
            uplink_p2[:, np.newaxis, :],
            relay_bits[:, np.newaxis, :],
            own_offsets[:, np.newaxis, :],
            amplitude,
            noise,
            rng,
        )

    # Other groups forward independent random symbols over their own uplinks.
    shape = (frames, spreading, 2)
    symbols = config.alphabet.draw(rng, shape)
    gains = np.asarray(
        draw_rayleigh_gain(rng, config.profile.uplink_variance, shape)
    )
    offsets = _draw_offsets(rng, config.timing_sigma, shape, spreading)
    rows = np.arange(frames)
    symbols[rows, observed] = relay_bits
    gains[rows, observed] = uplink_p2
    offsets[rows, observed] = own_offsets

    return forwarding_period_observation(
        code_set,
        observed,
        np.broadcast_to(np.arange(spreading), (frames, spreading)),
        gains,
        symbols,
        offsets,
        amplitude,
        noise,
        rng,
    )


def simulate_frames_proposed(
    config: SchemeConfig,
    ebn0_db: float,
    rng: np.random.Generator,
    frames: int,
) -> FrameBatch:
    config.require(Scheme.PROPOSED, Scheme.PROPOSED_GENIE)
    if frames < 1:
        raise InvalidArgumentError(f"Frame count must be positive, got {frames}")

    energy = energy_model(config)
    amplitude = energy.per_period_amplitude
    noise = noise_variance_from_ebn0(ebn0_db, energy.energy_per_bit)
    hypotheses = enumerate_hypotheses(config.alphabet, config.users)

    tx = config.alphabet.draw(rng, (frames, config.users))
    state = draw_group_channels(rng, config.profile, frames)

    # Period 1
    relay_z = add_awgn(
        amplitude * np.einsum("fli,fi->fl", state.user_to_relay, tx), noise, rng
    )
    z = add_awgn(superpose(state.uplink_p1, tx, amplitude), noise, rng)

    if config.scheme == Scheme.PROPOSED_GENIE:
        relay_bits = tx.copy()
    else:
        relay_bits = np.empty_like(tx)
        for relay in range(config.users):
            decision = ml_joint_detect_batch(
                relay_z[:, relay], state.relay_gains(relay), amplitude, hypotheses
            )
            relay_bits[:, relay] = decision.symbols[:, relay]

    # Period 2
    if config.timing_sigma == 0:
        z_prime = add_awgn(
            superpose(state.uplink_p2, relay_bits, amplitude), noise, rng
        )
    else:
        z_prime = _misaligned_forwarding(
            config, state.uplink_p2, relay_bits, amplitude, noise, rng
        )

    decision = ml_joint_detect_combined_batch(
        z, z_prime, state.uplink_p1, state.uplink_p2, amplitude, hypotheses
    )
    return FrameBatch(
        tx_bits=np.real(tx),
        rx_bits=np.real(decision.symbols),
        relay_bits=np.real(relay_bits),
    )


def simulate_frame_proposed(
    config: SchemeConfig, ebn0_db: float, rng: np.random.Generator
) -> FrameResult:
    return simulate_frames_proposed(config, ebn0_db, rng, 1).frame(0)
