import numpy as np

from collabdiv.channel.fading import draw_rayleigh_gain
from collabdiv.channel.noise import add_awgn, noise_variance_from_ebn0
from collabdiv.detectors.coherent import alamouti_combine, coherent_bpsk_detect_batch
from collabdiv.protocol.config import (
    FrameBatch,
    FrameResult,
    Scheme,
    SchemeConfig,
    energy_model,
)
from collabdiv.shared.errors import InvalidArgumentError


def _check_frames(frames: int) -> None:
    if frames < 1:
        raise InvalidArgumentError(f"Frame count must be positive, got {frames}")


def simulate_frames_noncoop(
    config: SchemeConfig,
    ebn0_db: float,
    rng: np.random.Generator,
    frames: int,
) -> FrameBatch:
    """Single-antenna direct transmission, one symbol per frame."""

    config.require(Scheme.NONCOOP)
    _check_frames(frames)
    energy = energy_model(config)
    noise = noise_variance_from_ebn0(ebn0_db, energy.energy_per_bit)

    tx = config.alphabet.draw(rng, (frames, 1))
    gain = np.asarray(
        draw_rayleigh_gain(rng, config.profile.uplink_variance, (frames, 1))
    )
    z = add_awgn(energy.per_period_amplitude * gain * tx, noise, rng)
    return FrameBatch(tx_bits=np.real(tx), rx_bits=coherent_bpsk_detect_batch(z, gain))


def simulate_frames_alamouti(
    config: SchemeConfig,
    ebn0_db: float,
    rng: np.random.Generator,
    frames: int,
) -> FrameBatch:
    """Two transmit antennas, two symbols over two periods, channel held for
    both periods."""

    config.require(Scheme.ALAMOUTI)
    _check_frames(frames)
    energy = energy_model(config)
    amplitude = energy.per_period_amplitude
    noise = noise_variance_from_ebn0(ebn0_db, energy.energy_per_bit)

    tx = config.alphabet.draw(rng, (frames, 2))
    h = np.asarray(draw_rayleigh_gain(rng, config.profile.uplink_variance, (frames, 2)))
    s1, s2 = tx[:, 0], tx[:, 1]
    h1, h2 = h[:, 0], h[:, 1]

    r1 = add_awgn(amplitude * (h1 * s1 + h2 * s2), noise, rng)
    r2 = add_awgn(amplitude * (-h1 * np.conj(s2) + h2 * np.conj(s1)), noise, rng)
    est1, est2 = alamouti_combine(r1, r2, h1, h2)
    combined = np.stack([est1, est2], axis=-1)
    return FrameBatch(
        tx_bits=np.real(tx), rx_bits=np.where(np.real(combined) >= 0, 1.0, -1.0)
    )


def simulate_frame_noncoop(
    config: SchemeConfig, ebn0_db: float, rng: np.random.Generator
) -> FrameResult:
    return simulate_frames_noncoop(config, ebn0_db, rng, 1).frame(0)


def simulate_frame_alamouti(
    config: SchemeConfig, ebn0_db: float, rng: np.random.Generator
) -> FrameResult:
    return simulate_frames_alamouti(config, ebn0_db, rng, 1).frame(0)
