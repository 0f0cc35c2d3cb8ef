import numpy as np
import pytest

from collabdiv.harness.theory import alamouti_bpsk_ber, rayleigh_bpsk_ber
from collabdiv.protocol.baselines import (
    simulate_frame_alamouti,
    simulate_frame_noncoop,
    simulate_frames_alamouti,
    simulate_frames_noncoop,
)
from collabdiv.protocol.config import Scheme, SchemeConfig
from collabdiv.shared.errors import InvalidArgumentError

NONCOOP = SchemeConfig(scheme=Scheme.NONCOOP)
ALAMOUTI = SchemeConfig(scheme=Scheme.ALAMOUTI)
FRAMES = 1_000_000


def _ber(batch) -> float:
    return batch.final_error_count / batch.bits


def test_noiseless_noncoop(rng: np.random.Generator):
    batch = simulate_frames_noncoop(NONCOOP, float("inf"), rng, 100_000)
    assert batch.bits == 100_000
    assert batch.final_error_count == 0


def test_noiseless_alamouti(rng: np.random.Generator):
    batch = simulate_frames_alamouti(ALAMOUTI, float("inf"), rng, 100_000)
    assert batch.bits == 200_000
    assert batch.final_error_count == 0


@pytest.mark.parametrize("ebn0_db, tolerance", [(0.0, 0.05), (10.0, 0.1)])
def test_noncoop_matches_closed_form(
    rng: np.random.Generator, ebn0_db: float, tolerance: float
):
    expected = rayleigh_bpsk_ber(10 ** (ebn0_db / 10))
    ber = _ber(simulate_frames_noncoop(NONCOOP, ebn0_db, rng, FRAMES))
    assert ber == pytest.approx(expected, rel=tolerance)


def test_noncoop_reference_values():
    assert rayleigh_bpsk_ber(1.0) == pytest.approx(0.1464, abs=1e-4)
    assert rayleigh_bpsk_ber(10.0) == pytest.approx(0.0233, abs=1e-4)


def test_alamouti_matches_closed_form(rng: np.random.Generator):
    expected = alamouti_bpsk_ber(10.0)
    assert expected == pytest.approx(5.53e-3, rel=1e-3)
    ber = _ber(simulate_frames_alamouti(ALAMOUTI, 10.0, rng, FRAMES))
    assert ber == pytest.approx(expected, rel=0.1)


def test_single_frame(rng: np.random.Generator):
    frame = simulate_frame_noncoop(NONCOOP, 10.0, rng)
    assert len(frame.tx_bits) == 1
    frame = simulate_frame_alamouti(ALAMOUTI, float("inf"), rng)
    assert frame.rx_bits == frame.tx_bits


def test_deterministic():
    a = simulate_frames_alamouti(ALAMOUTI, 5.0, np.random.default_rng(3), 1000)
    b = simulate_frames_alamouti(ALAMOUTI, 5.0, np.random.default_rng(3), 1000)
    np.testing.assert_array_equal(a.rx_bits, b.rx_bits)


def test_wrong_scheme(rng: np.random.Generator):
    with pytest.raises(InvalidArgumentError):
        simulate_frames_noncoop(ALAMOUTI, 10.0, rng, 10)
    with pytest.raises(InvalidArgumentError):
        simulate_frames_alamouti(NONCOOP, 10.0, rng, 10)


def test_invalid_frames(rng: np.random.Generator):
    with pytest.raises(InvalidArgumentError):
        simulate_frames_noncoop(NONCOOP, 10.0, rng, 0)
