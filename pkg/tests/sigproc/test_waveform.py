import math

import numpy as np
import pytest

from collabdiv.shared.errors import InvalidArgumentError
from collabdiv.sigproc.codes import SpreadingCodeSet, generate_walsh_hadamard
from collabdiv.sigproc.waveform import (
    apply_fractional_delay,
    compose_multiuser_chip_signal,
    despread,
    spread,
)


def test_spread_scales_code(code_set_16: SpreadingCodeSet):
    np.testing.assert_allclose(spread(1, 1.0, 0, code_set_16), code_set_16.code(0))
    np.testing.assert_allclose(
        spread(-1, math.sqrt(0.5), 3, code_set_16),
        -math.sqrt(0.5) * code_set_16.code(3),
    )


def test_spread_batch(code_set_16: SpreadingCodeSet):
    frames = spread(np.array([1, -1, 1j]), 2.0, 5, code_set_16)
    assert frames.shape == (3, 16)
    np.testing.assert_allclose(frames[2], 2j * code_set_16.code(5))


def test_spread_invalid(code_set_16: SpreadingCodeSet):
    with pytest.raises(InvalidArgumentError):
        spread(1, 1.0, 16, code_set_16)
    with pytest.raises(InvalidArgumentError):
        spread(1, -1.0, 0, code_set_16)


def test_despread_recovers_symbol(
    rng: np.random.Generator, code_set_16: SpreadingCodeSet
):
    for _ in range(50):
        b = complex(rng.normal(), rng.normal())
        amplitude = float(rng.uniform(0.1, 3.0))
        k = int(rng.integers(16))
        out = despread(spread(b, amplitude, k, code_set_16), k, code_set_16)
        assert abs(out - amplitude * b) < 1e-12


def test_despread_orthogonal(code_set_16: SpreadingCodeSet):
    frame = spread(1, 1.0, 0, code_set_16)
    for k in range(1, 16):
        assert abs(despread(frame, k, code_set_16)) < 1e-12


def test_despread_isolates_group(
    rng: np.random.Generator, code_set_16: SpreadingCodeSet
):
    symbols = rng.choice([-1.0, 1.0], size=16)
    gains = rng.normal(size=16) + 1j * rng.normal(size=16)
    total = sum(
        spread(gains[k] * symbols[k], 1.0, k, code_set_16) for k in range(16)
    )
    for k in range(16):
        assert abs(despread(total, k, code_set_16) - gains[k] * symbols[k]) < 1e-12


def test_despread_per_frame_codes(code_set_16: SpreadingCodeSet):
    frames = np.stack([spread(1, 1.0, k, code_set_16) for k in range(4)])
    out = despread(frames, np.arange(4), code_set_16)
    np.testing.assert_allclose(out, np.ones(4), atol=1e-12)


def test_despread_length_mismatch(code_set_16: SpreadingCodeSet):
    with pytest.raises(InvalidArgumentError):
        despread(np.ones(8), 0, code_set_16)


def test_delay_zero_is_identity(code_set_16: SpreadingCodeSet):
    frame = spread(1 + 1j, 1.0, 7, code_set_16)
    assert np.array_equal(apply_fractional_delay(frame, 0.0), frame)


def test_delay_whole_chip():
    frame = np.arange(1, 5, dtype=np.complex128)
    np.testing.assert_allclose(apply_fractional_delay(frame, 1.0), [0, 1, 2, 3])
    np.testing.assert_allclose(apply_fractional_delay(frame, -1.0), [2, 3, 4, 0])


def test_delay_half_chip():
    code_set = generate_walsh_hadamard(4)
    frame = spread(1, 1.0, 0, code_set)
    delayed = apply_fractional_delay(frame, 0.5)
    np.testing.assert_allclose(delayed, [0.25, 0.5, 0.5, 0.5])
    assert despread(delayed, 0, code_set) == pytest.approx(0.875)


def test_delay_energy_non_increasing(code_set_16: SpreadingCodeSet):
    frame = spread(1, 1.0, 3, code_set_16)
    for tau in np.linspace(0.0, 1.0, 11):
        delayed = apply_fractional_delay(frame, float(tau))
        assert np.sum(np.abs(delayed) ** 2) <= 1.0 + 1e-12


def test_delay_continuous_at_zero(code_set_16: SpreadingCodeSet):
    frame = spread(1, 1.0, 9, code_set_16)
    aligned = despread(frame, 9, code_set_16)
    nudged = despread(apply_fractional_delay(frame, 1e-6), 9, code_set_16)
    assert abs(nudged - aligned) < 1e-5


def test_delay_per_frame(rng: np.random.Generator, code_set_16: SpreadingCodeSet):
    frames = spread(np.array([1, -1, 1j]), 1.0, 6, code_set_16)
    taus = np.array([0.0, 0.3, 1.7])
    delayed = apply_fractional_delay(frames, taus)
    for i, tau in enumerate(taus):
        np.testing.assert_allclose(
            delayed[i], apply_fractional_delay(frames[i], float(tau)), atol=1e-15
        )


def test_delay_out_of_range(code_set_16: SpreadingCodeSet):
    frame = spread(1, 1.0, 0, code_set_16)
    with pytest.raises(InvalidArgumentError):
        apply_fractional_delay(frame, 16.0)
    with pytest.raises(InvalidArgumentError):
        apply_fractional_delay(frame, -16.5)


def test_compose_aligned_is_sum(code_set_16: SpreadingCodeSet):
    a = spread(1, 1.0, 1, code_set_16)
    b = spread(-1j, 0.5, 2, code_set_16)
    np.testing.assert_allclose(
        compose_multiuser_chip_signal([(a, 0.0), (b, 0.0)]), a + b
    )


def test_compose_single_component(code_set_16: SpreadingCodeSet):
    a = spread(1, 1.0, 4, code_set_16)
    np.testing.assert_allclose(
        compose_multiuser_chip_signal([(a, 0.5)]), apply_fractional_delay(a, 0.5)
    )


def test_compose_invalid(code_set_16: SpreadingCodeSet):
    with pytest.raises(InvalidArgumentError):
        compose_multiuser_chip_signal([])
    with pytest.raises(InvalidArgumentError):
        compose_multiuser_chip_signal(
            [(spread(1, 1.0, 0, code_set_16), 0.0), (np.ones(8), 0.0)]
        )
