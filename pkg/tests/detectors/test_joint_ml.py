import itertools

import numpy as np
import pytest

from collabdiv.detectors.hypotheses import HypothesisSet, enumerate_hypotheses
from collabdiv.detectors.joint_ml import (
    ml_joint_detect,
    ml_joint_detect_batch,
    ml_joint_detect_combined,
)
from collabdiv.shared.errors import InvalidArgumentError
from collabdiv.sigproc.alphabet import BPSK

PAIRS = enumerate_hypotheses(BPSK, 2)


def _gains(rng: np.random.Generator, size=2) -> np.ndarray:
    return rng.normal(size=size) + 1j * rng.normal(size=size)


def _brute_force(z, gains, amplitude):
    # Independent oracle: first strict minimum over all sign pairs.
    best, best_metric = None, None
    for pair in itertools.product((-1, 1), repeat=2):
        metric = abs(z - amplitude * sum(g * b for g, b in zip(gains, pair))) ** 2
        if best_metric is None or metric < best_metric:
            best, best_metric = pair, metric
    return best, best_metric


def test_noiseless_pair():
    result = ml_joint_detect(1.0 - 0.5j, [1.0, 0.5j], 1.0, PAIRS)
    assert result.decided_tuple == (1, -1)
    assert result.index == 2
    assert result.metric == pytest.approx(0.0, abs=1e-24)
    assert not result.tie_flag


def test_noiseless_recovery(rng: np.random.Generator):
    for _ in range(50):
        gains = _gains(rng)
        for pair in PAIRS.tuples:
            z = 0.7 * (gains[0] * pair[0] + gains[1] * pair[1])
            assert ml_joint_detect(z, gains, 0.7, PAIRS).decided_tuple == pair


def test_matches_brute_force(rng: np.random.Generator):
    for _ in range(200):
        gains = _gains(rng)
        z = complex(rng.normal(), rng.normal()) * 2
        expected, metric = _brute_force(z, gains, 0.9)
        result = ml_joint_detect(z, gains, 0.9, PAIRS)
        assert result.decided_tuple == expected
        assert result.metric == pytest.approx(metric)


def test_tie_breaks_to_lowest_index():
    result = ml_joint_detect(0j, [1.0, 1.0], 1.0, PAIRS)
    assert result.decided_tuple == (-1, 1)
    assert result.index == 1
    assert result.tie_flag


def test_silent_user_reduces_to_single_user(rng: np.random.Generator):
    for _ in range(100):
        g = complex(rng.normal(), rng.normal())
        z = complex(rng.normal(), rng.normal())
        result = ml_joint_detect(z, [g, 0.0], 1.0, PAIRS)
        expected = 1 if (np.conj(g) * z).real >= 0 else -1
        assert result.decided_tuple[0] == expected


def test_scale_invariant(rng: np.random.Generator):
    for _ in range(100):
        gains = _gains(rng)
        z = complex(rng.normal(), rng.normal())
        a = ml_joint_detect(z, gains, 1.0, PAIRS)
        b = ml_joint_detect(3.7 * z, gains, 3.7, PAIRS)
        assert a.index == b.index


def test_batch_matches_scalar(rng: np.random.Generator):
    gains = _gains(rng, (64, 2))
    z = rng.normal(size=64) + 1j * rng.normal(size=64)
    batch = ml_joint_detect_batch(z, gains, 0.5, PAIRS)
    for i in range(64):
        assert batch.indices[i] == ml_joint_detect(z[i], gains[i], 0.5, PAIRS).index


def test_combined_worked_example():
    result = ml_joint_detect_combined(
        1.1, -0.9, [1.0, 0.1], [0.1, 1.0], 1.0, PAIRS
    )
    assert result.decided_tuple == (1, -1)
    assert result.metric == pytest.approx(0.04)


def test_combined_with_silent_second_period(rng: np.random.Generator):
    for _ in range(100):
        gains = _gains(rng)
        z = complex(rng.normal(), rng.normal())
        single = ml_joint_detect(z, gains, 1.0, PAIRS)
        combined = ml_joint_detect_combined(z, 0j, gains, [0.0, 0.0], 1.0, PAIRS)
        assert combined.index == single.index


def test_combined_metric_is_sum(rng: np.random.Generator):
    for _ in range(100):
        g, g_prime = _gains(rng), _gains(rng)
        z = complex(rng.normal(), rng.normal())
        z_prime = complex(rng.normal(), rng.normal())
        result = ml_joint_detect_combined(z, z_prime, g, g_prime, 0.8, PAIRS)
        pair = result.decided_tuple
        expected = (
            abs(z - 0.8 * (g[0] * pair[0] + g[1] * pair[1])) ** 2
            + abs(z_prime - 0.8 * (g_prime[0] * pair[0] + g_prime[1] * pair[1]))
            ** 2
        )
        assert result.metric == pytest.approx(expected)


def test_combined_noiseless_recovery(rng: np.random.Generator):
    for _ in range(50):
        g, g_prime = _gains(rng), _gains(rng)
        for pair in PAIRS.tuples:
            z = g[0] * pair[0] + g[1] * pair[1]
            z_prime = g_prime[0] * pair[0] + g_prime[1] * pair[1]
            result = ml_joint_detect_combined(z, z_prime, g, g_prime, 1.0, PAIRS)
            assert result.decided_tuple == pair


def test_gain_length_mismatch():
    with pytest.raises(InvalidArgumentError):
        ml_joint_detect(1.0, [1.0, 1.0, 1.0], 1.0, PAIRS)


def test_empty_hypotheses():
    empty = HypothesisSet.model_construct(alphabet=BPSK, users=2, tuples=())
    with pytest.raises(InvalidArgumentError):
        ml_joint_detect(1.0, [1.0, 1.0], 1.0, empty)
