import numpy as np
import pytest

from collabdiv.detectors.hypotheses import enumerate_hypotheses
from collabdiv.shared.errors import InvalidArgumentError
from collabdiv.sigproc.alphabet import BPSK, QPSK


def test_bpsk_pairs_in_order():
    hypotheses = enumerate_hypotheses(BPSK, 2)
    assert len(hypotheses) == 4
    assert hypotheses.tuples == ((-1, -1), (-1, 1), (1, -1), (1, 1))


def test_single_user():
    hypotheses = enumerate_hypotheses(BPSK, 1)
    assert hypotheses.tuples == ((-1,), (1,))
    assert hypotheses.as_array().shape == (2, 1)


def test_qpsk_pairs():
    hypotheses = enumerate_hypotheses(QPSK, 2)
    assert len(hypotheses) == 16
    assert len(set(hypotheses.tuples)) == 16
    np.testing.assert_array_equal(hypotheses.as_array()[0], [QPSK.points[0]] * 2)


def test_invalid_users():
    with pytest.raises(InvalidArgumentError):
        enumerate_hypotheses(BPSK, 0)
