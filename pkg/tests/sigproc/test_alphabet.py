import numpy as np
import pydantic
import pytest

from collabdiv.sigproc.alphabet import BPSK, QPSK, SymbolAlphabet


def test_bpsk():
    assert BPSK.cardinality == 2
    assert BPSK.points == (-1 + 0j, 1 + 0j)


def test_qpsk_unit_energy():
    assert QPSK.cardinality == 4
    assert np.mean(np.abs(QPSK.as_array()) ** 2) == pytest.approx(1.0)


def test_draw_uses_points(rng: np.random.Generator):
    symbols = BPSK.draw(rng, (1000, 2))
    assert symbols.shape == (1000, 2)
    assert set(np.unique(symbols).tolist()) == {-1 + 0j, 1 + 0j}


@pytest.mark.parametrize(
    "points",
    [(1 + 0j,), (1 + 0j, 1 + 0j), (2 + 0j, -2 + 0j)],
)
def test_invalid_alphabet(points):
    with pytest.raises(pydantic.ValidationError):
        SymbolAlphabet(name="bad", points=points)
