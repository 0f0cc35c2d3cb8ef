import math

import numpy as np
import pytest

from collabdiv.shared.errors import InvalidArgumentError
from collabdiv.sigproc.codes import (
    SpreadingCodeSet,
    generate_walsh_hadamard,
    is_power_of_two,
)


def test_order_one():
    code_set = generate_walsh_hadamard(1)
    assert code_set.codes.shape == (1, 1)
    assert code_set.codes[0, 0] == 1.0


def test_order_two():
    code_set = generate_walsh_hadamard(2)
    expected = np.array([[1.0, 1.0], [1.0, -1.0]]) / math.sqrt(2)
    np.testing.assert_allclose(code_set.codes, expected, atol=1e-15)


@pytest.mark.parametrize("order", [1, 2, 4, 8, 16, 32, 64])
def test_orthonormal(order: int):
    code_set = generate_walsh_hadamard(order)
    assert code_set.order == order
    np.testing.assert_allclose(code_set.gram(), np.eye(order), atol=1e-12)


def test_first_code_is_constant():
    code_set = generate_walsh_hadamard(16)
    np.testing.assert_allclose(code_set.code(0), np.full(16, 0.25))


def test_codes_read_only():
    code_set = generate_walsh_hadamard(4)
    with pytest.raises(ValueError):
        code_set.codes[0, 0] = 2.0


@pytest.mark.parametrize("order", [0, 3, 6, 12, -4])
def test_invalid_order(order: int):
    with pytest.raises(InvalidArgumentError):
        generate_walsh_hadamard(order)


def test_code_index_out_of_range():
    code_set = generate_walsh_hadamard(8)
    with pytest.raises(InvalidArgumentError):
        code_set.code(8)


def test_non_orthonormal_rejected():
    with pytest.raises(ValueError):
        SpreadingCodeSet(order=2, codes=np.ones((2, 2)))


def test_is_power_of_two():
    assert [n for n in range(1, 20) if is_power_of_two(n)] == [1, 2, 4, 8, 16]
    assert not is_power_of_two(0)
