import typing

import numpy as np
import numpy.typing as npt


def coherent_bpsk_detect_batch(
    z: npt.ArrayLike, gain: npt.ArrayLike
) -> npt.NDArray[np.float64]:
    metric = np.real(np.conj(np.asarray(gain)) * np.asarray(z))
    return np.where(metric >= 0, 1.0, -1.0)


def coherent_bpsk_detect(z: complex, gain: complex) -> int:
    """Matched-filter BPSK decision: +1 iff ``Re(conj(gain) * z) >= 0``."""
    return int(coherent_bpsk_detect_batch(z, gain))


def alamouti_combine(
    r1: npt.ArrayLike,
    r2: npt.ArrayLike,
    h1: npt.ArrayLike,
    h2: npt.ArrayLike,
) -> typing.Tuple[typing.Any, typing.Any]:
    """Linear combining for the two-antenna space-time block code.

    Transmission is ``r1 = h1*s1 + h2*s2 + n1`` and
    ``r2 = -h1*conj(s2) + h2*conj(s1) + n2``; noiselessly each output equals
    ``(|h1|^2 + |h2|^2) * s_i``. Works element-wise on arrays.
    """

    r1, r2, h1, h2 = (np.asarray(x, dtype=np.complex128) for x in (r1, r2, h1, h2))
    s1 = np.conj(h1) * r1 + h2 * np.conj(r2)
    s2 = np.conj(h2) * r1 - h1 * np.conj(r2)
    if s1.ndim == 0:
        return complex(s1), complex(s2)
    return s1, s2
