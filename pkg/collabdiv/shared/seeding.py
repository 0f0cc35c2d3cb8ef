import typing
import zlib

import numpy as np

SEED_MASK: typing.Final = 2**63 - 1


def stable_key(text: typing.Text) -> int:
    """Process-independent integer key for a string (``hash()`` is salted)."""
    return zlib.crc32(text.encode("utf-8"))


def derive_seed(base_seed: int, *keys: int) -> int:
    seq = np.random.SeedSequence(entropy=base_seed, spawn_key=tuple(keys))
    return int(seq.generate_state(1, dtype=np.uint64)[0]) & SEED_MASK


def trial_rng(point_seed: int, trial_index: int) -> np.random.Generator:
    return np.random.default_rng(
        np.random.SeedSequence(entropy=point_seed, spawn_key=(trial_index,))
    )
