import typing

import numpy as np

from collabdiv.protocol.baselines import (
    simulate_frames_alamouti,
    simulate_frames_noncoop,
)
from collabdiv.protocol.config import FrameBatch, FrameResult, Scheme, SchemeConfig
from collabdiv.protocol.proposed import simulate_frames_proposed

BatchSimulator = typing.Callable[
    [SchemeConfig, float, np.random.Generator, int], FrameBatch
]

SIMULATORS: typing.Final[typing.Dict[Scheme, BatchSimulator]] = {
    Scheme.PROPOSED: simulate_frames_proposed,
    Scheme.PROPOSED_GENIE: simulate_frames_proposed,
    Scheme.NONCOOP: simulate_frames_noncoop,
    Scheme.ALAMOUTI: simulate_frames_alamouti,
}


def simulate_frames(
    config: SchemeConfig, ebn0_db: float, rng: np.random.Generator, frames: int
) -> FrameBatch:
    return SIMULATORS[config.scheme](config, ebn0_db, rng, frames)


def simulate_frame(
    config: SchemeConfig, ebn0_db: float, rng: np.random.Generator
) -> FrameResult:
    return simulate_frames(config, ebn0_db, rng, 1).frame(0)
