"""Flat ``key=value`` experiment files and the grid syntax shared with the CLI."""

import logging
import math
import pathlib
import typing

import dotenv
import numpy as np
import pydantic
from str_or_none import str_or_none

from collabdiv.channel.fading import PowerProfile
from collabdiv.harness.records import StoppingRule, SweepSpec
from collabdiv.protocol.config import Scheme, SchemeConfig
from collabdiv.shared.errors import InvalidArgumentError

logger = logging.getLogger(__name__)


def parse_grid(text: typing.Text) -> typing.List[float]:
    """``start:step:stop`` (stop inclusive) or a comma separated list."""

    text = text.strip()
    if not text:
        raise InvalidArgumentError("Empty grid")
    if ":" in text:
        try:
            start, step, stop = (float(part) for part in text.split(":"))
        except ValueError as e:
            raise InvalidArgumentError(f"Invalid range grid: {text}") from e
        if step <= 0 or stop < start:
            raise InvalidArgumentError(f"Invalid range grid: {text}")
        count = int(math.floor((stop - start) / step + 1e-9)) + 1
        return [float(v) for v in np.round(start + step * np.arange(count), 10)]
    try:
        values = [float(part) for part in text.split(",") if part.strip()]
    except ValueError as e:
        raise InvalidArgumentError(f"Invalid grid list: {text}") from e
    if not values or not all(math.isfinite(v) for v in values):
        raise InvalidArgumentError(f"Invalid grid list: {text}")
    return values


class ExperimentFile(pydantic.BaseModel):
    """Raw experiment settings; keys mirror the ``simulate`` flags."""

    model_config = pydantic.ConfigDict(extra="forbid", coerce_numbers_to_str=True)

    scheme: typing.Text = "proposed"
    ebn0: typing.Text = "0:2:30"
    beta_db: typing.Text = "10"
    mu_db: typing.Text = "beta"
    spreading: int = 16
    groups: typing.Text = "1"
    timing_sigma: typing.Text = "0"
    observed_group: typing.Text = "0"
    min_errors: int = 200
    max_bits: int = 20_000_000
    confidence: float = 0.95
    frames_per_trial: int = 2048
    seed: int = pydantic.Field(default=0, ge=0)
    out: typing.Optional[typing.Text] = None
    workers: typing.Optional[int] = None

    @pydantic.field_validator("out", mode="before")
    @classmethod
    def validate_out(cls, value: typing.Any) -> typing.Optional[str]:
        return str_or_none(value)

    def to_spec(self) -> SweepSpec:
        schemes = [Scheme.parse(s) for s in self.scheme.split(",") if s.strip()]
        mu_text = self.mu_db.strip().lower()
        observed_text = self.observed_group.strip().lower()
        try:
            mu_db = None if mu_text == "beta" else float(mu_text)
            observed = None if observed_text == "random" else int(observed_text)
        except ValueError as e:
            raise InvalidArgumentError(f"Invalid experiment value: {e}") from e

        groups_text = self.groups.strip().lower()
        if groups_text == "full":
            groups = self.spreading
        elif groups_text == "1":
            groups = 1
        else:
            raise InvalidArgumentError(f"groups must be 1 or full, got {self.groups}")

        template = SchemeConfig(
            scheme=schemes[0] if schemes else Scheme.PROPOSED,
            spreading=self.spreading,
            groups=groups,
            profile=PowerProfile(mu_db=mu_db),
            observed_group=observed,
        )
        return SweepSpec(
            schemes=schemes,
            ebn0_grid=parse_grid(self.ebn0),
            beta_grid=parse_grid(self.beta_db),
            timing_sigma_grid=parse_grid(self.timing_sigma),
            template=template,
            rule=StoppingRule(
                min_errors=self.min_errors,
                max_bits=self.max_bits,
                confidence=self.confidence,
                frames_per_trial=self.frames_per_trial,
            ),
            base_seed=self.seed,
        )


def normalize_keys(
    raw: typing.Mapping[str, typing.Any],
    *,
    drop_none: bool = True,
) -> typing.Dict[str, typing.Any]:
    """Lower-case ``snake_case`` keys. Unset CLI flags arrive as ``None`` and
    are dropped; file loading keeps them so bare keys still get validated."""

    return {
        key.strip().lower().lstrip("-").replace("-", "_"): value
        for key, value in raw.items()
        if value is not None or not drop_none
    }


def load_experiment_file(path: pathlib.Path | str) -> ExperimentFile:
    path = pathlib.Path(path)
    if not path.is_file():
        raise InvalidArgumentError(f"Config file not found: {path}")
    values = dotenv.dotenv_values(path)
    logger.debug(f"Loaded {len(values)} keys from {path}")
    return ExperimentFile.model_validate(normalize_keys(values, drop_none=False))


PRESETS: typing.Final[typing.Dict[str, typing.Dict[str, typing.Any]]] = {
    # Proposed scheme over cooperation-link quality with both baselines.
    "cooperation": {
        "scheme": "proposed,noncoop,alamouti",
        "ebn0": "0:2:30",
        "beta_db": "0,10,20,30",
        "mu_db": "beta",
        "groups": "1",
        "timing_sigma": "0",
    },
    # Forwarding-period timing error, fully loaded, reported on code 0.
    "timing": {
        "scheme": "proposed,noncoop",
        "ebn0": "0:5:30",
        "beta_db": "30",
        "mu_db": "beta",
        "groups": "full",
        "timing_sigma": "0,0.1,0.25,0.5",
        "observed_group": "0",
    },
    # Same sweep with the observed code drawn per frame over all N codes.
    "timing_random": {
        "scheme": "proposed,noncoop",
        "ebn0": "0:5:30",
        "beta_db": "30",
        "mu_db": "beta",
        "groups": "full",
        "timing_sigma": "0,0.1,0.25,0.5",
        "observed_group": "random",
    },
}


def preset_experiment(name: typing.Text) -> ExperimentFile:
    if name not in PRESETS:
        raise InvalidArgumentError(
            f"Unknown preset {name}, choose from {', '.join(PRESETS)}"
        )
    return ExperimentFile.model_validate(PRESETS[name])
