import csv
import io
import math
import pathlib
import typing

import pydantic

from collabdiv.protocol.config import Scheme, SchemeConfig

CSV_HEADER: typing.Final[typing.Tuple[str, ...]] = (
    "scheme",
    "ebn0_db",
    "beta_db",
    "mu_db",
    "timing_sigma",
    "bits",
    "errors",
    "ber",
    "ci_low",
    "ci_high",
    "truncated",
    "seed",
)
FLOAT_FORMAT: typing.Final = ".12g"


class StoppingRule(pydantic.BaseModel):
    model_config = pydantic.ConfigDict(frozen=True)

    min_errors: int = pydantic.Field(default=200, ge=1)
    max_bits: int = pydantic.Field(default=20_000_000, ge=1)
    confidence: float = pydantic.Field(default=0.95, gt=0, lt=1)
    frames_per_trial: int = pydantic.Field(default=2048, ge=1)

    @pydantic.model_validator(mode="after")
    def validate_rule(self) -> "StoppingRule":
        if self.max_bits < self.min_errors:
            raise ValueError("max_bits must be at least min_errors")
        return self


class BerRecord(pydantic.BaseModel):
    model_config = pydantic.ConfigDict(frozen=True)

    scheme: Scheme
    ebn0_db: float
    beta_db: float
    mu_db: float
    timing_sigma: float
    bits: int = pydantic.Field(ge=1)
    errors: int = pydantic.Field(ge=0)
    ber: float
    ci_low: float
    ci_high: float
    truncated: bool = False
    seed: int = pydantic.Field(ge=0)

    @pydantic.model_validator(mode="after")
    def validate_counts(self) -> "BerRecord":
        if self.errors > self.bits:
            raise ValueError("errors cannot exceed bits")
        if not math.isclose(self.ber, self.errors / self.bits, rel_tol=1e-9):
            raise ValueError("ber must equal errors / bits")
        if not self.ci_low <= self.ber <= self.ci_high:
            raise ValueError("Confidence interval must contain the estimate")
        return self

    def to_row(self) -> typing.List[str]:
        def fmt(value: float) -> str:
            return format(value, FLOAT_FORMAT)

        return [
            self.scheme.value,
            fmt(self.ebn0_db),
            fmt(self.beta_db),
            fmt(self.mu_db),
            fmt(self.timing_sigma),
            str(self.bits),
            str(self.errors),
            fmt(self.ber),
            fmt(self.ci_low),
            fmt(self.ci_high),
            "true" if self.truncated else "false",
            str(self.seed),
        ]


class SweepSpec(pydantic.BaseModel):
    """Cartesian experiment grid; ``template.profile.mu_db=None`` makes mu track
    each beta grid value."""

    model_config = pydantic.ConfigDict(frozen=True)

    schemes: typing.List[Scheme]
    ebn0_grid: typing.List[float]
    beta_grid: typing.List[float] = pydantic.Field(default_factory=lambda: [10.0])
    timing_sigma_grid: typing.List[float] = pydantic.Field(
        default_factory=lambda: [0.0]
    )
    template: SchemeConfig = pydantic.Field(default_factory=SchemeConfig)
    rule: StoppingRule = pydantic.Field(default_factory=StoppingRule)
    base_seed: int = pydantic.Field(default=0, ge=0)

    @pydantic.field_validator(
        "schemes", "ebn0_grid", "beta_grid", "timing_sigma_grid"
    )
    @classmethod
    def validate_grid(cls, values: typing.List) -> typing.List:
        if not values:
            raise ValueError("Grids must not be empty")
        for value in values:
            if isinstance(value, float) and not math.isfinite(value):
                raise ValueError("Grid values must be finite")
        return values


def write_records_csv(
    records: typing.Iterable[BerRecord],
    target: pathlib.Path | str | typing.TextIO,
) -> None:
    if isinstance(target, (str, pathlib.Path)):
        with open(target, "w", newline="", encoding="utf-8") as f:
            write_records_csv(records, f)
        return None

    writer = csv.writer(target, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for record in records:
        writer.writerow(record.to_row())
    return None


def records_to_csv_text(records: typing.Iterable[BerRecord]) -> str:
    buffer = io.StringIO()
    write_records_csv(records, buffer)
    return buffer.getvalue()


def read_records_csv(source: pathlib.Path | str) -> typing.List[BerRecord]:
    with open(source, newline="", encoding="utf-8") as f:
        reader = csv.DictReader(f)
        if tuple(reader.fieldnames or ()) != CSV_HEADER:
            raise ValueError(f"Unexpected CSV header: {reader.fieldnames}")
        return [BerRecord.model_validate(row) for row in reader]
