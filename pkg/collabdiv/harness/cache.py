import hashlib
import json
import logging
import pathlib
import typing

import diskcache

from collabdiv.harness.records import BerRecord, StoppingRule
from collabdiv.protocol.config import SchemeConfig

logger = logging.getLogger(__name__)


def point_key(
    config: SchemeConfig, ebn0_db: float, rule: StoppingRule, seed: int
) -> typing.Text:
    payload = json.dumps(
        {
            "config": config.model_dump(mode="json"),
            "ebn0_db": ebn0_db,
            "rule": rule.model_dump(mode="json"),
            "seed": seed,
        },
        sort_keys=True,
    )
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


class PointCache:
    """On-disk store of finished BER points so interrupted sweeps resume."""

    def __init__(self, directory: pathlib.Path | str):
        self.directory = pathlib.Path(directory)
        self.__cache = diskcache.Cache(str(self.directory))

    def get(self, key: typing.Text) -> typing.Optional[BerRecord]:
        raw = self.__cache.get(key)
        if raw is None:
            return None
        logger.debug(f"Point cache hit: {key[:12]}")
        return BerRecord.model_validate_json(typing.cast(str, raw))

    def set(self, key: typing.Text, record: BerRecord) -> None:
        self.__cache.set(key, record.model_dump_json())

    def __len__(self) -> int:
        return len(self.__cache)

    def close(self) -> None:
        self.__cache.close()

    def __enter__(self) -> "PointCache":
        return self

    def __exit__(self, *exc: typing.Any) -> None:
        self.close()
