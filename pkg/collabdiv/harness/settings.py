import typing

import pydantic
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    model_config = SettingsConfigDict(env_prefix="COLLABDIV_", extra="ignore")

    workers: int = pydantic.Field(default=1, ge=1)
    cache_dir: typing.Optional[str] = None
    log_level: typing.Literal["DEBUG", "INFO", "WARNING", "ERROR"] = "INFO"
    run_acceptance: bool = False
