"""Runtime settings shared by the service facades and the command line driver."""

import logging
import os
from typing import Mapping, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from nctorus.utils import GENERATOR_VERSION

WORKERS_ENV = "NCG_WORKERS"
LOG_LEVEL_ENV = "NCG_LOG_LEVEL"


def default_workers() -> int:
    """Default size of the worker pool, min(4, cpu count)."""
    return min(4, os.cpu_count() or 1)


class RuntimeSettings(BaseModel):
    """Process-wide knobs.

    Attributes:
        workers: Bound of every worker pool.
        log_level: Name of the logging level.
        rng_version: Version tag of the seeded element generator.
    """

    workers: int = Field(default_factory=default_workers, description="Worker pool bound.")
    log_level: str = Field(default="WARNING", description="Logging level name.")
    rng_version: str = Field(default=GENERATOR_VERSION, description="Generator version.")

    model_config = ConfigDict(
        frozen=True,
        json_schema_extra={
            "example": {"workers": 4, "log_level": "INFO", "rng_version": GENERATOR_VERSION}
        },
    )

    @model_validator(mode="before")
    @classmethod
    def validate(cls, values):
        """Validate the worker bound, the level name and the generator version."""
        if not isinstance(values, dict):
            return values
        values = dict(values)
        cls._validate_workers(values)
        cls._validate_log_level(values)
        cls._validate_rng_version(values)
        return values

    @classmethod
    def _validate_workers(cls, values):
        workers = values.get("workers")
        if workers is None:
            return values
        try:
            workers = int(workers)
        except (TypeError, ValueError):
            raise ValueError(f"workers must be a positive integer, got '{workers}'")
        if workers < 1:
            raise ValueError(f"workers must be a positive integer, got '{workers}'")
        values["workers"] = workers
        return values

    @classmethod
    def _validate_log_level(cls, values):
        level = values.get("log_level")
        if level is None:
            return values
        name = str(level).upper()
        if not isinstance(logging.getLevelName(name), int):
            raise ValueError(f"log_level must be a logging level name, got '{level}'")
        values["log_level"] = name
        return values

    @classmethod
    def _validate_rng_version(cls, values):
        version = values.get("rng_version")
        if version is not None and version != GENERATOR_VERSION:
            raise ValueError(f"Unsupported rng_version '{version}'")
        return values

    @classmethod
    def from_env(cls, environ: Optional[Mapping[str, str]] = None) -> "RuntimeSettings":
        """Read NCG_WORKERS and NCG_LOG_LEVEL, falling back to the defaults."""
        environ = os.environ if environ is None else environ
        values = {}
        if environ.get(WORKERS_ENV):
            values["workers"] = environ[WORKERS_ENV]
        if environ.get(LOG_LEVEL_ENV):
            values["log_level"] = environ[LOG_LEVEL_ENV]
        return cls.model_validate(values)

    @property
    def level(self) -> int:
        """Numeric logging level."""
        return logging.getLevelName(self.log_level)
