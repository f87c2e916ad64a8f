import os

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from attack.period_finder import DEFAULT_MAX_STEPS
from utils.errors import InstanceFormatError
from utils.serialization import INT64_MAX, INT64_MIN, dump_json, load_json

UINT64_LIMIT = 2**64
EXPONENT_LIMIT = 2**63  # numpy draws exponents as int64


class InstanceConfig(BaseModel):
    """
    Parameters of a batch of attacked protocol instances.

    The protocol's suggested parameters are not known here, so the defaults are a
    desk-scale profile: order 10, entries in [-1000, 1000], exponents in [1, 2^32].
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    order: int = Field(10, ge=1)
    entry_min: int = Field(-1000, ge=INT64_MIN, le=INT64_MAX)
    entry_max: int = Field(1000, ge=INT64_MIN, le=INT64_MAX)
    exp_min: int = Field(1, ge=1)
    exp_max: int = Field(2**32, ge=1, lt=EXPONENT_LIMIT)
    seed: int = Field(0, ge=0, lt=UINT64_LIMIT)
    trials: int = Field(100, ge=1)
    max_steps: int = Field(DEFAULT_MAX_STEPS, ge=1)
    workers: int = Field(1, ge=1)

    @model_validator(mode="after")
    def check_ranges(self):
        if self.entry_min > self.entry_max:
            raise ValueError(
                f"entry_min ({self.entry_min}) must not exceed entry_max ({self.entry_max})"
            )
        if self.exp_min > self.exp_max:
            raise ValueError(
                f"exp_min ({self.exp_min}) must not exceed exp_max ({self.exp_max})"
            )
        return self


def build_config(**values) -> InstanceConfig:
    """
    Builds a validated config, ignoring values that are None (unset CLI flags).

    :raises InstanceFormatError: when a value violates the config invariants.
    """
    values = {key: value for key, value in values.items() if value is not None}
    try:
        return InstanceConfig(**values)
    except ValidationError as e:
        raise InstanceFormatError(f"Invalid configuration: {e}") from e


def load_config(path: str = None, **overrides) -> InstanceConfig:
    """
    Load a config from a JSON file and apply overrides on top.

    :param path: str, JSON file with InstanceConfig fields; defaults are used if None
    :param overrides: field values that take precedence over the file (None = unset)
    :return: InstanceConfig
    """
    data = {}
    if path is not None:
        if not os.path.exists(path):
            raise InstanceFormatError(f"Config file not found: {path}")
        data = load_json(path)
        if not isinstance(data, dict):
            raise InstanceFormatError(f"{path} must contain a JSON object")
    data.update({key: value for key, value in overrides.items() if value is not None})
    return build_config(**data)


def save_config(config: InstanceConfig, path: str) -> None:
    dump_json(config.model_dump(), path)
