from dataclasses import dataclass

import numpy as np

from algebra.tropical_core import TropicalMatrix
from harness.instance_config import InstanceConfig
from utils.errors import DomainError, InstanceFormatError
from utils.serialization import (
    exponent_from_json,
    exponent_to_json,
    matrix_from_json,
    matrix_to_json,
)


@dataclass(frozen=True)
class Instance:
    m: TropicalMatrix
    h: TropicalMatrix
    a: int
    b: int
    instance_id: str

    @property
    def order(self) -> int:
        return self.m.order


def instance_id(seed: int, trial_index: int) -> str:
    return f"{seed}-{trial_index}"


def trial_rng(seed: int, trial_index: int) -> np.random.Generator:
    """PCG64 stream for one trial, independent of every other trial index."""
    return np.random.Generator(
        np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(trial_index,)))
    )


def _draw_matrix(rng: np.random.Generator, config: InstanceConfig) -> TropicalMatrix:
    values = rng.integers(
        config.entry_min,
        config.entry_max,
        size=(config.order, config.order),
        endpoint=True,
    )
    return TropicalMatrix(values.astype(object).tolist())


def gen_instance(config: InstanceConfig, trial_index: int) -> Instance:
    """
    Draws M, H with uniform entries and a, b uniform in [exp_min, exp_max].

    The result depends only on (config.seed, trial_index) and the ranges.
    """
    if trial_index < 0:
        raise DomainError(f"trial_index must be non-negative, got {trial_index}")
    rng = trial_rng(config.seed, trial_index)
    m = _draw_matrix(rng, config)
    h = _draw_matrix(rng, config)
    a, b = (
        int(v)
        for v in rng.integers(config.exp_min, config.exp_max, size=2, endpoint=True)
    )
    return Instance(m=m, h=h, a=a, b=b, instance_id=instance_id(config.seed, trial_index))


def instance_to_dict(instance: Instance) -> dict:
    return {
        "instance_id": instance.instance_id,
        "m": matrix_to_json(instance.m),
        "h": matrix_to_json(instance.h),
        "a": exponent_to_json(instance.a),
        "b": exponent_to_json(instance.b),
    }


def instance_from_dict(data) -> Instance:
    """
    :raises InstanceFormatError: on missing fields or malformed values.
    """
    if not isinstance(data, dict):
        raise InstanceFormatError("Instance must be a JSON object")
    missing = [key for key in ("m", "h", "a", "b") if key not in data]
    if missing:
        raise InstanceFormatError(f"Instance is missing fields: {', '.join(missing)}")
    m = matrix_from_json(data["m"])
    h = matrix_from_json(data["h"])
    if m.order != h.order:
        raise InstanceFormatError(f"M and H differ in order: {m.order} vs {h.order}")
    return Instance(
        m=m,
        h=h,
        a=exponent_from_json(data["a"]),
        b=exponent_from_json(data["b"]),
        instance_id=str(data.get("instance_id", "")),
    )
