import pytest

from algebra.tropical_core import TropicalMatrix
from harness.instance_config import InstanceConfig
from harness.instances import gen_instance, instance_from_dict, instance_to_dict
from utils.errors import DomainError, InstanceFormatError


def test_same_seed_and_trial_give_the_same_instance(desk_config):
    assert gen_instance(desk_config, 4) == gen_instance(desk_config, 4)


def test_trials_are_independent(desk_config):
    assert gen_instance(desk_config, 0) != gen_instance(desk_config, 1)
    other_seed = desk_config.model_copy(update={"seed": desk_config.seed + 1})
    assert gen_instance(desk_config, 0) != gen_instance(other_seed, 0)


def test_fixed_entry_range_gives_constant_matrices():
    config = InstanceConfig(order=3, entry_min=0, entry_max=0)
    instance = gen_instance(config, 0)
    assert instance.m == TropicalMatrix.zeros(3)
    assert instance.h == TropicalMatrix.zeros(3)


def test_values_stay_within_ranges():
    config = InstanceConfig(order=10, entry_min=-5, entry_max=5, exp_min=3, exp_max=9)
    for trial in range(100):
        instance = gen_instance(config, trial)
        assert instance.order == 10
        for matrix in (instance.m, instance.h):
            assert all(-5 <= v <= 5 for row in matrix.key() for v in row)
            assert all(type(v) is int for row in matrix.key() for v in row)
        assert 3 <= instance.a <= 9 and 3 <= instance.b <= 9
        assert instance.instance_id == f"0-{trial}"


def test_negative_trial_index_is_rejected(desk_config):
    with pytest.raises(DomainError):
        gen_instance(desk_config, -1)


def test_dict_round_trip_keeps_the_instance(desk_config):
    instance = gen_instance(desk_config, 2)
    data = instance_to_dict(instance)
    assert isinstance(data["a"], str)
    assert instance_from_dict(data) == instance


@pytest.mark.parametrize(
    "data",
    [
        [],
        {"m": {"entries": [[1]]}, "h": {"entries": [[1]]}, "a": "1"},
        {"m": {"entries": [[1]]}, "h": {"entries": [[1, 2], [3, 4]]}, "a": "1", "b": "2"},
        {"m": {"entries": [[1]]}, "h": {"entries": [[1]]}, "a": "0", "b": "2"},
    ],
)
def test_malformed_instances(data):
    with pytest.raises(InstanceFormatError):
        instance_from_dict(data)
