import pytest

from qrelativity.constants import INVARIANT_TOLERANCES
from qrelativity.exceptions import ConfigError
from qrelativity.services import invariant_names, run_invariants
from qrelativity.services.verification import invariant


def test_every_tolerance_has_a_check():
    assert invariant_names() == sorted(INVARIANT_TOLERANCES)


def test_registering_an_unknown_invariant_fails():
    with pytest.raises(KeyError):
        invariant("hilbert.does_not_exist")


def test_prefix_selects_a_module():
    results = run_invariants(only="transforms")
    assert [r.name for r in results] == [n for n in invariant_names() if n.startswith("transforms.")]
    assert all(r.passed for r in results)
    assert all(r.measured is not None and r.measured <= r.tolerance for r in results)


def test_tightened_tolerance_fails():
    results = run_invariants({"transforms.dilation_round_trip": -1.0}, only="transforms.dilation")
    by_name = {r.name: r for r in results}
    assert not by_name["transforms.dilation_round_trip"].passed
    assert by_name["transforms.dilation_composition"].passed


def test_unknown_tolerance_is_a_config_error():
    with pytest.raises(ConfigError) as info:
        run_invariants({"transforms.nope": 1.0})
    assert info.value.location == "tolerance"


def test_unmatched_prefix_is_a_config_error():
    with pytest.raises(ConfigError) as info:
        run_invariants(only="gravity")
    assert info.value.location == "only"


def test_full_suite_passes():
    results = run_invariants()
    failed = [(r.name, r.measured, r.detail) for r in results if not r.passed]
    assert failed == []
    assert len(results) == len(INVARIANT_TOLERANCES)
