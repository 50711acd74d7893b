import numpy as np
import pytest

from core.sign_suite import (
    ALL_PROPERTIES,
    CORE_PROPERTIES,
    InstanceSampler,
    check_normal_pullback,
    run_sign_suite,
)


def test_core_properties_pass():
    report = run_sign_suite(42, 100, 4)
    assert report.all_passed, report.render()
    assert set(report.tallies) == set(CORE_PROPERTIES)
    assert report.render().endswith("all properties: PASS\n")


def test_extended_properties_pass():
    report = run_sign_suite(7, 40, 4, extended=True)
    assert report.all_passed, report.render()
    assert set(report.tallies) == set(ALL_PROPERTIES)


@pytest.mark.slow
def test_acceptance_run():
    report = run_sign_suite(42, 1000, 5)
    assert report.all_passed, report.render()


def test_zero_instances():
    report = run_sign_suite(1, 0, 3)
    assert report.all_passed
    assert report.tallies == {}
    assert "no instances run" in report.render()


def test_reports_are_deterministic():
    first = run_sign_suite(5, 30, 3).render()
    assert run_sign_suite(5, 30, 3).render() == first
    assert run_sign_suite(5, 30, 3, workers=2).render() == first


def test_single_property_selection():
    report = run_sign_suite(3, 10, 3, properties=["oriented_commutativity"])
    assert list(report.tallies) == ["oriented_commutativity"]


@pytest.mark.parametrize("kwargs", [
    {"max_dim": 0},
    {"max_dim": 7},
    {"instances": -1},
    {"properties": ["no_such_property"]},
])
def test_invalid_arguments(kwargs):
    arguments = {"seed": 1, "instances": 1, "max_dim": 3}
    arguments.update(kwargs)
    with pytest.raises(ValueError):
        run_sign_suite(**arguments)


def test_normal_pullback_property():
    report = run_sign_suite(42, 100, 4, properties=["normal_pullback"])
    assert report.all_passed, report.render()
    assert list(report.tallies) == ["normal_pullback"]


@pytest.mark.parametrize("seed", range(20))
def test_normal_pullback_frame_is_a_basis(seed):
    sampler = InstanceSampler(np.random.default_rng(seed), 5)
    assert check_normal_pullback(sampler) is None
