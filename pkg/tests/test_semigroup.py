import math

import numpy as np
from pytest import approx, raises

from gevrey_nse.errors import ArgumentError
from gevrey_nse.semigroup import (SCHEDULE_CONSTANT, algebra_constant, check_algebra_bound, check_heat_bilinear,
                                  check_heat_smoothing, check_schedule_absorption, heat_bilinear_constant,
                                  heat_smoothing_constant, modulus_convolution, run_semigroup_suite)
from gevrey_nse.spectral import SpectralField


def test_constants():
    assert heat_smoothing_constant(0.0) == 1.0
    assert heat_smoothing_constant(2.0) == approx(1 / math.e)
    assert algebra_constant(0.0) == 2.0
    assert algebra_constant(2.0) == 4.0
    # delta = gamma - 1 leaves no time singularity
    assert heat_bilinear_constant(1.0, 0.0) == algebra_constant(1.0)
    assert SCHEDULE_CONSTANT == approx(math.sqrt(math.e))


def test_heat_smoothing_contractive(random_2d):
    report = check_heat_smoothing(random_2d, 0.1, 0.0, 0.0, 0.3)
    assert report.passed
    assert report.constant_used == 1.0


def test_heat_smoothing_tight_on_single_mode(shear_pair):
    for beta in (0.5, 1.0):
        report = check_heat_smoothing(shear_pair, 0.0, 0.0, beta, beta / 2)
        assert report.passed
        assert report.ratio > 0.99


def test_heat_smoothing_invalid(shear_pair):
    with raises(ArgumentError):
        check_heat_smoothing(shear_pair, 0.0, 0.0, 0.5, 0.0)
    with raises(ArgumentError):
        check_heat_smoothing(shear_pair, 0.0, 0.0, -0.5, 1.0)


def test_schedule_absorption_tight(shear_pair):
    report = check_schedule_absorption(shear_pair, 0.0, 1.0, 0.0)
    assert report.passed
    assert report.ratio == approx(1.0, rel=1e-12)


def test_schedule_absorption_zero_field(unit_params):
    report = check_schedule_absorption(SpectralField.zeros(unit_params, 3), 0.2, 0.5, 0.0)
    assert report.lhs == 0.0
    assert report.passed


def test_schedule_absorption_invalid(shear_pair):
    with raises(ArgumentError):
        check_schedule_absorption(shear_pair, 1.0, 1.0, 0.0)


def test_modulus_convolution_of_two_pairs(unit_params):
    u = SpectralField.from_modes(unit_params, 1, {(1, 0): (0.0, 1.0)})
    v = SpectralField.from_modes(unit_params, 1, {(0, 1): (1.0, 0.0)})
    vectors, values = modulus_convolution(u, v)
    support = {tuple(vector) for vector in vectors[values > 1e-12]}
    assert support == {(1, 1), (1, -1), (-1, 1), (-1, -1)}
    assert np.allclose(values[values > 1e-12], 1.0)

    report = check_algebra_bound(u, v, 0.0, 0.0)
    assert report.lhs == approx(4.0)
    assert report.rhs == approx(8.0)
    assert report.ratio == approx(0.5)


def test_algebra_bound_invalid(shear_pair):
    with raises(ArgumentError):
        check_algebra_bound(shear_pair, shear_pair, 0.0, -1.0)
    with raises(ArgumentError):
        check_algebra_bound(shear_pair, shear_pair, -0.1, 0.0)


def test_heat_bilinear_shear_vanishes(shear_pair):
    report = check_heat_bilinear(shear_pair, shear_pair, 0.0, 0.0, 0.0, 0.5)
    assert report.lhs < 1e-14
    assert report.passed


def test_heat_bilinear_random(random_2d):
    for t in (0.01, 0.1, 1.0):
        assert check_heat_bilinear(random_2d, random_2d, 0.0, 0.0, 0.0, t).passed


def test_scale_invariance(random_2d):
    first = check_heat_smoothing(random_2d, 0.2, 0.5, 0.5, 0.1)
    second = check_heat_smoothing(5.0 * random_2d, 0.2, 0.5, 0.5, 0.1)
    assert first.ratio == approx(second.ratio, rel=1e-13)


def test_semigroup_suite_passes():
    reports = run_semigroup_suite(cases=25, seed=0)
    assert len(reports) == 100
    assert all(report.passed for report in reports)
    assert {report.name for report in reports} == {"heat_smoothing", "schedule_absorption", "algebra_bound",
                                                   "heat_bilinear"}


def test_semigroup_suite_deterministic():
    first = [report.as_dict() for report in run_semigroup_suite(cases=3, seed=5)]
    second = [report.as_dict() for report in run_semigroup_suite(cases=3, seed=5)]
    assert first == second
