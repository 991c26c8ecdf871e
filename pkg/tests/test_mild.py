import math
from fractions import Fraction

import numpy as np
from pytest import approx, raises

from gevrey_nse.calibration import load_constants
from gevrey_nse.errors import ArgumentError, ConfigurationError, DomainError, NonConvergenceError
from gevrey_nse.forcing import ForcingSchedule
from gevrey_nse.mild import (CONTRACTION_BUDGET, TrajectorySample, beta_integral_constant, check_stability,
                             duhamel_trajectory, energy_method_constant, energy_method_radius, evaluate_phi,
                             evaluate_w, force_radius_exponent, phi_functions, picard_iterate, run_etd,
                             small_data_radius_exponent, smoothing_gap, theorem_quantities, time_grid,
                             trajectory_norms, weak_residual)
from gevrey_nse.norms import l2_norm
from gevrey_nse.spectral import PhysicalParams, SpectralField, heat_propagate, random_field, taylor_green


def _small_data(params, seed=0, amplitude=1e-6):
    return random_field(params, 6, (1.0, 6.0), seed, amplitude=amplitude)


def test_phi_functions():
    phi1, phi2 = phi_functions(np.array([0.0, -1.0, -50.0]))
    assert phi1[0] == approx(1.0, rel=1e-12)
    assert phi2[0] == approx(0.5, rel=1e-12)
    assert phi1[1] == approx(1 - math.exp(-1), rel=1e-12)
    assert phi2[1] == approx(math.exp(-1), rel=1e-12)
    assert phi1[2] == approx((1 - math.exp(-50)) / 50, rel=1e-12)


def test_time_grid():
    grid = time_grid(2.0, 10)
    assert grid[0] == 0.0
    assert grid[-1] == approx(2.0)
    assert len(grid) == 10
    assert np.all(np.diff(grid) > 0)
    with raises(ArgumentError):
        time_grid(0.0, 10)
    with raises(ArgumentError):
        time_grid(1.0, 2)


def test_trajectory_validation(shear_pair):
    with raises(ArgumentError):
        TrajectorySample(shear_pair.params, shear_pair.K, [0.0, 0.0], np.stack([shear_pair.coeffs] * 2))
    with raises(ArgumentError):
        TrajectorySample(shear_pair.params, shear_pair.K, [0.0, 1.0], np.stack([shear_pair.coeffs]))
    trajectory = TrajectorySample.from_fields([0.0, 1.0], [shear_pair, 2.0 * shear_pair])
    assert trajectory.index_of(1.0) == 1
    with raises(ArgumentError):
        trajectory.index_of(0.5)


def test_phi_unforced_is_heat_flow(random_2d):
    grid = time_grid(0.5, 6)
    phi = evaluate_phi(random_2d, None, grid)
    for index, t in enumerate(grid):
        assert np.allclose(phi.field(index).coeffs, heat_propagate(random_2d, t).coeffs, rtol=1e-12, atol=0.0)


def test_phi_constant_forcing_steady_state(unit_params, shear_pair):
    zero = SpectralField.zeros(unit_params, 4)
    phi = evaluate_phi(zero, ForcingSchedule.constant(shear_pair), np.array([0.0, 1.0, 50.0]))
    # single mode with unit rate : (1 - e^-t) f
    assert phi.field(1).coefficient((1, 0))[1] == approx(1 - math.exp(-1), rel=1e-14)
    assert phi.field(2).coefficient((1, 0))[1] == approx(1.0, rel=1e-14)


def test_phi_sampled_forcing_matches_constant(unit_params, shear_pair):
    zero = SpectralField.zeros(unit_params, 4)
    grid = np.linspace(0.0, 1.0, 11)
    sampled = ForcingSchedule.sampled([0.0, 2.0], [shear_pair, shear_pair])
    constant = ForcingSchedule.constant(shear_pair)
    left = evaluate_phi(zero, sampled, grid).coeffs
    right = evaluate_phi(zero, constant, grid).coeffs
    assert np.allclose(left, right, rtol=1e-12, atol=1e-15)
    with raises(ArgumentError):
        evaluate_phi(zero, sampled, np.array([0.0, 3.0]))


def test_duhamel_of_shear_vanishes(shear_pair):
    trajectory = evaluate_phi(shear_pair, None, time_grid(1.0, 5))
    assert np.max(np.abs(duhamel_trajectory(trajectory, trajectory).coeffs)) < 1e-14
    assert evaluate_w(trajectory, trajectory).max_abs() < 1e-14
    assert evaluate_w(trajectory, trajectory, 0.0).max_abs() == 0.0


def test_trajectory_norms_of_heat_flow(shear_pair):
    trajectory = evaluate_phi(shear_pair, None, time_grid(1.0, 12))
    norms = trajectory_norms(trajectory, 0.0, 0.0)
    # sup over t of 2 exp(sqrt(t) - t) is 2 e^(1/4), reached at t = 1/4
    assert norms.X_norm <= 2 * math.exp(0.25) * (1 + 1e-12)
    assert norms.X_norm >= 2.0
    assert norms.Z_norm == max(norms.X_norm, norms.Y_norm)


def test_etd_taylor_green_exact_decay(unit_params):
    vortex = taylor_green(unit_params, 16)
    trajectory = run_etd(vortex, None, 1e-3, 1000, stride=250)
    assert list(trajectory.times) == approx([0.0, 0.25, 0.5, 0.75, 1.0])
    for index, t in enumerate(trajectory.times):
        expected = math.exp(-2 * t) * vortex
        error = l2_norm(trajectory.field(index) - expected) / l2_norm(expected)
        assert error < 1e-6


def test_etd_second_order():
    params = PhysicalParams(2, 2 * math.pi, 0.1)
    u0 = random_field(params, 6, (1.0, 4.0), 1, amplitude=0.02)
    horizon = 0.5

    def final(dt):
        return run_etd(u0, None, dt, int(round(horizon / dt))).final

    reference = final(0.025 / 16)
    coarse = l2_norm(final(0.05) - reference)
    fine = l2_norm(final(0.025) - reference)
    assert 3.0 < coarse / fine < 5.0


def test_etd_callback_and_stride(random_2d):
    seen = []
    trajectory = run_etd(random_2d, None, 0.01, 5, stride=2, callback=lambda t, state: seen.append(t))
    assert list(trajectory.times) == approx([0.0, 0.02, 0.04, 0.05])
    assert seen == approx([0.0, 0.02, 0.04, 0.05])
    with raises(ArgumentError):
        run_etd(random_2d, None, 0.01, 0)


def test_check_stability(unit_params):
    check_stability(unit_params, 10, 0.01, 10.0)
    with raises(ConfigurationError):
        check_stability(unit_params, 10, 0.2, 10.0)
    with raises(ConfigurationError):
        check_stability(unit_params, 10, 0.0, 10.0)


def test_smoothing_gap_and_exponents():
    assert smoothing_gap(0, 2) == 0
    beta = smoothing_gap(Fraction(-3, 4), Fraction(59, 49))
    assert beta == Fraction(15, 59)
    assert force_radius_exponent(beta, Fraction(59, 10)) == Fraction(59, 64)
    assert force_radius_exponent(Fraction(0), Fraction(2)) == Fraction(1, 2)
    assert force_radius_exponent(Fraction(0), 1) == Fraction(1, 3)
    assert small_data_radius_exponent(Fraction(0)) == 1
    assert smoothing_gap(Fraction(-1, 2), math.inf) == Fraction(1, 2)


def test_beta_integral_constant():
    assert beta_integral_constant(0.5, 0.5) == approx(math.pi)
    assert beta_integral_constant(0.5, 0.0) == approx(2.0)
    with raises(ArgumentError):
        beta_integral_constant(1.0, 0.0)


def test_energy_method_constant():
    constant, gamma = energy_method_constant()
    assert gamma == approx(3.92, abs=0.01)
    assert constant == approx(0.8046, abs=1e-3)


def test_energy_method_radius(shear_pair):
    constant, _ = energy_method_constant()
    assert energy_method_radius(shear_pair) == approx(constant / 2.0)
    assert energy_method_radius(SpectralField.zeros(shear_pair.params, 4)) == math.inf


def test_small_data_theorem_quantities(unit_params):
    constants = load_constants()
    u0 = _small_data(unit_params)
    theorem = theorem_quantities(u0, None, 0, 2, "3.1", 1.0, constants)
    assert theorem.beta == 0
    assert theorem.q_prime == 2
    assert theorem.radius_exponent == 1
    assert theorem.C_star == approx(1 / 720)
    assert theorem.global_existence
    assert theorem.T_star == 1.0
    assert theorem.radius_bound == approx(1.0)
    assert theorem.energy_radius is not None
    assert theorem.constants_version == constants.version
    assert theorem.as_dict()["beta"] == {"value": 0.0, "exact": "0"}


def test_large_data_shrinks_existence_time(unit_params):
    constants = load_constants()
    theorem = theorem_quantities(_small_data(unit_params, amplitude=1.0), None, 0, 2, "3.1", 1.0, constants)
    assert not theorem.global_existence
    assert theorem.T_star < 1.0
    assert theorem.radius_bound == approx(math.sqrt(theorem.T_star))


def test_force_dominated_theorem_arithmetic(unit_params):
    constants = load_constants()
    u0 = _small_data(unit_params)
    forcing = ForcingSchedule.constant(random_field(unit_params, 6, (1.0, 2.0), 9, amplitude=1e-3))
    theorem = theorem_quantities(u0, forcing, Fraction(-3, 4), Fraction(59, 49), "7.1", 1.0, constants)
    assert theorem.beta == Fraction(15, 59)
    assert theorem.radius_exponent == Fraction(59, 64)
    assert theorem.as_dict()["radius_exponent"]["exact"] == "59/64"
    assert theorem.energy_radius is None

    sup_form = theorem_quantities(u0, forcing, 0, math.inf, "7.1", 1.0, constants)
    assert sup_form.radius_exponent == Fraction(1, 3)
    assert sup_form.as_dict()["q"] == "inf"


def test_grashof_theorem_settings(unit_params, unit_params_3d):
    constants = load_constants()
    u0 = _small_data(unit_params)
    forcing = ForcingSchedule.constant(random_field(unit_params, 6, (1.0, 2.0), 9, amplitude=1e-3))
    theorem = theorem_quantities(u0, forcing, 0, 2, "3.2", 1.0, constants)
    assert theorem.radius_exponent == Fraction(1, 2)
    assert theorem.grashof_radius_bound > 0
    with raises(ArgumentError):
        theorem_quantities(u0, None, 0, 2, "3.2", 1.0, constants)
    with raises(ArgumentError):
        theorem_quantities(u0, forcing, Fraction(-3, 4), Fraction(59, 49), "3.3", 1.0, constants)
    u0_3d = random_field(unit_params_3d, 3, (1.0, 3.0), 0, amplitude=1e-6)
    with raises(ArgumentError):
        theorem_quantities(u0_3d, None, 0, 2, "3.2", 1.0, constants)


def test_theorem_invalid(unit_params):
    constants = load_constants()
    u0 = _small_data(unit_params)
    with raises(DomainError):
        theorem_quantities(u0, None, -1, 2, "3.1", 1.0, constants)
    with raises(ArgumentError):
        theorem_quantities(u0, None, 0, 1, "3.1", 1.0, constants)
    with raises(ArgumentError):
        theorem_quantities(u0, None, 0, 2, "9.9", 1.0, constants)
    with raises(ArgumentError):
        theorem_quantities(u0, None, 0, 2, "7.1", 1.0, constants)


def test_picard_taylor_green(unit_params):
    constants = load_constants()
    vortex = taylor_green(unit_params, 4)
    theorem = theorem_quantities(vortex, None, 0, 2, "3.1", 1.0, constants)
    grid = time_grid(theorem.T_star, 8)
    trajectory, report = picard_iterate(vortex, None, theorem, grid)
    assert report.converged
    for index, t in enumerate(grid):
        expected = math.exp(-2 * t) * vortex
        assert l2_norm(trajectory.field(index) - expected) <= 1e-8 * l2_norm(expected)


def test_picard_small_data_contracts(unit_params):
    constants = load_constants()
    for seed in range(3):
        u0 = _small_data(unit_params, seed)
        theorem = theorem_quantities(u0, None, 0, 2, "3.1", 1.0, constants)
        assert theorem.hypothesis
        trajectory, report = picard_iterate(u0, None, theorem, time_grid(theorem.T_star, 8))
        assert report.converged
        assert report.max_ratio <= float(CONTRACTION_BUDGET) + 0.01
        assert report.in_e
        assert report.residual < 1e-8
        assert len(trajectory) == 8


def test_picard_rejects_grid_beyond_existence_time(unit_params):
    constants = load_constants()
    u0 = _small_data(unit_params, amplitude=1.0)
    theorem = theorem_quantities(u0, None, 0, 2, "3.1", 1.0, constants)
    with raises(ArgumentError):
        picard_iterate(u0, None, theorem, time_grid(2 * theorem.T_star, 5))


def test_picard_diverges_for_large_data(unit_params):
    constants = load_constants()
    u0 = random_field(unit_params, 6, (1.0, 6.0), 0, amplitude=5.0)
    forcing = ForcingSchedule.constant(random_field(unit_params, 6, (1.0, 2.0), 9, amplitude=1e-8))
    theorem = theorem_quantities(u0, forcing, 0, 2, "7.1", 1.0, constants)
    assert not theorem.hypothesis
    try:
        _, report = picard_iterate(u0, forcing, theorem, time_grid(theorem.T_star, 8), max_iters=30)
    except NonConvergenceError as error:
        assert error.ratios is not None
    else:
        assert not report.converged


def test_weak_residual_of_heat_flow(shear_pair):
    trajectory = evaluate_phi(shear_pair, None, np.linspace(0.0, 1.0, 201))
    report = weak_residual(trajectory)
    assert report.passed
    assert report.residual < 1e-4
