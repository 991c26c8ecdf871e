"""
Command line entry point : simulate, picard, verify, spectrum, radius and calibrate subcommands
"""
# gevrey-nse - Gevrey norm Navier-Stokes simulator and verifier
# Copyright (C) 2026  gevrey-nse developers
#
# This program is free software: you can redistribute it and/or modify
# it under the terms of the GNU General Public License as published by
# the Free Software Foundation, either version 3 of the License, or
# (at your option) any later version.
#
# This program is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
# GNU General Public License for more details.
#
# You should have received a copy of the GNU General Public License
# along with this program.  If not, see <http://www.gnu.org/licenses/>.
import argparse
import logging
import sys
from dataclasses import asdict
from pathlib import Path

from gevrey_nse import config as run_config
from gevrey_nse.calibration import load_constants, save_constants
from gevrey_nse.code_utilities import get_thread_count
from gevrey_nse.datastore import (VERSION, EXIT_OK, EXIT_CONFIGURATION, EXIT_NUMERICAL_ABORT,
                                  EXIT_NONCONVERGENCE, EXIT_VERIFICATION_FAILED)
from gevrey_nse.errors import (ArgumentError, ConfigurationError, DomainError, EstimationError,
                               NonConvergenceError, NumericalAbort, SaturationError)
from gevrey_nse.inequalities import calibrate_constants, run_appendix_suite, run_lemma_suite
from gevrey_nse.mild import picard_iterate, run_etd, theorem_quantities, time_grid, weak_residual
from gevrey_nse.norms import compute_data_numbers, grad_l2_norm
from gevrey_nse.radius import (compare_to_bound, estimate_radius_bisect, estimate_radius_fit,
                               fit_radius_growth)
from gevrey_nse.semigroup import run_semigroup_suite
from gevrey_nse.snapshots import JsonLinesWriter, write_report, write_shell_csv, write_snapshot, write_spectrum_csv
from gevrey_nse.turbulence import (RunningAverage, diagnostics_record, dissipation_report, doering_titi_radius,
                                   dyadic_bands, dyadic_spectrum, energy_balance_dissipation, fit_power_law,
                                   instantaneous_band_energy)

_LOGGER = logging.getLogger(__name__)

SUITE_SEMIGROUP = "semigroup"
SUITE_APPENDIX = "appendix"
SUITE_LEMMAS = "lemmas"
SUITE_ALL = "all"
SUITES = (SUITE_SEMIGROUP, SUITE_APPENDIX, SUITE_LEMMAS, SUITE_ALL)

DIAGNOSTICS_FILE = "diagnostics.jsonl"
FINAL_SNAPSHOT_FILE = "final_state.bin"
ABORT_SNAPSHOT_FILE = "abort_state.bin"
ABORT_REPORT_FILE = "abort_report.json"
SIMULATE_REPORT_FILE = "simulate_report.json"
SPECTRUM_FINAL_FILE = "spectrum_final.csv"
SPECTRUM_MEAN_FILE = "spectrum_mean.csv"
SPECTRUM_FIT_FILE = "spectrum_fit.json"
THEOREM_FILE = "theorem.json"
PICARD_REPORT_FILE = "picard_report.json"
RADIUS_REPORT_FILE = "radius_report.json"
SHELL_FILE = "shells.csv"
VERIFY_REPORT_FILE = "verify_report.json"
VERIFY_FAILURES_FILE = "verify_failures.json"
CONSTANTS_FILE = "constants.ini"

# default case counts of the verification sweeps
SEMIGROUP_CASES = 1000
LEMMA_CASES = 200


class _ArgumentParser(argparse.ArgumentParser):
    """Reports usage errors as configuration errors instead of exiting"""

    def error(self, message):
        raise ConfigurationError(f"invalid command line : {message}")


def _build_parser():
    parser = _ArgumentParser(prog="gevrey-nse",
                             description="Gevrey norm Navier-Stokes simulator and verifier")
    parser.add_argument("--version", action="version", version=f"%(prog)s {VERSION}")
    subparsers = parser.add_subparsers(dest="command", required=True, parser_class=_ArgumentParser)

    def add_command(name, help_text, config_required=True):
        command = subparsers.add_parser(name, help=help_text)
        command.add_argument("--config", type=Path, required=config_required, help="run configuration file")
        command.add_argument("--seed", type=int, help="overrides the configured seed")
        command.add_argument("--out", type=Path, help="overrides the configured output directory")
        command.add_argument("--no-progress", action="store_true", help="hides progress bars")
        return command

    add_command("simulate", "integrates the configured run and records diagnostics")
    add_command("picard", "solves the mild formulation on [0, T*] and checks the theorem radius bound")
    verify = add_command("verify", "runs verification suites", config_required=False)
    verify.add_argument("--suite", default=SUITE_ALL, help=f"one of {', '.join(SUITES)}")
    verify.add_argument("--cases", type=int, help="overrides the sweep case counts")
    add_command("spectrum", "time averaged dyadic band spectrum and power law fit")
    add_command("radius", "radius estimates at the horizon and theorem comparison")
    calibrate = add_command("calibrate", "measures the estimate constants and writes a new constants file")
    calibrate.add_argument("--cases", type=int, default=LEMMA_CASES, help="lemma sweep case count")
    return parser


def _output_dir(path):
    path = Path(path)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _abort(error, config, output_dir):
    """Dumps the last good state of an aborted integration"""
    snapshot = output_dir / ABORT_SNAPSHOT_FILE
    write_snapshot(error.last_good_state, snapshot)
    write_report({"status": "numerical_abort", "message": str(error), "time": error.time,
                  "state": snapshot.name, "config": config.as_dict()},
                 output_dir / ABORT_REPORT_FILE)
    return EXIT_NUMERICAL_ABORT


def _instant_spectrum(state):
    return [(low, instantaneous_band_energy(state, low, high)) for low, high in dyadic_bands(state)]


def run_simulate(config, progress=True):
    """
    Integrates the configured run with exponential time differencing.

    Every snapshot_stride steps a diagnostics record goes to the JSON-lines series. The final
    state, its band spectrum, the time averaged spectrum and a run report close the run.

    :type config: gevrey_nse.config.RunConfig
    :param progress: display a progress bar

    :return: exit code
    :rtype: int
    """
    output_dir = _output_dir(config.output_dir)
    constants = config.constants()
    u0 = config.initial_field()
    forcing = config.forcing_schedule()
    sigma = float(config.sigma)
    try:
        numbers = compute_data_numbers(u0, forcing, sigma, float(config.q), config.horizon)
    except SaturationError as error:
        _LOGGER.error("Data numbers saturate : %s", error)
        return _abort(NumericalAbort(f"data numbers saturate : {error}", u0, 0.0), config, output_dir)
    dissipation = RunningAverage()
    rate = config.params.nu * config.params.kappa0 ** config.params.n

    _LOGGER.info("Simulating %d steps of dt=%.3e, n=%d, K=%d", config.steps, config.dt, config.params.n, config.K)
    with JsonLinesWriter(output_dir / DIAGNOSTICS_FILE) as series:
        def record(t, state):
            dissipation.update(t, rate * grad_l2_norm(state) ** 2)
            try:
                entry = diagnostics_record(t, state, sigma, dissipation.mean, numbers, config.fit_band)
            except SaturationError as error:
                raise NumericalAbort(f"diagnostics saturate at t={t:.6g} : {error}", state, t) from error
            series.write(entry)

        try:
            trajectory = run_etd(u0, forcing, config.dt, config.steps, config.snapshot_stride, record, progress)
        except NumericalAbort as error:
            _LOGGER.error("Numerical abort : %s", error)
            return _abort(error, config, output_dir)

    final = trajectory.final
    write_snapshot(final, output_dir / FINAL_SNAPSHOT_FILE)
    write_spectrum_csv(_instant_spectrum(final), output_dir / SPECTRUM_FINAL_FILE)
    horizon = min(config.averaging_horizon, float(trajectory.times[-1]))
    write_spectrum_csv(dyadic_spectrum(trajectory, horizon), output_dir / SPECTRUM_MEAN_FILE)

    report = dissipation_report(trajectory, horizon)
    write_report({
        "status": "ok",
        "version": VERSION,
        "constants_version": constants.version,
        "config": config.as_dict(),
        "numbers": numbers.as_dict(),
        "dissipation": asdict(report),
        "dissipation_from_balance": energy_balance_dissipation(trajectory, forcing, horizon),
        "doering_titi": asdict(doering_titi_radius(report)),
        "samples": len(trajectory),
    }, output_dir / SIMULATE_REPORT_FILE)
    return EXIT_OK


def _radius_estimates(state, config):
    """
    Both estimators, the fit being None when too few shells are populated. The modal decay
    fit is the measured radius, the bisection standing in when the fit is unavailable.
    """
    sigma = float(config.sigma)
    try:
        fit = estimate_radius_fit(state, config.fit_band, sigma)
    except EstimationError as error:
        _LOGGER.warning("Radius fit unavailable : %s", error)
        fit = None
    bisect = estimate_radius_bisect(state, sigma, config.radius_budget)
    return fit, bisect, fit if fit is not None else bisect


def run_picard(config, progress=True):
    """
    Computes the theorem quantities, iterates the mild formulation on [0, T*] and compares
    the measured radius at T* with the theorem lower bound.

    :type config: gevrey_nse.config.RunConfig

    :return: exit code
    :rtype: int
    """
    output_dir = _output_dir(config.output_dir)
    constants = config.constants()
    u0 = config.initial_field()
    forcing = config.forcing_schedule()
    theorem = theorem_quantities(u0, forcing, config.sigma, config.q, config.theorem, config.horizon, constants)
    write_report(theorem.as_dict(), output_dir / THEOREM_FILE)

    t_grid = time_grid(theorem.T_star, config.picard_points)
    try:
        trajectory, report = picard_iterate(u0, forcing, theorem, t_grid, config.picard_tolerance,
                                            config.picard_max_iterations, progress)
    except NonConvergenceError as error:
        _LOGGER.error("Picard iteration diverged : %s", error)
        write_report({"status": "diverged", "message": str(error), "ratios": list(error.ratios),
                      "theorem": theorem.as_dict(), "config": config.as_dict()},
                     output_dir / PICARD_REPORT_FILE)
        return EXIT_NONCONVERGENCE

    payload = {
        "status": "converged" if report.converged else "not_converged",
        "config": config.as_dict(),
        "theorem": theorem.as_dict(),
        "picard": report.as_dict(),
    }
    if report.converged:
        fit, bisect, measured = _radius_estimates(trajectory.final, config)
        comparison = compare_to_bound(measured, theorem)
        payload["weak_residual"] = asdict(weak_residual(trajectory, forcing))
        payload["radius"] = {"fit": fit.as_dict() if fit else None, "bisect": bisect.as_dict(),
                             "comparison": comparison.as_dict()}
    write_report(payload, output_dir / PICARD_REPORT_FILE)
    return EXIT_OK if report.converged else EXIT_NONCONVERGENCE


def run_verify(suite, constants, seed=0, output_dir=Path("output"), cases=None, progress=True):
    """
    Runs one or every verification suite, dumping every failing case.

    :param suite: one of SUITES
    :type constants: gevrey_nse.calibration.CalibrationConstants
    :param seed: sweep seed
    :param output_dir: report directory
    :param cases: overrides the semigroup and lemma case counts

    :return: exit code
    :rtype: int

    :raises ConfigurationError: unknown suite
    """
    if suite not in SUITES:
        raise ConfigurationError(f"--suite={suite!r} must be one of {list(SUITES)}")
    output_dir = _output_dir(output_dir)
    reports = {}
    if suite in (SUITE_SEMIGROUP, SUITE_ALL):
        reports[SUITE_SEMIGROUP] = run_semigroup_suite(cases or SEMIGROUP_CASES, seed, progress)
    if suite in (SUITE_APPENDIX, SUITE_ALL):
        reports[SUITE_APPENDIX] = run_appendix_suite(constants, seed, progress=progress)
    if suite in (SUITE_LEMMAS, SUITE_ALL):
        reports[SUITE_LEMMAS] = run_lemma_suite(constants, cases or LEMMA_CASES, seed, progress)

    summary = {}
    failures = []
    for name, cases_run in reports.items():
        failed = [case for case in cases_run if not case.passed]
        summary[name] = {"checks": len(cases_run), "failures": len(failed),
                         "max_ratio": max((case.ratio for case in cases_run), default=0.0)}
        failures.extend({"suite": name, **case.as_dict()} for case in failed)
    write_report({"seed": seed, "constants_version": constants.version, "suites": summary},
                 output_dir / VERIFY_REPORT_FILE)
    if failures:
        write_report(failures, output_dir / VERIFY_FAILURES_FILE)
        _LOGGER.error("%d verification failures, see %s", len(failures), output_dir / VERIFY_FAILURES_FILE)
        return EXIT_VERIFICATION_FAILED
    _LOGGER.info("All %d checks passed", sum(item["checks"] for item in summary.values()))
    return EXIT_OK


def _evolve(config, steps, progress):
    u0 = config.initial_field()
    forcing = config.forcing_schedule()
    return run_etd(u0, forcing, config.dt, steps, config.snapshot_stride, progress=progress)


def run_spectrum(config, progress=True):
    """
    Evolves the configured run over the averaging horizon and fits a power law on the time
    averaged dyadic band spectrum.

    :type config: gevrey_nse.config.RunConfig

    :return: exit code
    :rtype: int
    """
    output_dir = _output_dir(config.output_dir)
    steps = max(1, int(round(config.averaging_horizon / config.dt)))
    try:
        trajectory = _evolve(config, steps, progress)
    except NumericalAbort as error:
        _LOGGER.error("Numerical abort : %s", error)
        return _abort(error, config, output_dir)
    bands = dyadic_spectrum(trajectory, float(trajectory.times[-1]))
    write_spectrum_csv(bands, output_dir / SPECTRUM_MEAN_FILE)
    report = fit_power_law(bands)
    _LOGGER.info("Band spectrum exponent %.4f (rms %.3e)", report.fitted_exponent, report.fit_residual)
    write_report({"config": config.as_dict(), "spectrum": report.as_dict()}, output_dir / SPECTRUM_FIT_FILE)
    return EXIT_OK


def run_radius(config, progress=True):
    """
    Evolves the configured run to its horizon, estimates the radius of the final state with
    both estimators, fits the radius growth law over the kept states and compares the final
    estimate with the theorem lower bound.

    :type config: gevrey_nse.config.RunConfig

    :return: exit code
    :rtype: int
    """
    output_dir = _output_dir(config.output_dir)
    theorem = theorem_quantities(config.initial_field(), config.forcing_schedule(), config.sigma, config.q,
                                 config.theorem, config.horizon, config.constants())
    try:
        trajectory = _evolve(config, config.steps, progress)
    except NumericalAbort as error:
        _LOGGER.error("Numerical abort : %s", error)
        return _abort(error, config, output_dir)
    final = trajectory.final
    fit, bisect, measured = _radius_estimates(final, config)
    if fit is not None:
        write_shell_csv(fit, final.params.kappa0, output_dir / SHELL_FILE)
    comparison = compare_to_bound(measured, theorem)

    times = trajectory.times[1:]
    radii = [estimate_radius_bisect(trajectory.field(index), float(config.sigma), config.radius_budget).lambda_hat
             for index in range(1, len(trajectory))]
    try:
        exponent, prefactor = fit_radius_growth(times, radii)
        growth = {"exponent": exponent, "prefactor": prefactor}
    except EstimationError as error:
        _LOGGER.warning("Radius growth fit unavailable : %s", error)
        growth = None
    write_report({
        "config": config.as_dict(),
        "theorem": theorem.as_dict(),
        "fit": fit.as_dict() if fit else None,
        "bisect": bisect.as_dict(),
        "comparison": comparison.as_dict(),
        "growth": growth,
        "radii": [[float(t), float(radius)] for t, radius in zip(times, radii)],
    }, output_dir / RADIUS_REPORT_FILE)
    return EXIT_OK


def run_calibrate(config, cases=LEMMA_CASES, progress=True):
    """
    Measures the estimate constants on pinned seeds and writes the next constants version.

    :type config: gevrey_nse.config.RunConfig

    :return: exit code
    :rtype: int
    """
    output_dir = _output_dir(config.output_dir)
    constants = calibrate_constants(config.constants(), cases, config.seed, progress)
    save_constants(constants, output_dir / CONSTANTS_FILE)
    return EXIT_OK


def _dispatch(args):
    progress = not args.no_progress
    if args.command == "verify" and args.config is None:
        output_dir = args.out if args.out is not None else Path("output")
        return run_verify(args.suite, load_constants(), args.seed or 0, output_dir, args.cases, progress)

    config = run_config.load_run_config(args.config, args.seed, args.out)
    run_config.init_logging(config.log_level)
    try:
        return _run_command(args, config, progress)
    except SaturationError as error:
        write_report({"status": "gevrey_saturation", "message": str(error), "shell": error.shell,
                      "config": config.as_dict()},
                     _output_dir(config.output_dir) / ABORT_REPORT_FILE)
        raise


def _run_command(args, config, progress):
    if args.command == "simulate":
        return run_simulate(config, progress)
    if args.command == "picard":
        return run_picard(config, progress)
    if args.command == "verify":
        return run_verify(args.suite, config.constants(), config.seed, config.output_dir, args.cases, progress)
    if args.command == "spectrum":
        return run_spectrum(config, progress)
    if args.command == "radius":
        return run_radius(config, progress)
    return run_calibrate(config, args.cases, progress)


def main(argv=None):
    """
    Runs a subcommand and maps failures to exit codes : 1 configuration, 2 numerical abort,
    3 Picard nonconvergence, 4 verification failure.

    :param argv: command line arguments, defaults to sys.argv[1:]

    :rtype: int
    """
    run_config.init_logging()
    try:
        get_thread_count()
        args = _build_parser().parse_args(argv)
        _LOGGER.info("Starting gevrey-nse v%s : %s", VERSION, args.command)
        return_code = _dispatch(args)
    except (ConfigurationError, ArgumentError, DomainError) as error:
        _LOGGER.error("Invalid configuration : %s", error)
        return_code = EXIT_CONFIGURATION
    except (NumericalAbort, SaturationError) as error:
        _LOGGER.error("Numerical abort : %s", error)
        return_code = EXIT_NUMERICAL_ABORT
    except NonConvergenceError as error:
        _LOGGER.error("No convergence : %s", error)
        return_code = EXIT_NONCONVERGENCE
    except EstimationError as error:
        _LOGGER.error("Estimation failed : %s", error)
        return_code = EXIT_VERIFICATION_FAILED
    _LOGGER.info("gevrey-nse terminated with return code = %d", return_code)
    return return_code


if __name__ == "__main__":
    sys.exit(main())
