"""Experiment driver.

    python -m src.cli parareal --config experiments/spin_orbit.cfg --out results --threads 8

Exit status 0 on success (a run that does not converge is still a
success), 2 for configuration or usage errors, 3 for numerical failures.
"""
import argparse
import logging
import sys
from pathlib import Path

from ..diagnostics import SURROGATE_LABEL, convergence_report
from ..errors import (
    ArgumentError,
    CatalogError,
    ConfigurationError,
    EvaluationError,
    NumericalOverflowError,
    ParameterError,
    SchemeError,
    StateError,
)
from ..integrators import builtin_scheme, convergence_errors, fit_slope, integrate
from ..parareal import PropagatorPair, compare_coarse_choices, run, sequential_fine_solution
from . import tables
from .config import MATCHED, ExperimentConfig, load_config

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERICAL = 3

USAGE_ERRORS = (ConfigurationError, CatalogError, ArgumentError, SchemeError, ParameterError, StateError)
NUMERICAL_ERRORS = (NumericalOverflowError, EvaluationError)


def _output_path(config: ExperimentConfig, args: argparse.Namespace, suffix: str) -> Path:
    stem = config.output or args.command
    return Path(args.out) / f"{stem}_{suffix}.csv"


def cmd_integrate(config: ExperimentConfig, args: argparse.Namespace) -> int:
    config.require("scheme", "dt", "n_steps")
    system = config.build_system()
    scheme = builtin_scheme(config.scheme)
    trajectory = integrate(scheme, system, config.initial_state(), config.dt, config.n_steps)
    path = tables.write_table(
        tables.trajectory_frame(trajectory, system),
        _output_path(config, args, "trajectory"),
    )
    logger.info("wrote %d states to %s", len(trajectory), path)
    return EXIT_OK


def _propagator_pair(config: ExperimentConfig, grid) -> PropagatorPair:
    fine = builtin_scheme(config.fine)
    coarse = config.coarse or MATCHED
    if coarse == MATCHED:
        return PropagatorPair.matched(fine, grid, coarse_substeps=config.coarse_substeps)
    return PropagatorPair(
        fine_scheme=fine,
        coarse_scheme=builtin_scheme(coarse),
        coarse_substeps=config.coarse_substeps,
    )


def cmd_parareal(config: ExperimentConfig, args: argparse.Namespace) -> int:
    config.require("fine")
    system = config.build_system()
    grid = config.build_grid()
    y0 = config.initial_state()
    pair = _propagator_pair(config, grid)

    result = run(
        pair, system, y0, grid,
        corrector=config.corrector,
        tol=config.tol,
        k_max=config.k_max,
        threads=args.threads,
        show_progress=config.show_progress,
        exploit_exactness=config.exploit_exactness,
    )
    report = convergence_report(result, system)
    reference = sequential_fine_solution(pair, system, y0, grid)
    max_error = max(a.distance(b) for a, b in zip(result.final.node_states, reference))

    tables.write_table(
        tables.defects_frame(report),
        _output_path(config, args, "defects"),
        footer={
            "converged_at": result.converged_at,
            "converged_by": result.converged_by,
            SURROGATE_LABEL: report.surrogate_length,
        },
    )
    tables.write_table(
        tables.nodes_frame(result.final.node_states),
        _output_path(config, args, "nodes"),
        footer={"max_error_vs_fine": max_error},
    )
    logger.info("parareal finished: converged_at=%s, max error vs fine %.3e", result.converged_at, max_error)
    return EXIT_OK


def cmd_compare(config: ExperimentConfig, args: argparse.Namespace) -> int:
    config.require("fine")
    system = config.build_system()
    grid = config.build_grid()
    fine = builtin_scheme(config.fine)
    candidates = [config.coarse_choice(name, fine, grid) for name in config.candidates]
    table = compare_coarse_choices(
        fine, candidates, system, config.initial_state(), grid,
        tol=config.tol,
        k_max=config.k_max,
        corrector=config.corrector,
        coarse_substeps=config.coarse_substeps,
        threads=args.threads,
        show_progress=config.show_progress,
    )
    tables.write_table(tables.compare_frame(table), _output_path(config, args, "compare"))
    return EXIT_OK


def cmd_order(config: ExperimentConfig, args: argparse.Namespace) -> int:
    config.require("scheme", "taus")
    system = config.build_system()
    scheme = builtin_scheme(config.scheme)
    t_end = config.order_t_end or config.t_end or 1.0
    taus, errors = convergence_errors(scheme, system, config.initial_state(), t_end, config.taus)
    slope = fit_slope(taus, errors)
    tables.write_table(
        tables.order_frame(taus, errors),
        _output_path(config, args, "order"),
        footer={"slope": slope},
    )
    logger.info("%s: empirical order %.3f", scheme.name, slope)
    return EXIT_OK


def cmd_schemes(args: argparse.Namespace) -> int:
    tables.schemes_frame().to_csv(sys.stdout, index=False, lineterminator="\n")
    return EXIT_OK


COMMANDS = {
    "integrate": (cmd_integrate, "integrate one trajectory with a splitting scheme"),
    "parareal": (cmd_parareal, "run the parareal iteration"),
    "compare": (cmd_compare, "compare coarse scheme choices for parareal"),
    "order": (cmd_order, "estimate the empirical order of a scheme"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="python -m src.cli",
        description="Symplectic splitting integrators and time-parallel parareal experiments",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--log-level", default="WARNING",
                        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
                        help="logging level for diagnostics on stderr (default: WARNING)")

    subparsers = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        sub = subparsers.add_parser(name, help=help_text, parents=[common])
        sub.add_argument("--config", required=True, help="experiment config file")
        sub.add_argument("--out", default=".", help="output directory (default: current directory)")
        sub.add_argument("--threads", type=int, default=1,
                         help="concurrent fine propagations per parareal iteration (default: 1)")
    subparsers.add_parser("schemes", help="list the builtin schemes as CSV", parents=[common])
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=args.log_level,
        format="%(asctime)s - %(levelname)s - %(message)s",
        stream=sys.stderr,
        force=True,
    )
    try:
        if args.command == "schemes":
            return cmd_schemes(args)
        config = load_config(args.config)
        command, _ = COMMANDS[args.command]
        return command(config, args)
    except USAGE_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NUMERICAL_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
