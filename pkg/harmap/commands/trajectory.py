import argparse

from ..export import TRAJECTORY_COLUMNS, emit, render_csv, render_json, trajectory_rows
from ..geometry import bloch_growth_probe, check_level_consistency, integrate_trajectory, verify_growth_bound
from ..logger import get_logger
from ..schemas import RunConfig
from ..utils.error_handlers import EXIT_CHECK_FAILED, EXIT_OK
from .common import add_run_options, load_map, parse_point

logger = get_logger("commands.trajectory")

# 허용 수준 표류 = DRIFT_FACTOR * tol
DRIFT_FACTOR = 100.0


def run(args: argparse.Namespace, config: RunConfig) -> int:
    f = load_map(config)
    z0 = parse_point(args.z0)
    traj = integrate_trajectory(f, z0, args.t_end, config.ode_tol, config.tolerances)
    drift = check_level_consistency(f, traj)
    passed = drift <= DRIFT_FACTOR * config.ode_tol

    growth = None
    if args.mu is not None:
        growth = verify_growth_bound(f, traj, args.mu)
        passed = passed and growth.passed

    if config.format == "csv":
        emit(render_csv(trajectory_rows(f, traj), TRAJECTORY_COLUMNS), config.out)
    else:
        data = traj.to_dict()
        data["max_drift"] = drift
        data["probe"] = bloch_growth_probe(f, traj)
        if growth is not None:
            data["growth"] = growth.to_dict()
        emit(render_json(data), config.out)

    if not passed:
        logger.warning(f"{f.label}: trajectory checks failed (drift {drift:.3e})")
    return EXIT_OK if passed else EXIT_CHECK_FAILED


def register(subparsers) -> None:
    parser = subparsers.add_parser("trajectory", help="integrate the trajectory through a point")
    parser.add_argument("--z0", required=True, help="start point, e.g. 0.3 or 0.1+0.2j")
    parser.add_argument("--t-end", dest="t_end", type=float, required=True, help="final level value")
    parser.add_argument("--mu", type=float, help="check the growth bound with this lower-order bound")
    add_run_options(parser)
    parser.set_defaults(handler=run, needs_config=True)
