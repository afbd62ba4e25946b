import argparse

from .. import criteria
from ..export import emit, render_json
from ..harmonic_map import is_sense_preserving_sampled
from ..order import mu_criterion_bound
from ..schemas import RunConfig
from ..utils.error_handlers import EXIT_CHECK_FAILED, EXIT_OK, ConfigError
from .common import add_run_options, load_info, load_map

CRITERIA = ("sense", "shc", "shc_order", "concave", "stable_concave", "nh", "mu_sqrt", "mu", "no_shc")


def _require_lambda(args) -> float:
    if args.lam is None:
        raise ConfigError(f"criterion '{args.criterion}' needs --lam")
    return args.lam


def run(args: argparse.Namespace, config: RunConfig) -> int:
    f = load_map(config)
    info = load_info(config)
    grid, workers, tol = config.grid, config.workers, config.tolerances
    name = args.criterion

    if name == "sense":
        report = is_sense_preserving_sampled(f, grid)
    elif name == "shc":
        report = criteria.shc_check(f, grid, args.lambdas, workers, tol)
    elif name == "shc_order":
        report = criteria.shc_order_bound_check(f, grid, args.lambdas, workers, tol)
    elif name == "concave":
        alpha = args.alpha if args.alpha is not None else info.concave_alpha
        if alpha is None:
            raise ConfigError(f"no concave-family alpha known for {f.label}; pass --alpha")
        report = criteria.concave_family_check(f, alpha, grid, args.lambdas, workers, tol)
    elif name == "stable_concave":
        alpha = args.alpha if args.alpha is not None else info.concave_alpha
        report = criteria.stable_concave_mu_bound(f, grid, alpha, args.lambdas, workers, tol)
    elif name == "nh":
        report = criteria.nh_lambda_check(f, _require_lambda(args), grid, workers, tol)
    elif name == "mu_sqrt":
        report = criteria.mu_sqrt_bound_check(f, _require_lambda(args), grid, info.unbounded, workers, tol)
    elif name == "mu":
        report = mu_criterion_bound(f, grid, workers, tol)
    else:
        report = criteria.no_shc_probe(f, grid, args.lambdas, workers, tol)

    emit(render_json(report.to_dict()), config.out)
    passed = report.applicable if name == "mu" else report.passed
    return EXIT_OK if passed else EXIT_CHECK_FAILED


def register(subparsers) -> None:
    parser = subparsers.add_parser("criteria", help="run a sampled convexity/concavity/NH criterion")
    parser.add_argument("--criterion", choices=CRITERIA, required=True)
    parser.add_argument("--lam", type=float, help="lambda for the nh and mu_sqrt criteria")
    parser.add_argument("--alpha", type=float, help="opening parameter for the concave family")
    parser.add_argument("--lambdas", type=int, default=criteria.DEFAULT_LAMBDA_COUNT,
                        help="number of unit-circle samples for lambda")
    add_run_options(parser)
    parser.set_defaults(handler=run, needs_config=True)
