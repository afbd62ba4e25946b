import argparse

import numpy as np

from ..export import DISTORTION_COLUMNS, distortion_rows, emit, render_csv, render_json
from ..geometry import random_pairs, verify_distortion
from ..schemas import RunConfig
from ..utils.error_handlers import EXIT_CHECK_FAILED, EXIT_OK, ConfigError
from .common import add_run_options, load_info, load_map


def run(args: argparse.Namespace, config: RunConfig) -> int:
    """시드 고정 무작위 쌍 또는 광선 (0, r e^{iθ}) 쌍에서 왜곡 부등식 검증"""
    f = load_map(config)
    alpha = args.alpha
    if alpha is None:
        alpha = load_info(config).upper
        if alpha is None:
            raise ConfigError(f"no known upper order for {f.label}; pass --alpha")

    if args.ray is not None:
        radii = np.linspace(0.05, args.r_max, args.n_pairs)
        pairs = [(0j, complex(r * np.exp(1j * args.ray))) for r in radii]
    else:
        pairs = random_pairs(np.random.default_rng(config.seed), args.n_pairs, args.r_max)

    report = verify_distortion(f, alpha, pairs, tol=config.tolerances)
    if config.format == "csv":
        emit(render_csv(distortion_rows(report), DISTORTION_COLUMNS), config.out)
    else:
        emit(render_json(report.to_dict()), config.out)
    return EXIT_OK if report.passed else EXIT_CHECK_FAILED


def register(subparsers) -> None:
    parser = subparsers.add_parser("distortion", help="verify the hyperbolic distortion bounds")
    parser.add_argument("--alpha", type=float, help="bound for sup|A_f| (default: known upper order)")
    parser.add_argument("--n-pairs", dest="n_pairs", type=int, default=1000)
    parser.add_argument("--r-max", dest="r_max", type=float, default=0.95)
    parser.add_argument("--ray", type=float, help="use pairs (0, r e^{i ray}) instead of random pairs")
    add_run_options(parser)
    parser.set_defaults(handler=run, needs_config=True)
