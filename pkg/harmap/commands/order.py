import argparse

from ..export import emit, render_csv, render_json
from ..order import estimate_order
from ..schemas import RunConfig
from ..utils.error_handlers import EXIT_OK
from .common import add_run_options, load_map


def run(args: argparse.Namespace, config: RunConfig) -> int:
    """하위/상위 차수 추정. CSV 형식은 광선별 경계 외삽값."""
    f = load_map(config)
    estimate = estimate_order(f, config.grid, args.kind, config.workers, config.tolerances)
    if config.format == "csv":
        rows = [{"theta": theta, "limit": limit} for theta, limit in estimate.boundary_rays]
        emit(render_csv(rows, ["theta", "limit"]), config.out)
    else:
        emit(render_json(estimate.to_dict()), config.out)
    return EXIT_OK


def register(subparsers) -> None:
    parser = subparsers.add_parser("order", help="estimate the lower or upper order of a map")
    parser.add_argument("--kind", choices=["lower", "upper"], default="lower")
    add_run_options(parser)
    parser.set_defaults(handler=run, needs_config=True)
