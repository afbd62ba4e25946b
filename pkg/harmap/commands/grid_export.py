import argparse

from ..export import GRID_COLUMNS, emit, grid_rows, render_csv, render_json
from ..schemas import RunConfig
from ..utils.error_handlers import EXIT_OK
from .common import add_run_options, load_map


def run(args: argparse.Namespace, config: RunConfig) -> int:
    """격자 위 A_f 와 J_f 를 그림용 표로 출력"""
    f = load_map(config)
    rows = grid_rows(f, config.grid)
    if config.format == "json":
        emit(render_json({"map": f.label, "grid": config.grid.model_dump(), "rows": rows}), config.out)
    else:
        emit(render_csv(rows, GRID_COLUMNS), config.out)
    return EXIT_OK


def register(subparsers) -> None:
    parser = subparsers.add_parser("grid-export", help="export |A_f| and J_f over the polar grid")
    add_run_options(parser)
    parser.set_defaults(handler=run, needs_config=True)
