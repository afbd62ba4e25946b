import argparse
from typing import Any, Dict, List

import numpy as np

from ..analytic_fn import as_disk_points
from ..export import EVAL_COLUMNS, emit, render_csv, render_json
from ..logger import get_logger
from ..operators import operator_fields
from ..schemas import RunConfig
from ..utils.error_handlers import EXIT_OK, EXIT_SINGULARITY, HarmapError
from .common import add_run_options, load_map, parse_point

logger = get_logger("commands.eval")


def evaluate_points(f, points, config: RunConfig) -> List[Dict[str, Any]]:
    """점마다 P_f, A_f, |A_f|, S_f, J_f, ω. 특이점은 오류 행으로 기록."""
    rows = []
    for z in points:
        row: Dict[str, Any] = {"re_z": z.real, "im_z": z.imag}
        try:
            fields = operator_fields(f, z, True, config.tolerances)
        except HarmapError as e:
            logger.warning(f"{f.label}: {e.detail}")
            row["error"] = e.code
            rows.append(row)
            continue
        P, A, S, omega = (complex(v[0]) for v in (fields.P, fields.A, fields.S, fields.omega))
        row.update({
            "re_P": P.real, "im_P": P.imag,
            "re_A": A.real, "im_A": A.imag, "abs_A": abs(A),
            "re_S": S.real, "im_S": S.imag,
            "jacobian": float(fields.J[0]),
            "re_omega": omega.real, "im_omega": omega.imag,
        })
        rows.append(row)
    return rows


def run(args: argparse.Namespace, config: RunConfig) -> int:
    f = load_map(config)
    points = [parse_point(p) for p in args.points]
    # 원판 밖 점은 행 단위 오류가 아닌 사용법 오류
    as_disk_points(np.asarray(points), config.tolerances.boundary_margin)
    rows = evaluate_points(f, points, config)
    if config.format == "csv":
        emit(render_csv(rows, EVAL_COLUMNS), config.out)
    else:
        emit(render_json({"map": f.label, "samples": rows}), config.out)
    return EXIT_SINGULARITY if any("error" in row for row in rows) else EXIT_OK


def register(subparsers) -> None:
    parser = subparsers.add_parser("eval", help="evaluate P_f, A_f, S_f, J_f and omega at points")
    parser.add_argument("points", nargs="+", help="points such as 0.5 or 0.3+0.2j")
    add_run_options(parser)
    parser.set_defaults(handler=run, needs_config=True)
