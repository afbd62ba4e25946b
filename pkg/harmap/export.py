"""
CSV/JSON 출력. 실수는 repr 로 써서 왕복 정밀도를 유지한다.
"""
import csv
import io
import json
import sys
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence

import numpy as np

from .geometry import DistortionReport, Trajectory, trajectory_drift, trajectory_levels
from .harmonic_map import HarmonicMap
from .operators import operator_fields
from .schemas import GridSpec

GRID_COLUMNS = ["r", "theta", "re_z", "im_z", "abs_A", "re_A", "im_A", "jacobian"]
TRAJECTORY_COLUMNS = ["t", "re_z", "im_z", "level", "drift"]
DISTORTION_COLUMNS = [
    "re_z0", "im_z0", "re_z1", "im_z1", "ratio", "lo", "hi", "pass", "left_equality", "right_equality",
]
EVAL_COLUMNS = [
    "re_z", "im_z", "re_P", "im_P", "re_A", "im_A", "abs_A",
    "re_S", "im_S", "jacobian", "re_omega", "im_omega", "error",
]


def format_value(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return str(value)


def render_csv(rows: Iterable[Dict[str, Any]], columns: Sequence[str]) -> str:
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=list(columns), lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({key: format_value(row.get(key)) for key in columns})
    return buffer.getvalue()


def _jsonable(value: Any) -> Any:
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, (np.floating,)):
        return float(value)
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.bool_,)):
        return bool(value)
    if isinstance(value, complex):
        return [value.real, value.imag]
    return value


def render_json(data: Any) -> str:
    return json.dumps(_jsonable(data), indent=2, sort_keys=True) + "\n"


def emit(text: str, out: Optional[str] = None) -> None:
    """파일 또는 stdout 으로 출력"""
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def grid_rows(f: HarmonicMap, grid: GridSpec) -> List[Dict[str, Any]]:
    r, theta, z = grid.points()
    fields = operator_fields(f, z, False)
    return [
        {
            "r": float(r[k]), "theta": float(theta[k]),
            "re_z": float(z[k].real), "im_z": float(z[k].imag),
            "abs_A": float(abs(fields.A[k])),
            "re_A": float(fields.A[k].real), "im_A": float(fields.A[k].imag),
            "jacobian": float(fields.J[k]),
        }
        for k in range(z.size)
    ]


def trajectory_rows(f: HarmonicMap, traj: Trajectory) -> List[Dict[str, Any]]:
    levels = trajectory_levels(f, traj)
    drift = trajectory_drift(f, traj)
    return [
        {"t": t, "re_z": z.real, "im_z": z.imag, "level": float(levels[k]), "drift": float(drift[k])}
        for k, (t, z) in enumerate(traj.states)
    ]


def distortion_rows(report: DistortionReport) -> List[Dict[str, Any]]:
    return [
        {
            "re_z0": p.z0.real, "im_z0": p.z0.imag,
            "re_z1": p.z1.real, "im_z1": p.z1.imag,
            "ratio": p.ratio, "lo": p.lo, "hi": p.hi, "pass": p.passed,
            "left_equality": p.left_equality, "right_equality": p.right_equality,
        }
        for p in report.pairs
    ]
