"""CSV tables written by the experiment driver.

Floats are written with 17 significant digits and read back with
round-trip precision, so reading a table and writing it again gives the
same bytes. Run metadata goes into `# key=value` lines after the rows.
"""
import io
from pathlib import Path
from typing import Optional, Sequence, Union

import numpy as np
import pandas as pd

from ..diagnostics import ConvergenceReport, energy_error_series
from ..geometry import PhaseState
from ..integrators import Trajectory, available_schemes, builtin_scheme
from ..parareal import ComparisonTable
from ..systems import SeparableSystem

FLOAT_FORMAT = "%.17g"
FOOTER_PREFIX = "# "

PathLike = Union[str, Path]


def _format_value(value) -> str:
    if value is None:
        return "none"
    if isinstance(value, (float, np.floating)):
        return FLOAT_FORMAT % value
    return str(value)


def coordinate_columns(dim: int) -> list[str]:
    if dim == 1:
        return ["q", "p"]
    return [f"q{i}" for i in range(dim)] + [f"p{i}" for i in range(dim)]


def write_table(frame: pd.DataFrame, path: PathLike, footer: Optional[dict] = None) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame = frame.copy()
    for column in frame.select_dtypes(include="floating").columns:
        frame[column] = frame[column] + 0.0  # -0.0 -> 0.0
    with open(path, "w", encoding="utf-8", newline="") as handle:
        frame.to_csv(handle, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
        for key, value in (footer or {}).items():
            handle.write(f"{FOOTER_PREFIX}{key}={_format_value(value)}\n")
    return path


def read_table(path: PathLike) -> tuple[pd.DataFrame, dict[str, str]]:
    """The rows as a frame, plus the footer as raw strings."""
    rows, footer = [], {}
    with open(path, encoding="utf-8", newline="") as handle:
        for line in handle:
            if line.startswith(FOOTER_PREFIX):
                key, _, value = line[len(FOOTER_PREFIX):].rstrip("\n").partition("=")
                footer[key] = value
            else:
                rows.append(line)
    frame = pd.read_csv(io.StringIO("".join(rows)), float_precision="round_trip")
    return frame, footer


def trajectory_frame(trajectory: Trajectory, system: SeparableSystem) -> pd.DataFrame:
    times, q, p = trajectory.as_arrays()
    columns = coordinate_columns(q.shape[1])
    frame = pd.DataFrame(np.hstack([q, p]), columns=columns)
    frame.insert(0, "t", times)
    frame["energy_error"] = energy_error_series(trajectory, system).values
    return frame


def nodes_frame(states: Sequence[PhaseState]) -> pd.DataFrame:
    columns = coordinate_columns(states[0].dim)
    frame = pd.DataFrame(np.array([s.vector for s in states]), columns=columns)
    frame.insert(0, "t", [s.t for s in states])
    frame.insert(0, "n", range(len(states)))
    return frame


def defects_frame(report: ConvergenceReport) -> pd.DataFrame:
    return report.to_frame()


def compare_frame(table: ComparisonTable) -> pd.DataFrame:
    records = []
    for row in table.rows:
        if row.error is not None:
            converged_at = f"error:{row.error}"
        elif row.converged_at is None:
            converged_at = ""
        else:
            converged_at = str(row.converged_at)
        records.append({
            "scheme": row.label,
            "converged_at": converged_at,
            "final_defect": row.final_defect,
            "surrogate_length": row.surrogate_length,
        })
    return pd.DataFrame.from_records(
        records, columns=["scheme", "converged_at", "final_defect", "surrogate_length"]
    ).astype({"final_defect": float, "surrogate_length": float})


def order_frame(taus: Sequence[float], errors: Sequence[float]) -> pd.DataFrame:
    return pd.DataFrame({"tau": list(taus), "error": list(errors)})


def schemes_frame() -> pd.DataFrame:
    return pd.DataFrame.from_records([builtin_scheme(name).describe() for name in available_schemes()])
