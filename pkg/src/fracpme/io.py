"""CSV/JSON serialization and the flat key-value table spec format.

Floats are written with 17 significant digits, which round-trips every
IEEE double exactly.
"""

from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .analysis import OrderReport
from .reconstruct import PhysicalProfile
from .solver import DiscreteSolution

REPORT_FIELDS = (
    "alpha",
    "m",
    "N_base",
    "evaluation_point",
    "empirical_order",
    "theoretical_order_computed",
    "theoretical_order_paper",
    "runtime_seconds",
)


class SpecError(ValueError):
    pass


def fmt(v) -> str:
    if isinstance(v, str):
        return v
    if isinstance(v, (int, np.integer)) and not isinstance(v, bool):
        return str(int(v))
    return format(float(v), ".17g")


def _csv_text(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([fmt(v) for v in r])
    return buf.getvalue()


def _json_float(v):
    # JSON has no NaN; null marks a missing value
    if isinstance(v, float) and not math.isfinite(v):
        return None
    return v


def solution_text(sol: DiscreteSolution, fmt_: str = "csv") -> str:
    if fmt_ == "csv":
        return _csv_text(("z", "y"), zip(sol.z, sol.values))
    doc = {
        "alpha": sol.params.alpha,
        "m": sol.params.m,
        "N": sol.grid.N,
        "rule_name": sol.rule_name,
        "starting_value_used": sol.starting_value_used,
        "z": [float(v) for v in sol.z],
        "y": [float(v) for v in sol.values],
    }
    return json.dumps(doc, indent=1) + "\n"


def read_solution_csv(path) -> tuple[np.ndarray, np.ndarray]:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or rows[0] != ["z", "y"]:
        raise ValueError(f"{path}: expected header 'z,y'")
    data = np.array([[float(a), float(b)] for a, b in rows[1:]])
    return data[:, 0], data[:, 1]


def profile_text(prof: PhysicalProfile) -> str:
    return _csv_text(("z", "y", "eta", "U"), zip(prof.z, prof.y_values, prof.eta_nodes, prof.U_values))


def u_samples_text(samples: Iterable[tuple[float, float, float]]) -> str:
    return _csv_text(("x", "t", "u"), samples)


def report_record(r: OrderReport) -> dict:
    rec = r.as_record()
    if r.error is not None:
        rec["error"] = r.error
    return rec


def reports_text(reports: Sequence[OrderReport], fmt_: str = "csv") -> str:
    if fmt_ == "csv":
        return _csv_text(REPORT_FIELDS, ([r.as_record()[k] for k in REPORT_FIELDS] for r in reports))
    recs = [{k: _json_float(v) for k, v in report_record(r).items()} for r in reports]
    return json.dumps(recs, indent=1) + "\n"


def report_json(r: OrderReport) -> str:
    return json.dumps({k: _json_float(v) for k, v in report_record(r).items()}, indent=1) + "\n"


def parse_spec(text: str) -> dict:
    """Parse ``key = value`` lines; ``cell = alpha,m`` may repeat.

    Recognised keys: ``cell``, ``n_base``, ``x``, ``point``, ``start``, ``threads``.
    ``#`` starts a comment.
    """
    out: dict = {"cells": []}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise SpecError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, val = (s.strip() for s in line.split("=", 1))
        try:
            if key == "cell":
                a, m = val.split(",")
                out["cells"].append((float(a), float(m)))
            elif key == "n_base":
                out["n_base"] = int(val)
            elif key == "x":
                out["x"] = float(val)
            elif key == "threads":
                out["threads"] = int(val)
            elif key == "point":
                out["point"] = val if val == "max" else float(val)
            elif key == "start":
                out["start"] = val
            else:
                raise SpecError(f"line {lineno}: unknown key {key!r}")
        except SpecError:
            raise
        except ValueError as exc:
            raise SpecError(f"line {lineno}: bad value for {key!r}: {val!r}") from exc
    return out


def write_text(path, text: str) -> None:
    Path(path).write_text(text, newline="\n")
