"""
Matrix files and report documents.

Matrix files
    CSV: one matrix row per line, comma-separated decimals, no header.
    JSON: ``{"rows": m, "cols": n, "data": [row-major values]}``.
    Values are written with 17 significant digits, enough to round-trip
    any double exactly.

Report documents
    JSON objects with ``schema_version``, an ``invocation`` echo, a list of
    ``records`` and a ``summary``.  Non-finite numbers are written as the
    strings ``"Infinity"``, ``"-Infinity"`` and ``"NaN"`` so the output is
    strict JSON; :meth:`ReportDocument.from_json` maps them back.  The JSON
    schema ships as ``report.schema.json`` next to this module.
"""

import csv
import io
import json
import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from .matrix_core import as_dense

SCHEMA_VERSION = "1.0"
_NONFINITE = {"Infinity": math.inf, "-Infinity": -math.inf, "NaN": math.nan}


class MatrixFileError(ValueError):
    pass


def _fmt(x):
    return format(float(x), ".17g")


def load_matrix(path, fmt=None):
    """Read a matrix file; the format defaults to the file suffix."""
    path = Path(path)
    fmt = fmt or path.suffix.lstrip(".").lower()
    try:
        text = path.read_text()
    except OSError as exc:
        raise MatrixFileError(f"{path}: cannot read ({exc.strerror})") from exc
    try:
        if fmt == "csv":
            rows = [r for r in csv.reader(io.StringIO(text)) if any(c.strip() for c in r)]
            if not rows:
                raise MatrixFileError(f"{path}: empty matrix file")
            widths = {len(r) for r in rows}
            if len(widths) != 1:
                raise MatrixFileError(f"{path}: rows have different lengths {sorted(widths)}")
            data = np.array([[float(c) for c in r] for r in rows])
        elif fmt == "json":
            obj = json.loads(text)
            rows, cols, flat = int(obj["rows"]), int(obj["cols"]), obj["data"]
            if len(flat) != rows * cols:
                raise MatrixFileError(
                    f"{path}: data has {len(flat)} entries, expected rows*cols = {rows * cols}")
            data = np.array(flat, dtype=float).reshape(rows, cols)
        else:
            raise MatrixFileError(f"{path}: unknown matrix format {fmt!r} (use csv or json)")
    except (ValueError, KeyError, TypeError) as exc:
        if isinstance(exc, MatrixFileError):
            raise
        raise MatrixFileError(f"{path}: cannot parse {fmt} matrix ({exc})") from exc
    try:
        return as_dense(data)
    except ValueError as exc:
        raise MatrixFileError(f"{path}: {exc}") from exc


def save_matrix(path, a, fmt=None):
    path = Path(path)
    fmt = fmt or path.suffix.lstrip(".").lower()
    a = as_dense(a)
    if fmt == "csv":
        path.write_text("".join(",".join(_fmt(x) for x in row) + "\n" for row in a))
    elif fmt == "json":
        obj = {"rows": a.shape[0], "cols": a.shape[1], "data": [float(x) for x in a.reshape(-1)]}
        path.write_text(json.dumps(obj) + "\n")
    else:
        raise MatrixFileError(f"unknown matrix format {fmt!r} (use csv or json)")
    return path


def check_to_dict(check):
    return {
        "observed": check.observed,
        "bound": check.bound,
        "holds": check.holds,
        "ratio": check.ratio,
        "note": check.note,
    }


def report_to_dict(report):
    gap = report.gap
    return {
        "mode": report.mode,
        "r": int(report.sel.r),
        "s": int(report.sel.s),
        "d": int(report.sel.d),
        "dim": int(report.dim),
        "gap": None if gap is None else {
            "upper": gap.upper_gap,
            "lower": gap.lower_gap,
            "population": gap.population_gap,
            "classical_delta": gap.classical_delta,
        },
        "diff_op_norm": report.diff_op_norm,
        "diff_frob_norm": report.diff_frob_norm,
        "numerator_term": report.numerator_term,
        "degenerate_full_block": report.degenerate_full_block,
        "notes": list(report.notes),
        "checks": {name: check_to_dict(c) for name, c in report.checks.items()},
    }


def _encode(obj):
    if isinstance(obj, dict):
        return {str(k): _encode(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_encode(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isnan(x):
            return "NaN"
        if math.isinf(x):
            return "Infinity" if x > 0 else "-Infinity"
        return x
    return obj


def _decode(obj):
    if isinstance(obj, dict):
        return {k: _decode(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_decode(v) for v in obj]
    if isinstance(obj, str) and obj in _NONFINITE:
        return _NONFINITE[obj]
    return obj


@dataclass
class ReportDocument:
    command: str
    flags: dict
    seed: int | None = None
    records: list = field(default_factory=list)
    summary: dict = field(default_factory=dict)
    schema_version: str = SCHEMA_VERSION

    def to_dict(self):
        return _encode({
            "schema_version": self.schema_version,
            "invocation": {"command": self.command, "flags": self.flags, "seed": self.seed},
            "records": self.records,
            "summary": self.summary,
        })

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, allow_nan=False) + "\n"

    @classmethod
    def from_json(cls, text):
        obj = _decode(json.loads(text))
        inv = obj["invocation"]
        return cls(command=inv["command"], flags=inv["flags"], seed=inv["seed"],
                   records=obj["records"], summary=obj["summary"],
                   schema_version=obj["schema_version"])

    def to_csv(self):
        """Long-format CSV.

        Records carrying bound checks give one row per check; flat records
        (sharpness tables) give one row each with the union of their keys.
        """
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        rows = list(_csv_rows(self.records))
        if rows and "check" in rows[0]:
            cols = ["trial_index", "mode", "r", "s", "check", "observed", "bound", "holds", "ratio", "note"]
        else:
            cols = []
            for row in rows:
                cols.extend(k for k in row if k not in cols)
        writer.writerow(cols)
        for row in rows:
            writer.writerow([_csv_cell(row.get(c)) for c in cols])
        return buf.getvalue()

    def write(self, out=None, fmt="json"):
        text = self.to_json() if fmt == "json" else self.to_csv()
        if out is None:
            return text
        Path(out).write_text(text)
        return text


def _csv_cell(x):
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return _fmt(x)
    return x


def _csv_rows(records):
    for rec in records:
        if "reports" in rec:
            for mode, rep in rec["reports"].items():
                yield from _check_rows(rec.get("trial_index"), rep)
        elif "checks" in rec:
            yield from _check_rows(rec.get("trial_index"), rec)
        else:
            yield {k: v for k, v in rec.items() if not isinstance(v, (dict, list))}


def _check_rows(trial_index, rep):
    for name, c in rep.get("checks", {}).items():
        yield {"trial_index": trial_index, "mode": rep["mode"], "r": rep["r"], "s": rep["s"],
               "check": name, **c}
    if not rep.get("checks") and rep.get("inapplicable"):
        yield {"trial_index": trial_index, "mode": rep["mode"], "r": rep["r"], "s": rep["s"],
               "check": "all", "note": rep["inapplicable"]}


def load_schema():
    return json.loads(resources.files("spectral_perturb").joinpath("report.schema.json").read_text())
