"""Machine-readable reports: residual sweeps as deterministic JSON, data
series as CSV with a one-line header."""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field, asdict

import numpy as np

__all__ = ["Discrepancy", "ResidualReport", "sweep", "dumps", "write_json", "write_csv"]


@dataclass(frozen=True)
class Discrepancy:
    """One printed-vs-derived mismatch surfaced by an oracle."""

    name: str
    paper_value: str
    derived_value: str


@dataclass
class ResidualReport:
    equation: str
    family: dict
    grid: str
    max_abs: float
    rms: float
    worst_point: list
    mode: str
    discrepancies: list = field(default_factory=list)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["discrepancies"] = sorted(d["discrepancies"], key=lambda e: e["name"])
        return d


def sweep(fn, points):
    """Evaluate |fn(point)| over points; returns (max_abs, rms, worst_point).

    ``points`` is an iterable of coordinate tuples; fn is called with the
    tuple unpacked.
    """
    worst = -1.0
    worst_at = None
    total = 0.0
    count = 0
    for pt in points:
        r = abs(fn(*pt))
        total += r * r
        count += 1
        if r > worst:
            worst = r
            worst_at = [float(c) for c in pt]
    if count == 0:
        raise ValueError("empty sweep")
    return float(worst), math.sqrt(total / count), worst_at


def _default(o):
    if isinstance(o, (np.floating, np.integer)):
        return o.item()
    if isinstance(o, np.ndarray):
        return o.tolist()
    raise TypeError(f"not JSON-serializable: {type(o)}")


def dumps(obj) -> str:
    """Deterministic JSON: sorted keys, fixed separators, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2, default=_default) + "\n"


def write_json(path, obj):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dumps(obj))


def write_csv(path, header, rows):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([repr(float(c)) if isinstance(c, (float, np.floating))
                             else c for c in row])
