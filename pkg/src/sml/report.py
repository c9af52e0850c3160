"""Check records, reports and their deterministic serialization."""

from __future__ import annotations

import csv
import io
import json
import math
import os
import tempfile
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

SCHEMA_VERSION = 1
SIG_DIGITS = 15


def clean(obj):
    """Convert to JSON-ready builtins; floats rounded to 15 significant digits."""
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isnan(x) or math.isinf(x):
            return str(x)
        return float(f"{x:.{SIG_DIGITS}g}") + 0.0   # fold -0.0
    if isinstance(obj, (complex, np.complexfloating)):
        return [clean(obj.real), clean(obj.imag)]
    if isinstance(obj, Fraction):
        return int(obj) if obj.denominator == 1 else str(obj)
    if isinstance(obj, dict):
        return {str(k): clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return clean(obj.tolist())
    return obj


def dumps(obj, **kwargs) -> str:
    return json.dumps(clean(obj), sort_keys=True, indent=2, **kwargs) + "\n"


@dataclass
class Check:
    name: str
    params: dict
    residual: float
    tolerance: float
    passed: bool
    wall_time: float = 0.0

    def as_dict(self, timings: bool) -> dict:
        out = {
            "name": self.name,
            "params": self.params,
            "residual": self.residual,
            "tolerance": self.tolerance,
            "pass": self.passed,
        }
        if timings:
            out["wall_time"] = self.wall_time
        return out


@dataclass
class Report:
    suite: str
    config: dict = field(default_factory=dict)
    checks: list = field(default_factory=list)
    notes: dict = field(default_factory=dict)
    _clock: float = field(default_factory=time.perf_counter, repr=False)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def start(self) -> None:
        self._clock = time.perf_counter()

    def record(self, name: str, residual, tolerance, params: dict | None = None) -> Check:
        """Append a check; it passes when ``residual < tolerance`` (or both are zero)."""
        now = time.perf_counter()
        residual = float(residual)
        tolerance = float(tolerance)
        ok = bool(residual < tolerance or (residual == 0.0 and tolerance == 0.0))
        chk = Check(name, dict(params or {}), residual, tolerance, ok, now - self._clock)
        self._clock = now
        self.checks.append(chk)
        return chk

    def flag(self, name: str, ok: bool, params: dict | None = None) -> Check:
        """Boolean check: residual 0 when ``ok``, else 1, against tolerance 0."""
        return self.record(name, 0.0 if ok else 1.0, 0.0, params)

    def merge(self, other: "Report") -> None:
        self.checks.extend(other.checks)
        self.notes.update(other.notes)

    def as_dict(self, timings: bool = False) -> dict:
        return {
            "schema": SCHEMA_VERSION,
            "suite": self.suite,
            "config": self.config,
            "pass": self.passed,
            "checks": [c.as_dict(timings) for c in self.checks],
            "notes": self.notes,
        }

    def to_json(self, timings: bool = False) -> str:
        return dumps(self.as_dict(timings))

    def to_csv(self, timings: bool = False) -> str:
        buf = io.StringIO()
        cols = ["name", "params", "residual", "tolerance", "pass"] + (["wall_time"] if timings else [])
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(cols)
        for c in self.checks:
            d = clean(c.as_dict(timings))
            d["params"] = json.dumps(d["params"], sort_keys=True)
            w.writerow([d[k] for k in cols])
        return buf.getvalue()


def write_atomic(path: str | os.PathLike, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
