"""Verification reports and their JSON / CSV serialisations."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Sequence

import numpy as np

from ..io import atomic_write_bytes
from .ratios import RatioTrial

__all__ = ["REPORT_VERSION", "SlopeFit", "fit_loglog_slope", "VerificationReport", "empirical_constant"]

REPORT_VERSION = 1
CSV_COLUMNS = ("trial", "lhs", "rhs_scale", "rhs_norm", "ratio")


@dataclass(frozen=True)
class SlopeFit:
    slope: float
    intercept: float
    residual: float  # root mean square, in log2 units


def fit_loglog_slope(x: Sequence[float], y: Sequence[float]) -> SlopeFit:
    """Least-squares line through ``(log2 x, log2 y)``."""
    lx = np.log2(np.asarray(x, dtype=float))
    ly = np.log2(np.asarray(y, dtype=float))
    if lx.size < 2:
        raise ValueError("need at least two points for a slope")
    design = np.stack([lx, np.ones_like(lx)], axis=1)
    coef, *_ = np.linalg.lstsq(design, ly, rcond=None)
    resid = ly - design @ coef
    return SlopeFit(float(coef[0]), float(coef[1]), float(np.sqrt(np.mean(resid**2))))


def empirical_constant(trials: Sequence[RatioTrial]) -> float:
    """Max ratio over non-skipped trials (nan if every trial was skipped)."""
    vals = [t.ratio for t in trials if t.ok]
    return max(vals) if vals else math.nan


def _num(x):
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, (tuple, list)):
        return [_num(v) for v in x]
    if isinstance(x, dict):
        return {k: _num(v) for k, v in x.items()}
    return x


def _fmt(x) -> str:
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    return str(x)


@dataclass
class VerificationReport:
    name: str
    config: dict
    trials: list[RatioTrial] = field(default_factory=list)
    fit: SlopeFit | None = None
    predicted_slope: float | None = None
    slope_tol: float | None = None
    checks: dict = field(default_factory=dict)  # name -> bool
    details: dict = field(default_factory=dict)
    families: dict = field(default_factory=dict)  # sub-reports for "all"

    @property
    def c_emp(self) -> float:
        return empirical_constant(self.trials)

    @property
    def skipped(self) -> int:
        return sum(1 for t in self.trials if not t.ok)

    @property
    def verdict(self) -> bool:
        if self.families:
            return all(sub.verdict for sub in self.families.values()) and all(self.checks.values())
        c = self.c_emp
        if self.trials and not math.isfinite(c):
            return False
        if self.fit is not None and self.predicted_slope is not None:
            if abs(self.fit.slope - self.predicted_slope) > self.slope_tol:
                return False
        return all(self.checks.values())

    def to_dict(self, timestamp: bool = True) -> dict:
        out = {
            "report_version": REPORT_VERSION,
            "name": self.name,
            "constants": "torus-empirical",
            "config": _num(self.config),
            "trials": len(self.trials),
            "skipped": self.skipped,
            "c_emp": _num(self.c_emp),
            "checks": self.checks,
            "details": _num(self.details),
            "verdict": "pass" if self.verdict else "fail",
        }
        if timestamp:
            out = {"generated_at": datetime.now(timezone.utc).isoformat(timespec="seconds"), **out}
        if self.fit is not None:
            out["fit"] = _num(
                {
                    "slope": self.fit.slope,
                    "intercept": self.fit.intercept,
                    "residual": self.fit.residual,
                    "predicted": self.predicted_slope,
                    "tolerance": self.slope_tol,
                }
            )
        if self.families:
            out["families"] = {k: v.to_dict(timestamp=False) for k, v in self.families.items()}
        return out

    def to_json(self, timestamp: bool = True) -> str:
        return json.dumps(self.to_dict(timestamp), indent=2, sort_keys=False) + "\n"

    def csv_rows(self) -> tuple[list[str], list[list[str]]]:
        trials = list(self.trials)
        for name, sub in self.families.items():
            trials.extend(sub.trials)
        extra_cols: list[str] = []
        for t in trials:
            for k in t.extra:
                if k not in extra_cols:
                    extra_cols.append(k)
        header = list(CSV_COLUMNS) + extra_cols
        if self.families:
            header = ["family"] + header
        rows = []

        def add(t: RatioTrial, fam: str | None):
            row = [str(t.trial), _fmt(t.lhs), _fmt(t.rhs_scale), _fmt(t.rhs_norm), _fmt(t.ratio)]
            for k in extra_cols:
                v = t.extra.get(k, "")
                row.append(" ".join(_fmt(x) for x in v) if isinstance(v, (tuple, list)) else _fmt(v))
            rows.append(([fam] if fam is not None else []) + row)

        if self.families:
            for name, sub in self.families.items():
                for t in sub.trials:
                    add(t, name)
        else:
            for t in self.trials:
                add(t, None)
        return header, rows

    def to_csv(self) -> str:
        header, rows = self.csv_rows()
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
        return buf.getvalue()

    def write(self, json_path=None, csv_path=None) -> None:
        if json_path is not None:
            atomic_write_bytes(json_path, self.to_json().encode())
        if csv_path is not None:
            atomic_write_bytes(csv_path, self.to_csv().encode())
