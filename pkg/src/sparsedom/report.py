"""Check reports: per-sample LHS/RHS pairs, empirical constant, pass/fail."""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

__all__ = ["CheckReport", "ratios"]


def ratios(lhs: np.ndarray, rhs: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    """lhs/rhs with 0/0 -> 0 and (lhs > tol)/0 -> inf."""
    lhs = np.asarray(lhs, float)
    rhs = np.asarray(rhs, float)
    with np.errstate(divide="ignore", invalid="ignore"):
        r = np.where(rhs > 0, lhs / np.where(rhs > 0, rhs, 1.0), np.where(lhs > tol, np.inf, 0.0))
    return r


@dataclass
class CheckReport:
    """Outcome of one inequality check.

    ``constant`` is the empirical constant (max LHS/RHS unless a fitted value
    is supplied); the check passes iff it is finite and at most ``bound``.
    """

    name: str
    lhs: np.ndarray
    rhs: np.ndarray
    params: Mapping[str, np.ndarray] = field(default_factory=dict)
    bound: float = math.inf
    constant: float | None = None
    hard: bool = True
    notes: str = ""
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        self.lhs = np.atleast_1d(np.asarray(self.lhs, float))
        self.rhs = np.atleast_1d(np.asarray(self.rhs, float))
        if self.lhs.shape != self.rhs.shape:
            raise ValueError("lhs and rhs sample arrays differ in shape")
        self.params = {k: np.atleast_1d(np.asarray(v)) for k, v in self.params.items()}
        if self.constant is None:
            r = self.ratio
            self.constant = float(r.max()) if r.size else 0.0

    @property
    def ratio(self) -> np.ndarray:
        return ratios(self.lhs, self.rhs)

    @property
    def passed(self) -> bool:
        c = self.constant
        return bool(np.isfinite(c) and c <= self.bound)

    @property
    def witness(self) -> dict:
        if self.lhs.size == 0:
            return {}
        k = int(np.argmax(self.ratio))
        out = {"sample": k, "lhs": float(self.lhs[k]), "rhs": float(self.rhs[k])}
        for key, col in self.params.items():
            if col.size == self.lhs.size:
                out[key] = col[k].item()
        return out

    def summary(self) -> dict:
        return {
            "check": self.name,
            "constant": self.constant,
            "bound": self.bound,
            "passed": self.passed,
            "hard": self.hard,
            "samples": int(self.lhs.size),
        }

    def to_csv(self, path) -> None:
        """Columns: sample, <params in insertion order>, lhs, rhs, ratio."""
        keys = [k for k, v in self.params.items() if v.size == self.lhs.size]
        r = self.ratio
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["sample", *keys, "lhs", "rhs", "ratio"])
            for i in range(self.lhs.size):
                row = [i]
                for k in keys:
                    row.append(_fmt(self.params[k][i]))
                row += [_fmt(self.lhs[i]), _fmt(self.rhs[i]), _fmt(r[i])]
                w.writerow(row)


def _fmt(x) -> str:
    if isinstance(x, (np.floating, float)):
        return repr(float(x))
    if isinstance(x, np.generic):
        return str(x.item())
    return str(x)
