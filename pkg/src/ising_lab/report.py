"""Check results shared by every verification routine."""

from __future__ import annotations

import time
from dataclasses import asdict, dataclass, field
from typing import Any

import numpy as np


@dataclass(frozen=True)
class CheckReport:
    """Outcome of one identity check.

    ``passed`` is derived: a check passes iff ``residual <= tolerance``.
    ``paper_anchor`` names the identity being checked in formula form.
    """

    id: str
    paper_anchor: str
    params: dict[str, Any]
    residual: float
    tolerance: float
    wall_time_ms: float = 0.0
    metadata: dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return bool(np.isfinite(self.residual) and self.residual <= self.tolerance)

    @classmethod
    def make(cls, id, anchor, params, residual, tolerance, start=None, **metadata):
        ms = 0.0 if start is None else (time.perf_counter() - start) * 1e3
        return cls(id, anchor, dict(params), float(residual), float(tolerance), ms, metadata)

    def to_dict(self) -> dict[str, Any]:
        d = asdict(self)
        d["pass"] = self.passed
        return _jsonable(d)

    def line(self) -> str:
        flag = "PASS" if self.passed else "FAIL"
        return f"{flag} {self.id:<40s} residual={self.residual:.3e} tol={self.tolerance:.1e} {self.params}"


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": float(obj.real), "im": float(obj.imag)}
    return obj


def rel_residual(lhs: np.ndarray, rhs: np.ndarray) -> float:
    """``||lhs - rhs||_F / max(||lhs||_F, ||rhs||_F, 1e-30)``."""
    den = max(np.linalg.norm(lhs), np.linalg.norm(rhs), 1e-30)
    return float(np.linalg.norm(lhs - rhs) / den)
