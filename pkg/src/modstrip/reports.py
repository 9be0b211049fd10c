from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any


def _clean(value: Any) -> Any:
    # numpy scalars and non-finite floats are not valid JSON
    if hasattr(value, "item") and not isinstance(value, (list, dict)):
        value = value.item()
    if isinstance(value, float) and not math.isfinite(value):
        return repr(value)
    if isinstance(value, dict):
        return {k: _clean(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_clean(v) for v in value]
    return value


@dataclass
class CheckReport:
    """Outcome of one numerical check: worst residual against a tolerance."""

    check: str
    max_residual: float
    tol: float
    passed: bool
    details: dict[str, Any] = field(default_factory=dict)

    @property
    def verdict(self) -> str:
        return "pass" if self.passed else "fail"

    def __bool__(self) -> bool:
        return self.passed

    def to_dict(self) -> dict[str, Any]:
        out = {
            "check": self.check,
            "max_residual": float(self.max_residual),
            "tol": float(self.tol),
            "verdict": self.verdict,
        }
        if self.details:
            out["details"] = self.details
        return _clean(out)


def residual_report(check: str, residual: float, tol: float, **details: Any) -> CheckReport:
    residual = float(residual)
    return CheckReport(check, residual, tol, bool(residual < tol), dict(details))
