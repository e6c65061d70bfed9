"""Residual checks over sampled chart points and their verdicts."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .fields import DegeneratePointError
from .jets import EvaluationDomainError
from .sampling import halton_points

__all__ = ["RunConfig", "Verdict", "SkipPoint", "run_pointwise_check", "combine"]


class SkipPoint(Exception):
    """Raised by a residual function to skip a sample point with a reason."""

    def __init__(self, reason):
        super().__init__(reason)
        self.reason = reason


@dataclass(frozen=True)
class RunConfig:
    samples: int = 200
    seed: int = 0
    tol: float = 1e-8
    min_valid_points: int = 50
    jet_order: int = 2

    def with_(self, **kw):
        data = {k: getattr(self, k) for k in ("samples", "seed", "tol", "min_valid_points", "jet_order")}
        data.update(kw)
        return RunConfig(**data)


@dataclass
class Verdict:
    name: str
    max_residual: float
    points_tested: int
    points_skipped: int
    tol: float
    passed: bool
    worst_point: tuple | None = None
    skipped: bool = False
    detail: str = ""

    def as_dict(self):
        return {
            "name": self.name,
            "max_residual": None if self.max_residual != self.max_residual else float(self.max_residual),
            "points_tested": int(self.points_tested),
            "points_skipped": int(self.points_skipped),
            "tol": float(self.tol),
            "passed": bool(self.passed),
            "worst_point": [float(x) for x in self.worst_point] if self.worst_point is not None else None,
            "skipped": bool(self.skipped),
            "detail": self.detail,
        }

    def __str__(self):
        status = "SKIP" if self.skipped else ("PASS" if self.passed else "FAIL")
        return (
            f"{status:4s} {self.name}: max residual {self.max_residual:.3e} "
            f"(tol {self.tol:.1e}, {self.points_tested} pts, {self.points_skipped} skipped)"
        )


def run_pointwise_check(name, chart, residual_fn, config: RunConfig, tol=None, detail=""):
    """Evaluate ``residual_fn(p) -> (residual, scale)`` over sampled points.

    The check passes when ``residual <= tol * scale`` at every tested point
    and at least ``min_valid_points`` points survived the degeneracy and
    domain-error skipping.
    """
    tol = config.tol if tol is None else tol
    pts = halton_points(chart, config.samples, seed=config.seed)
    worst = -1.0
    worst_rel = -1.0
    worst_point = None
    tested = 0
    skipped = 0
    skip_reason = ""
    for p in pts:
        try:
            res, scale = residual_fn(p)
        except (DegeneratePointError, EvaluationDomainError, SkipPoint) as exc:
            skipped += 1
            skip_reason = str(exc)
            continue
        if not np.isfinite(res):
            skipped += 1
            skip_reason = "non-finite residual"
            continue
        tested += 1
        rel = res / max(scale, 1e-300)
        if rel > worst_rel:
            worst_rel = rel
            worst = res
            worst_point = tuple(float(x) for x in p)
    if tested < config.min_valid_points:
        return Verdict(
            name,
            max_residual=float("nan") if tested == 0 else worst,
            points_tested=tested,
            points_skipped=skipped,
            tol=tol,
            passed=False,
            worst_point=worst_point,
            skipped=True,
            detail=detail or f"too few valid points ({tested} < {config.min_valid_points}): {skip_reason}",
        )
    return Verdict(
        name,
        max_residual=worst,
        points_tested=tested,
        points_skipped=skipped,
        tol=tol,
        passed=worst_rel <= tol,
        worst_point=worst_point,
        detail=detail,
    )


def combine(name, verdicts, detail=""):
    """Conjunction of sub-verdicts, reporting the worst residual."""
    verdicts = list(verdicts)
    live = [v for v in verdicts if not v.skipped]
    if not live:
        return Verdict(name, float("nan"), 0, sum(v.points_skipped for v in verdicts), 0.0, False, skipped=True, detail=detail or "all sub-checks skipped")
    worst = max(live, key=lambda v: v.max_residual / max(v.tol, 1e-300))
    return Verdict(
        name,
        max_residual=worst.max_residual,
        points_tested=sum(v.points_tested for v in live),
        points_skipped=sum(v.points_skipped for v in verdicts),
        tol=worst.tol,
        passed=all(v.passed for v in live),
        worst_point=worst.worst_point,
        detail=detail,
    )
