"""Solver configuration and the small result records shared across modules."""

from __future__ import annotations

from dataclasses import dataclass, field

from .metrics import MetricTag


@dataclass(frozen=True)
class SolverConfig:
    """Tolerances and caps for the fixed-point solvers and property checks.

    ``tol`` is the stopping tolerance, measured in ``metric`` for the ALM
    diameter and power-mean residual and in the Frobenius norm for the
    Karcher-equation residual. ``check_tol`` and ``slack`` are the pass
    thresholds used by the property checkers: metric residuals must not
    exceed ``check_tol``, Loewner comparisons are given ``slack``.
    """

    tol: float = 1e-10
    max_iter: int = 500
    damping: float = 1.0
    metric: MetricTag = MetricTag.THOMPSON
    check_tol: float = 1e-8
    slack: float = 1e-8

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be at least 1")
        if not 0 < self.damping <= 1:
            raise ValueError("damping must lie in (0, 1]")
        object.__setattr__(self, "metric", MetricTag(self.metric))


@dataclass
class SolverResult:
    point: object
    iterations: int
    residual: float
    info: dict = field(default_factory=dict)


@dataclass(frozen=True)
class PropertyCheck:
    name: str
    residual: float
    passed: bool


def format_checks(checks):
    width = max(len(c.name) for c in checks)
    lines = [f"{'check':<{width}}  {'residual':>12}  result"]
    for c in checks:
        lines.append(f"{c.name:<{width}}  {c.residual:12.3e}  {'pass' if c.passed else 'FAIL'}")
    return "\n".join(lines)
