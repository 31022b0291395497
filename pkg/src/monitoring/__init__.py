"""Pipeline timing and counters."""

from .metrics import LatencyTimer, StageMetrics

__all__ = ["StageMetrics", "LatencyTimer"]
