"""Per-stage timing and counters for pipeline runs."""

import time
from collections import defaultdict, deque
from threading import Lock
from typing import Deque, Dict

import numpy as np


class StageMetrics:
    """Thread-safe latency and counter tracker keyed by pipeline stage."""

    def __init__(self, window_size: int = 256):
        """
        Initialize the tracker.

        Args:
            window_size: latencies kept per stage
        """
        self.window_size = window_size
        self.lock = Lock()
        self.latencies: Dict[str, Deque[float]] = defaultdict(lambda: deque(maxlen=self.window_size))
        self.counters: Dict[str, int] = defaultdict(int)
        self.total_runs = 0

    def record_stage(self, stage: str, latency_ms: float):
        with self.lock:
            self.latencies[stage].append(latency_ms)

    def increment(self, counter: str, amount: int = 1):
        with self.lock:
            self.counters[counter] += amount

    def record_run(self):
        with self.lock:
            self.total_runs += 1

    def _percentile(self, stage: str, q: float) -> float:
        values = self.latencies.get(stage)
        if not values:
            return 0.0
        return float(np.percentile(list(values), q))

    def get_p50_latency(self, stage: str) -> float:
        """Median latency of a stage in milliseconds."""
        with self.lock:
            return self._percentile(stage, 50)

    def get_p99_latency(self, stage: str) -> float:
        with self.lock:
            return self._percentile(stage, 99)

    def get_count(self, counter: str) -> int:
        with self.lock:
            return self.counters.get(counter, 0)

    def get_metrics_summary(self) -> Dict:
        """
        Summary of every stage and counter.

        Returns:
            Dictionary with per-stage p50/p99/total milliseconds and the counters
        """
        with self.lock:
            stages = {
                stage: {
                    "p50_ms": round(self._percentile(stage, 50), 2),
                    "p99_ms": round(self._percentile(stage, 99), 2),
                    "total_ms": round(float(np.sum(list(values))), 2),
                }
                for stage, values in sorted(self.latencies.items())
            }
            return {
                "total_runs": self.total_runs,
                "stages": stages,
                "counters": dict(sorted(self.counters.items())),
            }

    def reset(self):
        """Reset all metrics."""
        with self.lock:
            self.latencies.clear()
            self.counters.clear()
            self.total_runs = 0


class LatencyTimer:
    """Context manager for measuring latency."""

    def __init__(self):
        self.start_time = None
        self.end_time = None
        self.latency_ms = None

    def __enter__(self):
        self.start_time = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        self.end_time = time.perf_counter()
        self.latency_ms = (self.end_time - self.start_time) * 1000
        return False
