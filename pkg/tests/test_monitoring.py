"""Tests for stage metrics."""

import time

import pytest

from src.monitoring import LatencyTimer, StageMetrics


def test_metrics_initialization():
    """Test stage metrics initialization."""
    metrics = StageMetrics(window_size=100)

    assert metrics.window_size == 100
    assert metrics.total_runs == 0
    assert metrics.get_count("walls") == 0
    assert metrics.get_p50_latency("kodaira") == 0.0


def test_stage_latencies():
    """Test per-stage percentiles."""
    metrics = StageMetrics(window_size=100)

    metrics.record_stage("master", 10.0)
    metrics.record_stage("master", 20.0)
    metrics.record_stage("master", 100.0)
    metrics.record_stage("walls", 5.0)

    assert metrics.get_p50_latency("master") == pytest.approx(20.0)
    assert metrics.get_p99_latency("master") >= 90.0
    assert metrics.get_p50_latency("walls") == pytest.approx(5.0)


def test_latency_window_is_bounded():
    """Test that only the last window_size latencies are kept."""
    metrics = StageMetrics(window_size=2)

    for latency in (100.0, 1.0, 3.0):
        metrics.record_stage("sections", latency)

    assert metrics.get_p99_latency("sections") < 100.0


def test_counters():
    """Test counter increments."""
    metrics = StageMetrics()

    metrics.increment("steps")
    metrics.increment("steps", 2)
    metrics.record_run()

    assert metrics.get_count("steps") == 3
    assert metrics.total_runs == 1


def test_latency_timer():
    """Test latency timer context manager."""
    with LatencyTimer() as timer:
        time.sleep(0.01)

    assert timer.latency_ms is not None
    assert timer.latency_ms >= 10.0


def test_metrics_summary():
    """Test metrics summary."""
    metrics = StageMetrics()

    metrics.record_run()
    metrics.record_stage("kodaira", 2.0)
    metrics.record_stage("kodaira", 4.0)
    metrics.increment("walls")

    summary = metrics.get_metrics_summary()

    assert summary["total_runs"] == 1
    assert summary["stages"]["kodaira"]["total_ms"] == pytest.approx(6.0)
    assert summary["stages"]["kodaira"]["p50_ms"] == pytest.approx(3.0)
    assert summary["counters"] == {"walls": 1}


def test_reset():
    """Test that reset clears everything."""
    metrics = StageMetrics()
    metrics.record_run()
    metrics.record_stage("walls", 1.0)
    metrics.increment("steps")

    metrics.reset()

    assert metrics.get_metrics_summary() == {"total_runs": 0, "stages": {}, "counters": {}}
