"""SVG drawings of chamber quotients and master-polytope slices for rank-2 inputs."""

import logging
import math
from fractions import Fraction
from pathlib import Path
from typing import List, Sequence, Union

import matplotlib
from matplotlib.figure import Figure
from matplotlib.patches import Polygon

from src.cli.schemas import FactorizationReport
from src.errors import IoError
from src.geometry import HalfSpace, LatticePolytope, fix_coordinate, format_rational, vertex_enumeration

logger = logging.getLogger(__name__)

_RC = {"svg.hashsalt": "toric-factorization", "svg.fonttype": "none"}


def _master_from_report(report: FactorizationReport) -> LatticePolytope:
    kodaira = report.kodaira
    rows = []
    for a, e in zip(kodaira.ample, kodaira.exceptional):
        rows.append(HalfSpace.from_rational(tuple(a.ray) + (e.coefficient - a.coefficient,), a.coefficient))
    dim = report.input.lattice_rank + 1
    axis = tuple(int(k == dim - 1) for k in range(dim))
    rows.append(HalfSpace(axis, 0))
    rows.append(HalfSpace(tuple(-c for c in axis), 1))
    return vertex_enumeration(rows, dim)


def _ordered(vertices: Sequence[Sequence[Fraction]]) -> List[List[float]]:
    points = [[float(c) for c in v] for v in vertices]
    cx = sum(p[0] for p in points) / len(points)
    cy = sum(p[1] for p in points) / len(points)
    return sorted(points, key=lambda p: (math.atan2(p[1] - cy, p[0] - cx), p))


def _draw(polytope: LatticePolytope, title: str, path: Path):
    fig = Figure(figsize=(4.0, 4.0))
    ax = fig.subplots()
    points = _ordered(polytope.vertices)
    ax.add_patch(Polygon(points, closed=True, facecolor="#bcd4e6", edgecolor="#2c5282", linewidth=1.5))
    ax.plot([p[0] for p in points], [p[1] for p in points], "o", color="#2c5282", markersize=4)
    xs = [p[0] for p in points]
    ys = [p[1] for p in points]
    ax.set_xlim(math.floor(min(xs)) - 1, math.ceil(max(xs)) + 1)
    ax.set_ylim(math.floor(min(ys)) - 1, math.ceil(max(ys)) + 1)
    ax.set_aspect("equal")
    ax.grid(True, ls=":", alpha=0.4)
    ax.set_title(title)
    try:
        fig.savefig(path, format="svg", metadata={"Date": None})
    except OSError as exc:
        raise IoError("could not write SVG", path=str(path), detail=str(exc)) from exc


def _tag(s: Fraction) -> str:
    return format_rational(s).replace("/", "_")


def emit_svg(report: FactorizationReport, out_dir: Union[str, Path]) -> List[Path]:
    """
    Draw every chamber quotient polytope, the slice at each wall and the
    slice at each sampled parameter.

    Args:
        report: a factorization report
        out_dir: output directory, created when missing

    Returns:
        Paths written, in a fixed order; empty for rank != 2 or trivial reports

    Raises:
        IoError: a file could not be written
    """
    if report.input.lattice_rank != 2:
        logger.warning("SVG output needs lattice rank 2, got %d; skipping", report.input.lattice_rank)
        return []
    if report.trivial or report.kodaira is None or not report.chambers:
        logger.info("nothing to draw")
        return []
    out_dir = Path(out_dir)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise IoError("could not create SVG directory", path=str(out_dir), detail=str(exc)) from exc
    master = _master_from_report(report)
    axis = report.input.lattice_rank
    jobs = []
    for i, chamber in enumerate(report.chambers, start=1):
        s = chamber.parameters[len(chamber.parameters) // 2]
        jobs.append((f"chamber_{i}.svg", s, f"chamber {i} quotient (s = {format_rational(s)})"))
    for i, wall in enumerate(report.walls, start=1):
        jobs.append((f"wall_{i}.svg", wall.s_value, f"wall slice (s = {format_rational(wall.s_value)})"))
    for chamber in report.chambers:
        for s in chamber.parameters:
            jobs.append((f"slice_{_tag(s)}.svg", s, f"master slice (s = {format_rational(s)})"))
    written = []
    with matplotlib.rc_context(_RC):
        for name, s, title in jobs:
            path = out_dir / name
            _draw(fix_coordinate(master, axis, s), title, path)
            written.append(path)
    logger.info("wrote %d SVG files to %s", len(written), out_dir)
    return written
