"""Chamber scans of the quotient fan over the parameter s, and the generation check."""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from src.errors import ChamberInconsistent, ValidationError
from src.geometry import Fan, lattice_points
from src.geometry.rational import IntVec, RatVec, integral
from src.toric import divisor_polytope

from .polytope import MasterPolytope, quotient_of_parameter

logger = logging.getLogger(__name__)


def sample_parameters(lo: Fraction, hi: Fraction, samples: int) -> List[Fraction]:
    """``samples`` equally spaced interior points of (lo, hi)."""
    return [lo + (hi - lo) * Fraction(k, samples + 1) for k in range(1, samples + 1)]


@dataclass(frozen=True)
class Chamber:
    """A maximal open parameter interval with constant quotient fan."""

    lo: Fraction
    hi: Fraction
    parameters: Tuple[Fraction, ...]
    fan: Fan

    def contains(self, s: Fraction) -> bool:
        return self.lo < s < self.hi


@dataclass(frozen=True)
class ChamberReport:
    """Chambers in increasing s; the first quotient is X, the last is Y."""

    chambers: Tuple[Chamber, ...]

    @property
    def chamber1(self) -> Chamber:
        return self.chambers[0]

    @property
    def chamber2(self) -> Chamber:
        return self.chambers[-1]

    @property
    def walls(self) -> Tuple[Fraction, ...]:
        return tuple(c.hi for c in self.chambers[:-1])

    @property
    def wall_parameter(self) -> Optional[Fraction]:
        """The first wall (None when there is only one chamber)."""
        return self.walls[0] if len(self.chambers) > 1 else None


def chamber_scan(master: MasterPolytope, samples: int = 5, breakpoints: Optional[Sequence[Fraction]] = None) -> ChamberReport:
    """
    Sample the quotient fan between consecutive breakpoints and merge equal neighbours.

    Args:
        master: the master polytope
        samples: parameters sampled per interval (at least 2)
        breakpoints: candidate walls; defaults to the interior vertex heights,
            which contain every wall

    Returns:
        The chambers, with the endpoints identified with fan(X) and fan(Y)

    Raises:
        ChamberInconsistent: samples inside one interval disagree, or an end
            chamber does not reproduce the source/target fan
    """
    if samples < 2:
        raise ValidationError("chamber scan needs at least 2 samples", samples=samples)
    cuts = sorted(set(master.interior_heights if breakpoints is None else breakpoints))
    bounds = [Fraction(0)] + list(cuts) + [Fraction(1)]
    intervals = []
    for lo, hi in zip(bounds, bounds[1:]):
        params = sample_parameters(lo, hi, samples)
        fans = [quotient_of_parameter(master, s) for s in params]
        if any(f != fans[0] for f in fans):
            bad = next(s for s, f in zip(params, fans) if f != fans[0])
            raise ChamberInconsistent("quotient fan changes inside an interval", lo=lo, hi=hi, s=bad)
        intervals.append((lo, hi, params, fans[0]))
    chambers: List[Chamber] = []
    for lo, hi, params, fan in intervals:
        if chambers and chambers[-1].fan == fan:
            last = chambers.pop()
            chambers.append(Chamber(last.lo, hi, last.parameters + tuple(params), fan))
        else:
            chambers.append(Chamber(lo, hi, tuple(params), fan))
    morphism = master.split.morphism
    if chambers[0].fan != morphism.source.fan:
        raise ChamberInconsistent("first chamber quotient is not the source fan")
    if chambers[-1].fan != morphism.target.fan:
        raise ChamberInconsistent("last chamber quotient is not the target fan")
    logger.info("chamber scan: %d chambers, walls %s", len(chambers), [str(c.hi) for c in chambers[:-1]])
    return ChamberReport(tuple(chambers))


def grid_points(grid: int) -> List[Fraction]:
    """The midpoints (2k - 1) / (2 grid), k = 1..grid."""
    return [Fraction(2 * k - 1, 2 * grid) for k in range(1, grid + 1)]


@dataclass(frozen=True)
class GridScan:
    """Quotient fan at every grid point off the walls, with its chamber index."""

    points: Tuple[Tuple[Fraction, int, Fan], ...]


def grid_scan(master: MasterPolytope, walls: Sequence[Fraction], grid: int = 32) -> GridScan:
    """
    Evaluate the quotient on a rational grid avoiding ``walls`` and assert
    constancy per chamber with fan(X) first and fan(Y) last.
    """
    walls = sorted(walls)
    rows = []
    by_chamber = {}
    for s in grid_points(grid):
        if s in walls:
            continue
        chamber = sum(1 for w in walls if w < s)
        fan = quotient_of_parameter(master, s)
        expected = by_chamber.setdefault(chamber, fan)
        if fan != expected:
            raise ChamberInconsistent("grid point disagrees with its chamber", s=s, chamber=chamber)
        rows.append((s, chamber, fan))
    morphism = master.split.morphism
    if 0 in by_chamber and by_chamber[0] != morphism.source.fan:
        raise ChamberInconsistent("grid chamber next to 0 is not the source fan")
    if len(walls) in by_chamber and by_chamber[len(walls)] != morphism.target.fan:
        raise ChamberInconsistent("grid chamber next to 1 is not the target fan")
    return GridScan(tuple(rows))


@dataclass
class GenerationReport:
    """Vertices of (q N) Q that are not lattice points of the graded slices."""

    scaling: int
    degree: int
    missing: List[RatVec] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.missing


def check_generation(master: MasterPolytope, scaling: int) -> GenerationReport:
    """
    The convex hull of the integer-height lattice slices of d * Q must be
    d * Q itself for d = q * scaling; equivalently every vertex of d * Q is a
    lattice point of H^0((d - t) A + t E) at its height t.
    """
    degree = master.q * scaling
    report = GenerationReport(scaling=scaling, degree=degree)
    split = master.split
    slices = {}
    for vertex in master.polytope.dilate(degree).vertices:
        if not integral(vertex):
            report.missing.append(vertex)
            continue
        t = int(vertex[master.weight_axis])
        if t not in slices:
            slices[t] = lattice_points(divisor_polytope((degree - t) * split.ample + t * split.exceptional))
        point: IntVec = tuple(int(c) for c in vertex[: master.weight_axis])
        if point not in slices[t]:
            report.missing.append(vertex)
    if report.missing:
        logger.warning("generation deviates at scaling %d: %d vertices", scaling, len(report.missing))
    return report
