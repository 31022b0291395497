"""Twist descent: M = n * f*L - E has the same invariant sections as n * f*L."""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional

from src.errors import DegeneratePolytope
from src.geometry import Fan, LatticePolytope, fix_coordinate, lattice_points, normal_fan, slice_polytope
from src.geometry.rational import Scalar, common_denominator

from .morphism import ToricMorphism, pullback
from .variety import TorusDivisor, divisor_polytope

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DescentTrial:
    """Comparison of P_M against P_{n f*L} at one multiple n."""

    n: int
    vertices_equal: bool
    points_equal: bool
    fans_equal: bool
    twisted_points: int
    pulled_points: int

    @property
    def holds(self) -> bool:
        return self.vertices_equal and self.points_equal and self.fans_equal


@dataclass(frozen=True)
class TwistDescentReport:
    """Per-n trials and the least n (None if none up to ``n_max``)."""

    n_max: int
    least_n: Optional[int]
    trials: List[DescentTrial] = field(default_factory=list)
    quotient_fan: Optional[Fan] = None

    @property
    def holds(self) -> bool:
        return self.least_n is not None


def _cut(polytope: LatticePolytope, weight_axis: Optional[int], level: Fraction) -> LatticePolytope:
    if weight_axis is None:
        return polytope
    form = tuple(int(k == weight_axis) for k in range(polytope.dim_ambient))
    return slice_polytope(polytope, form, level)


def _fan_of(polytope: LatticePolytope, weight_axis: Optional[int], level: Fraction) -> Optional[Fan]:
    projected = polytope if weight_axis is None else fix_coordinate(polytope, weight_axis, level)
    try:
        return normal_fan(projected)
    except DegeneratePolytope:
        return None


def _first_integral_points(first: LatticePolytope, second: LatticePolytope):
    """Lattice points of k * first and k * second for the least k making both integral."""
    k = common_denominator([c for v in first.vertices + second.vertices for c in v])
    return tuple(frozenset() if p.is_empty else lattice_points(p.dilate(k)) for p in (first, second))


def verify_twist_descent(
    morphism: ToricMorphism,
    polarization: TorusDivisor,
    exceptional: TorusDivisor,
    n_max: int = 8,
    weight_axis: Optional[int] = None,
    level: Scalar = 0,
) -> TwistDescentReport:
    """
    Find the least n <= n_max for which twisting by -E changes nothing.

    For M = n * f*L - E the polytope P_M sits inside P_{n f*L} (the canonical
    section of O(E) has character 0, so no translation is needed). With a
    ``weight_axis`` both are cut at height n * level on that coordinate,
    which compares invariant sections for the character at ``level``;
    without one the whole polytopes are compared.

    Args:
        morphism: blowup f: W -> Z
        polarization: ample L on Z
        exceptional: effective exceptional E on W
        n_max: largest multiple tried
        weight_axis: coordinate carrying the C*-weight, or None
        level: weight value per unit of L

    Returns:
        Report with every trial; ``least_n`` is None when no n works
    """
    level = Fraction(level)
    pulled = pullback(morphism, polarization)
    trials = []
    least = None
    fan = None
    for n in range(1, n_max + 1):
        height = n * level
        big = _cut(divisor_polytope(n * pulled), weight_axis, height)
        small = _cut(divisor_polytope(n * pulled - exceptional), weight_axis, height)
        small_points, big_points = _first_integral_points(small, big)
        small_fan = _fan_of(small, weight_axis, height) if not small.is_empty else None
        big_fan = _fan_of(big, weight_axis, height) if not big.is_empty else None
        trial = DescentTrial(
            n=n,
            vertices_equal=small.vertex_set == big.vertex_set,
            points_equal=small_points == big_points,
            fans_equal=small_fan is not None and small_fan == big_fan,
            twisted_points=len(small_points),
            pulled_points=len(big_points),
        )
        trials.append(trial)
        if trial.holds:
            least, fan = n, small_fan
            break
    logger.debug("twist descent least n = %s after %d trials", least, len(trials))
    return TwistDescentReport(n_max=n_max, least_n=least, trials=trials, quotient_fan=fan)
