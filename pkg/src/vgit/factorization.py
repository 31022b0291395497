"""Factor each wall crossing into weighted blowups and blowdowns."""

import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from src.errors import InternalInconsistency, NotElementary, NotStar, OracleMismatch
from src.geometry import Fan, HalfSpace, StarCertificate, primitive, recognize_star_subdivision, remove_ray, star_subdivide
from src.geometry.linalg import nullspace
from src.geometry.rational import IntVec
from src.master import MasterPolytope, quotient_of_parameter

from .walls import FixedComponent, Wall

logger = logging.getLogger(__name__)


class StepKind(str, Enum):
    BLOWUP = "weighted_blowup"
    BLOWDOWN = "weighted_blowdown"


class TieBreak(str, Enum):
    """Order in which simultaneous fixed components are processed."""

    CENTROID_LEX = "centroid-lex"
    CENTROID_REVLEX = "centroid-revlex"

    def order(self, components: Sequence[FixedComponent]) -> List[int]:
        indices = sorted(range(len(components)), key=lambda i: (components[i].centroid, components[i].vertices))
        return indices if self is TieBreak.CENTROID_LEX else indices[::-1]


@dataclass(frozen=True)
class FactorizationStep:
    """
    One weighted blowup or blowdown.

    For a blowdown ``source`` is the star subdivision of ``target`` at
    ``ray``; for a blowup it is the other way round.
    """

    kind: StepKind
    source: Fan
    target: Fan
    ray: IntVec
    weights: Tuple[int, ...]
    certificate: StarCertificate
    wall: Fraction
    component: Optional[int]

    @property
    def fine(self) -> Fan:
        return self.source if self.kind is StepKind.BLOWDOWN else self.target

    @property
    def coarse(self) -> Fan:
        return self.target if self.kind is StepKind.BLOWDOWN else self.source


@dataclass(frozen=True)
class Crossing:
    """Quotient fans on both sides of a wall and the steps between them."""

    wall: Wall
    below: Fraction
    above: Fraction
    fan_below: Fan
    fan_above: Fan
    steps: Tuple[FactorizationStep, ...]


def _row_of(master: MasterPolytope, ray: IntVec) -> HalfSpace:
    split = master.split
    a = split.ample.coefficient(ray)
    e = split.exceptional.coefficient(ray)
    return HalfSpace.from_rational(tuple(ray) + (e - a,), a).canonical()


def _assign_rays(
    master: MasterPolytope, wall: Wall, rays: Sequence[IntVec], tie_break: TieBreak
) -> List[Tuple[Optional[int], List[IntVec]]]:
    """Group the rays that change at the wall by the fixed component whose facet they cut."""
    groups: List[Tuple[Optional[int], List[IntVec]]] = []
    remaining = list(rays)
    for index in tie_break.order(wall.fixed_components):
        component = wall.fixed_components[index]
        mine = []
        for ray in remaining:
            if ray in master.split.ample.owner.rays:
                row = _row_of(master, ray)
                if all(row.is_tight(v) for v in component.vertices):
                    mine.append(ray)
        remaining = [r for r in remaining if r not in mine]
        groups.append((index, sorted(mine)))
    if remaining:
        groups.append((None, sorted(remaining)))
    return groups


def _contract(
    fine: Fan, groups: List[Tuple[Optional[int], List[IntVec]]], wall: Fraction
) -> List[Tuple[Fan, Fan, IntVec, StarCertificate, Optional[int]]]:
    """Greedily remove the rays group by group, each removal a star subdivision."""
    current = fine
    moves = []
    for component, rays in groups:
        pending = list(rays)
        while pending:
            for ray in pending:
                try:
                    coarser = remove_ray(current, ray)
                    certificate = recognize_star_subdivision(current, coarser)
                except NotStar:
                    continue
                moves.append((current, coarser, ray, certificate, component))
                current = coarser
                pending.remove(ray)
                break
            else:
                raise NotElementary("no ray of the component can be contracted", wall=wall, rays=tuple(pending))
    return moves


def _check_weights(master: MasterPolytope, wall: Wall, groups, step: FactorizationStep, upward: bool):
    if step.component is None:
        return
    component = wall.fixed_components[step.component]
    rays = dict(groups).get(step.component, [])
    if not component.simple or len(rays) != 1:
        return
    expected = sorted(abs(w) for w in (component.up_weights if upward else component.down_weights))
    if sorted(step.weights) != expected:
        raise OracleMismatch(
            "star weights disagree with Bialynicki-Birula weights",
            ray=step.ray,
            weights=step.weights,
            expected=tuple(expected),
        )


def _flip(below: Fan, above: Fan, wall: Wall) -> List[FactorizationStep]:
    """Common star subdivision of a flip-shaped crossing, then a blowdown."""
    old = below.ray_sets() - above.ray_sets()
    rays = sorted({ray for cone in old for ray in cone})
    relation = nullspace([[ray[k] for ray in rays] for k in range(below.dim_ambient)], len(rays))
    if len(relation) != 1:
        raise NotElementary("changed cones do not form a circuit", wall=wall.s_value)
    coeffs = relation[0]
    positive = [sum(c * ray[k] for c, ray in zip(coeffs, rays) if c > 0) for k in range(below.dim_ambient)]
    center = primitive(positive)
    try:
        common = star_subdivide(below, center)
        if star_subdivide(above, center) != common:
            raise NotElementary("flip sides have different star subdivisions", wall=wall.s_value)
        up = recognize_star_subdivision(common, below)
        down = recognize_star_subdivision(common, above)
    except (NotStar, ValueError) as exc:
        raise NotElementary("flip is not a pair of star subdivisions", wall=wall.s_value) from exc
    return [
        FactorizationStep(StepKind.BLOWUP, below, common, center, up.weights, up, wall.s_value, None),
        FactorizationStep(StepKind.BLOWDOWN, common, above, center, down.weights, down, wall.s_value, None),
    ]


def crossing_parameters(walls: Sequence[Fraction], index: int) -> Tuple[Fraction, Fraction]:
    """Midpoints between the wall and its neighbours (or the endpoints 0 and 1)."""
    s = walls[index]
    lower = walls[index - 1] if index > 0 else Fraction(0)
    upper = walls[index + 1] if index + 1 < len(walls) else Fraction(1)
    return (lower + s) / 2, (s + upper) / 2


def factor_crossing(
    master: MasterPolytope,
    wall: Wall,
    below: Fraction,
    above: Fraction,
    tie_break: TieBreak = TieBreak.CENTROID_LEX,
) -> Crossing:
    """
    Turn the quotient fan below a wall into the one above it by star moves.

    Args:
        master: the master polytope
        wall: the wall with its fixed components
        below: parameter just below the wall
        above: parameter just above the wall
        tie_break: processing order for simultaneous components

    Returns:
        The crossing with its verified steps

    Raises:
        NotElementary: the crossing does not decompose into star moves
        OracleMismatch: star weights contradict the component weights
    """
    fan_below = quotient_of_parameter(master, below)
    fan_above = quotient_of_parameter(master, above)
    steps: List[FactorizationStep] = []
    if fan_below == fan_above:
        pass
    elif fan_above.is_refined_by(fan_below) and set(fan_above.rays) <= set(fan_below.rays):
        extra = sorted(set(fan_below.rays) - set(fan_above.rays))
        groups = _assign_rays(master, wall, extra, tie_break)
        for source, target, ray, certificate, component in _contract(fan_below, groups, wall.s_value):
            step = FactorizationStep(
                StepKind.BLOWDOWN, source, target, ray, certificate.weights, certificate, wall.s_value, component
            )
            _check_weights(master, wall, groups, step, upward=False)
            steps.append(step)
    elif fan_below.is_refined_by(fan_above) and set(fan_below.rays) <= set(fan_above.rays):
        extra = sorted(set(fan_above.rays) - set(fan_below.rays))
        groups = _assign_rays(master, wall, extra, tie_break)
        for fine, coarse, ray, certificate, component in reversed(_contract(fan_above, groups, wall.s_value)):
            step = FactorizationStep(
                StepKind.BLOWUP, coarse, fine, ray, certificate.weights, certificate, wall.s_value, component
            )
            _check_weights(master, wall, groups, step, upward=True)
            steps.append(step)
    else:
        steps.extend(_flip(fan_below, fan_above, wall))
    for step in steps:
        if not (step.source.simplicial and step.target.simplicial):
            raise NotElementary("intermediate fan is not simplicial", wall=wall.s_value, ray=step.ray)
    if steps and steps[-1].target != fan_above:
        raise NotElementary("steps do not reach the fan above the wall", wall=wall.s_value)
    logger.info("wall %s: %d step(s)", wall.s_value, len(steps))
    return Crossing(wall, below, above, fan_below, fan_above, tuple(steps))


def factorize_walls(
    master: MasterPolytope, walls: Sequence[Wall], tie_break: TieBreak = TieBreak.CENTROID_LEX
) -> List[Crossing]:
    """Fold over the walls in increasing s, checking the fans chain together."""
    values = [w.s_value for w in walls]
    crossings = []
    current: Optional[Fan] = master.split.morphism.source.fan
    for i, wall in enumerate(walls):
        below, above = crossing_parameters(values, i)
        crossing = factor_crossing(master, wall, below, above, tie_break)
        if crossing.fan_below != current:
            raise InternalInconsistency("crossing does not start where the previous one ended", wall=wall.s_value)
        current = crossing.fan_above
        crossings.append(crossing)
    return crossings


def compose_steps(start: Fan, steps: Sequence[FactorizationStep]) -> Fan:
    """Apply the steps' ray moves to ``start`` and return the resulting fan."""
    current = start
    for step in steps:
        if step.kind is StepKind.BLOWDOWN:
            current = remove_ray(current, step.ray)
        else:
            current = star_subdivide(current, step.ray)
    return current

