"""Ampleness of torus divisors: strict wall convexity plus normal-fan equality."""

import logging
from dataclasses import dataclass
from typing import Tuple

from src.errors import DegeneratePolytope
from src.geometry import normal_fan
from src.geometry.rational import IntVec, dot

from .variety import TorusDivisor, divisor_polytope

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class AmplenessWitness:
    """
    Outcome of an ampleness test; truthy exactly when the divisor is ample.

    On failure ``violated_walls`` lists every offending wall as the ray sets of
    its two adjacent maximal cones, and ``reason`` says which check failed.
    """

    ample: bool
    reason: str = ""
    violated_walls: Tuple[Tuple[Tuple[IntVec, ...], Tuple[IntVec, ...]], ...] = ()

    def __bool__(self) -> bool:
        return self.ample


def strictly_convex_across(divisor: TorusDivisor, left: int, right: int) -> bool:
    """
    Strict convexity of psi_D across the wall between two adjacent cones.

    With m the character of ``left``, every ray v of ``right`` off the wall
    must satisfy <m, v> > -D_v.
    """
    fan = divisor.owner.fan
    m_left = divisor.require_character(left)
    m_right = divisor.require_character(right)
    for mine, theirs, m in ((left, right, m_left), (right, left, m_right)):
        for index in fan.cones[theirs]:
            if index in fan.cones[mine]:
                continue
            if dot(m, fan.rays[index]) <= -divisor.coeffs[index]:
                return False
    return True


def is_ample(divisor: TorusDivisor) -> AmplenessWitness:
    """
    Decide ampleness of a Q-Cartier torus divisor on a complete simplicial fan.

    Args:
        divisor: the divisor to test

    Returns:
        Witness object; both the wall-by-wall convexity check and
        normal_fan(P_D) == fan must succeed for a positive answer
    """
    fan = divisor.owner.fan
    for cone in range(len(fan.cones)):
        if divisor.cone_character(cone) is None:
            return AmplenessWitness(False, "not Q-Cartier", ((fan.cone_rays(cone), fan.cone_rays(cone)),))
    violated = tuple(
        (fan.cone_rays(wall.left), fan.cone_rays(wall.right))
        for wall in fan.walls()
        if not strictly_convex_across(divisor, wall.left, wall.right)
    )
    if violated:
        return AmplenessWitness(False, "support function not strictly convex", violated)
    try:
        quotient = normal_fan(divisor_polytope(divisor))
    except DegeneratePolytope:
        return AmplenessWitness(False, "divisor polytope is not full-dimensional")
    if quotient != fan:
        logger.warning("wall convexity holds but the normal fan differs for %s", divisor.coeffs)
        return AmplenessWitness(False, "normal fan of the divisor polytope differs from the fan")
    return AmplenessWitness(True)
