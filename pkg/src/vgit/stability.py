"""Stable = semistable and free-action certificates at non-wall parameters."""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from src.errors import InternalInconsistency, ValidationError, WallParameter
from src.geometry import cone_index, primitive
from src.geometry.rational import IntVec, RatVec, Scalar, as_fraction, sub
from src.master import MasterPolytope, quotient_of_parameter

from .walls import edges

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EdgeWitness:
    """A slice vertex, the edge of Q through it and the edge's weight datum."""

    point: RatVec
    start: RatVec
    end: RatVec
    weight: int


@dataclass(frozen=True)
class StabilityCertificate:
    parameter: Fraction
    stable_equals_semistable: bool
    free_action: bool
    witnesses: Tuple[EdgeWitness, ...] = field(default_factory=tuple)
    quotient_cone_indices: Tuple[Optional[int], ...] = field(default_factory=tuple)


def _edge_through(master: MasterPolytope, point: RatVec, all_edges) -> Optional[Tuple[RatVec, RatVec]]:
    axis = master.weight_axis
    for u, v in all_edges:
        lo, hi = (u, v) if u[axis] < v[axis] else (v, u)
        if not lo[axis] < point[axis] < hi[axis]:
            continue
        t = (point[axis] - lo[axis]) / (hi[axis] - lo[axis])
        if all(lo[k] + t * (hi[k] - lo[k]) == point[k] for k in range(len(point))):
            return lo, hi
    return None


def stability_certificate(master: MasterPolytope, s: Scalar, walls: Sequence[Fraction]) -> StabilityCertificate:
    """
    Certify that the quotient at a non-wall parameter is geometric and free.

    Every vertex of the slice at s lies inside an edge of Q; the C*-action is
    free there iff the w-component of the edge's primitive direction is +-1.

    Raises:
        ValidationError: s outside (0, 1)
        WallParameter: s is a wall
    """
    s = as_fraction(s)
    if not 0 < s < 1:
        raise ValidationError("parameter must lie strictly between 0 and 1", s=s)
    if s in set(walls):
        raise WallParameter("stability is only certified off the walls", s=s)
    stable = all(master.height(v) != s for v in master.vertices)
    all_edges = edges(master)
    witnesses: List[EdgeWitness] = []
    for point in master.slice_at(s).vertices:
        edge = _edge_through(master, point, all_edges)
        if edge is None:
            raise InternalInconsistency("slice vertex lies on no edge of the master polytope", point=point)
        start, end = edge
        direction: IntVec = primitive(sub(end, start))
        witnesses.append(EdgeWitness(point, start, end, direction[master.weight_axis]))
    free = all(abs(w.weight) == 1 for w in witnesses)
    quotient = quotient_of_parameter(master, s)
    indices = tuple(cone_index(cone) if cone.is_simplicial else None for cone in quotient.all_cones)
    if not (stable and free):
        logger.warning("stability certificate fails at s=%s (stable=%s, free=%s)", s, stable, free)
    return StabilityCertificate(
        parameter=s,
        stable_equals_semistable=stable,
        free_action=free,
        witnesses=tuple(witnesses),
        quotient_cone_indices=indices,
    )
