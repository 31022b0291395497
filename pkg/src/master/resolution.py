"""
Toric model of the master space and its blowup at the wall fixed points.

The normal fan of q * Q gives a toric variety Z polarized by L with
P_L = q * Q. Star subdividing the cones of the fixed vertices at their
barycentric rays gives W -> Z with exceptional divisor E, on which the
twist descent check runs.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from src.errors import NotSimplicial
from src.geometry import Fan, LatticePolytope, cone_index, normal_fan, primitive, star_subdivide
from src.geometry.cone import Cone
from src.geometry.rational import IntVec, RatVec
from src.toric import (
    ToricMorphism,
    ToricVariety,
    TorusDivisor,
    TwistDescentReport,
    check_refinement,
    verify_twist_descent,
)

from .polytope import MasterPolytope

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class VertexCone:
    """Normal cone of q * Q at a vertex, with its multiplicity when simplicial."""

    vertex: RatVec
    rays: Tuple[IntVec, ...]
    index: Optional[int]

    @property
    def smooth(self) -> bool:
        return self.index == 1


@dataclass(frozen=True)
class MasterResolution:
    master: MasterPolytope
    model: ToricVariety
    polarization: TorusDivisor
    blowup: ToricVariety
    morphism: ToricMorphism
    exceptional: TorusDivisor
    centers: Tuple[IntVec, ...]


def vertex_cones(polytope: LatticePolytope) -> List[VertexCone]:
    """Per-vertex normal cones (tight facet normals) and their indices."""
    facets = set(normal_fan(polytope).rays)
    result = []
    for vertex in polytope.vertices:
        rays = tuple(sorted(h.normal for h in polytope.tight_halfspaces(vertex) if h.normal in facets))
        cone = Cone(rays, polytope.dim_ambient)
        try:
            index = cone_index(cone)
        except NotSimplicial:
            index = None
        result.append(VertexCone(vertex, cone.rays, index))
    return result


def build_master_resolution(master: MasterPolytope, walls: Sequence[Fraction]) -> MasterResolution:
    """
    Build (Z, L) from q * Q and blow up the vertex cones at the wall heights.

    Args:
        master: the master polytope
        walls: wall parameters; vertices of Q at these heights are blown up

    Returns:
        The resolution W -> Z with E the sum of the new prime divisors
    """
    lattice = master.lattice_model()
    fan = normal_fan(lattice)
    model = ToricVariety(fan, name="Z")
    offsets = {
        h.normal: h.offset
        for h in lattice.hrep
        if h.normal in set(fan.rays) and any(h.is_tight(v) for v in lattice.vertices)
    }
    polarization = TorusDivisor(model, tuple(offsets[ray] for ray in fan.rays))
    centers = []
    for cone in vertex_cones(lattice):
        if master.height(cone.vertex) / master.q in walls:
            total = [sum(ray[k] for ray in cone.rays) for k in range(lattice.dim_ambient)]
            centers.append(primitive(total))
    blown: Fan = fan
    for center in centers:
        blown = star_subdivide(blown, center)
    blowup = ToricVariety(blown, name="W")
    morphism = check_refinement(blowup, model)
    exceptional = TorusDivisor.from_mapping(blowup, {center: 1 for center in centers})
    logger.debug("master resolution blows up %d fixed vertices", len(centers))
    return MasterResolution(
        master=master,
        model=model,
        polarization=polarization,
        blowup=blowup,
        morphism=morphism,
        exceptional=exceptional,
        centers=tuple(centers),
    )


def twist_descent_at(resolution: MasterResolution, s: Fraction, n_max: int = 8) -> TwistDescentReport:
    """Run the twist descent check on the resolution at the character through s."""
    master = resolution.master
    return verify_twist_descent(
        resolution.morphism,
        resolution.polarization,
        resolution.exceptional,
        n_max=n_max,
        weight_axis=master.weight_axis,
        level=master.q * s,
    )
