"""Exact lattice geometry: rationals, polytopes, cones and fans."""

from .cone import Cone, cone_index
from .fan import Fan, FanWall, normal_fan
from .polytope import (
    HalfSpace,
    LatticePolytope,
    count_lattice_points_recursive,
    fix_coordinate,
    lattice_points,
    minkowski_points,
    slice_polytope,
    support_polytope,
    vertex_enumeration,
)
from .rational import (
    IntVec,
    RatVec,
    as_fraction,
    format_rational,
    parse_rational,
    primitive,
)
from .star import StarCertificate, recognize_star_subdivision, remove_ray, star_subdivide

__all__ = [
    "Cone",
    "cone_index",
    "Fan",
    "FanWall",
    "normal_fan",
    "HalfSpace",
    "LatticePolytope",
    "count_lattice_points_recursive",
    "fix_coordinate",
    "lattice_points",
    "minkowski_points",
    "slice_polytope",
    "support_polytope",
    "vertex_enumeration",
    "IntVec",
    "RatVec",
    "as_fraction",
    "format_rational",
    "parse_rational",
    "primitive",
    "StarCertificate",
    "recognize_star_subdivision",
    "remove_ray",
    "star_subdivide",
]
