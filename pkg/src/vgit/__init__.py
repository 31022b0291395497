"""Variation of GIT on the master polytope: walls, stability and crossings."""

from src.geometry import StarCertificate, recognize_star_subdivision, remove_ray, star_subdivide

from .factorization import (
    Crossing,
    FactorizationStep,
    StepKind,
    TieBreak,
    compose_steps,
    crossing_parameters,
    factor_crossing,
    factorize_walls,
)
from .stability import EdgeWitness, StabilityCertificate, stability_certificate
from .walls import (
    FixedComponent,
    Wall,
    compute_walls,
    edges,
    fixed_components_at,
    walls_by_bisection,
    walls_by_vertex_heights,
)

__all__ = [
    "StarCertificate",
    "recognize_star_subdivision",
    "remove_ray",
    "star_subdivide",
    "Crossing",
    "FactorizationStep",
    "StepKind",
    "TieBreak",
    "compose_steps",
    "crossing_parameters",
    "factor_crossing",
    "factorize_walls",
    "EdgeWitness",
    "StabilityCertificate",
    "stability_certificate",
    "FixedComponent",
    "Wall",
    "compute_walls",
    "edges",
    "fixed_components_at",
    "walls_by_bisection",
    "walls_by_vertex_heights",
]
