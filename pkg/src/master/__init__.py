"""Master space: section table, master polytope, chamber scans and resolution."""

from .chambers import (
    Chamber,
    ChamberReport,
    GenerationReport,
    GridScan,
    chamber_scan,
    check_generation,
    grid_points,
    grid_scan,
    sample_parameters,
)
from .polytope import MasterPolytope, build_master_polytope, quotient_of_parameter
from .resolution import (
    MasterResolution,
    VertexCone,
    build_master_resolution,
    twist_descent_at,
    vertex_cones,
)
from .sections import (
    PairFailure,
    SectionEntry,
    SectionTable,
    SurjectivityReport,
    build_section_table,
    check_multiplication_surjectivity,
    cross_chamber_findings,
    least_surjective_scaling,
)

__all__ = [
    "Chamber",
    "ChamberReport",
    "GenerationReport",
    "GridScan",
    "chamber_scan",
    "check_generation",
    "grid_points",
    "grid_scan",
    "sample_parameters",
    "MasterPolytope",
    "build_master_polytope",
    "quotient_of_parameter",
    "MasterResolution",
    "VertexCone",
    "build_master_resolution",
    "twist_descent_at",
    "vertex_cones",
    "PairFailure",
    "SectionEntry",
    "SectionTable",
    "SurjectivityReport",
    "build_section_table",
    "check_multiplication_surjectivity",
    "cross_chamber_findings",
    "least_surjective_scaling",
]
