"""Rational polyhedral cones given by primitive ray generators."""

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import List, Optional, Sequence, Tuple

from src.errors import InternalInconsistency, NotSimplicial

from .linalg import coordinates, kernel_line, lattice_index, maximal_minor_gcd, nullspace, rank
from .rational import IntVec, RatVec, Scalar, dot, is_primitive, primitive


@dataclass(frozen=True)
class Cone:
    """
    Cone spanned by a minimal set of primitive integer rays.

    Rays are stored sorted so two cones with the same generators compare equal.
    """

    rays: Tuple[IntVec, ...]
    dim_ambient: int

    def __post_init__(self):
        rays = tuple(sorted({tuple(int(c) for c in ray) for ray in self.rays}))
        for ray in rays:
            if len(ray) != self.dim_ambient:
                raise ValueError(f"ray {ray} does not live in rank {self.dim_ambient}")
            if not is_primitive(ray):
                raise ValueError(f"ray {ray} is not primitive")
        object.__setattr__(self, "rays", rays)
        for ray in rays:
            others = [r for r in rays if r != ray]
            if others and _in_cone(others, ray, self.dim_ambient):
                raise ValueError(f"ray {ray} is redundant in the cone generators")

    @cached_property
    def dimension(self) -> int:
        return rank(self.rays)

    @property
    def is_simplicial(self) -> bool:
        return len(self.rays) == self.dimension

    @property
    def is_full_dimensional(self) -> bool:
        return self.dimension == self.dim_ambient

    def contains(self, point: Sequence[Scalar]) -> bool:
        """Membership test (Caratheodory over independent ray subsets)."""
        return _in_cone(self.rays, point, self.dim_ambient)

    def generator_coordinates(self, point: Sequence[Scalar]) -> Optional[RatVec]:
        """Coordinates of ``point`` in the generators of a simplicial cone (None outside the span)."""
        if not self.is_simplicial:
            raise NotSimplicial("cone generators are linearly dependent", rays=self.rays)
        return coordinates(self.rays, point)

    def in_relative_interior(self, point: Sequence[Scalar]) -> bool:
        if self.is_simplicial:
            coords = self.generator_coordinates(point)
            return coords is not None and all(c > 0 for c in coords)
        return self.contains(point) and not any(
            _in_cone(facet, point, self.dim_ambient) for facet in self.facets() if facet
        )

    def orthogonal_complement(self) -> List[IntVec]:
        """Primitive basis of the forms vanishing on the span of the cone."""
        if not self.rays:
            return []
        return [primitive(v) for v in nullspace(self.rays, self.dim_ambient)]

    @cached_property
    def _facet_data(self) -> Tuple[Tuple[IntVec, Tuple[IntVec, ...]], ...]:
        complement = self.orthogonal_complement()
        found = {}
        for subset in combinations(self.rays, self.dimension - 1):
            normal = kernel_line(list(subset) + complement, self.dim_ambient)
            if normal is None:
                continue
            values = [dot(normal, ray) for ray in self.rays]
            if all(v <= 0 for v in values):
                normal = tuple(-c for c in normal)
                values = [-v for v in values]
            if any(v < 0 for v in values):
                continue
            tight = tuple(ray for ray, v in zip(self.rays, values) if v == 0)
            if rank(tight) == self.dimension - 1 and tight not in found:
                found[tight] = normal
        return tuple(sorted((normal, tight) for tight, normal in found.items()))

    def facets(self) -> List[Tuple[IntVec, ...]]:
        """Ray sets of the facets (codimension-one faces within the span)."""
        return [tight for _, tight in self._facet_data]

    def inequalities(self) -> List[IntVec]:
        """
        Integer forms cutting out the cone: facet normals (>= 0) plus both
        signs of the orthogonal complement (equalities).
        """
        forms = [normal for normal, _ in self._facet_data]
        for form in self.orthogonal_complement():
            forms.extend([form, tuple(-c for c in form)])
        return forms


def _in_cone(rays: Sequence[IntVec], point: Sequence[Scalar], dim: int) -> bool:
    if not any(point):
        return True
    if not rays:
        return False
    d = rank(rays)
    for subset in combinations(rays, d):
        if rank(subset) < d:
            continue
        coords = coordinates(subset, point)
        if coords is not None and all(c >= 0 for c in coords):
            return True
    return False


def cone_index(cone: Cone) -> int:
    """
    Multiplicity of a simplicial cone.

    Args:
        cone: simplicial cone

    Returns:
        Index of the sublattice generated by the rays inside its saturation
        (1 exactly for smooth cones)

    Raises:
        NotSimplicial: the cone has more rays than its dimension
        InternalInconsistency: the two index computations disagree
    """
    if not cone.is_simplicial:
        raise NotSimplicial("cone index needs a simplicial cone", rays=cone.rays)
    index = lattice_index(cone.rays)
    if cone.rays and index != maximal_minor_gcd(cone.rays):
        raise InternalInconsistency("Smith form and minor gcd disagree on a cone index", rays=cone.rays)
    return index
