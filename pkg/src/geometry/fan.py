"""Fans in canonical form, their derived flags and the normal fan of a polytope."""

import logging
from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Dict, FrozenSet, Iterable, List, Sequence, Tuple

from src.errors import DegeneratePolytope, ValidationError

from .cone import Cone, cone_index
from .linalg import rank
from .polytope import HalfSpace, LatticePolytope, vertex_enumeration
from .rational import IntVec, is_primitive, sub

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FanWall:
    """Two adjacent maximal cones and the ray indices of their common facet."""

    left: int
    right: int
    shared: Tuple[int, ...]


@dataclass(frozen=True)
class Fan:
    """
    Fan given by primitive rays and maximal cones (ray-index tuples).

    The constructor canonicalizes: rays are sorted lexicographically, each
    cone is a sorted index tuple, cones are sorted and only maximal ones kept.
    Equality of fans is therefore equality of the stored data.
    """

    rays: Tuple[IntVec, ...]
    cones: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        if not self.rays:
            raise ValidationError("a fan needs at least one ray")
        raw_rays = [tuple(int(c) for c in ray) for ray in self.rays]
        dim = len(raw_rays[0])
        for ray in raw_rays:
            if len(ray) != dim or not is_primitive(ray):
                raise ValidationError("fan rays must be primitive and of equal rank", ray=ray)
        if len(set(raw_rays)) != len(raw_rays):
            raise ValidationError("fan rays must be distinct")
        ordered = sorted(raw_rays)
        position = {ray: i for i, ray in enumerate(ordered)}
        cone_sets = set()
        for cone in self.cones:
            try:
                indices = frozenset(position[raw_rays[i]] for i in cone)
            except IndexError as exc:
                raise ValidationError("cone refers to a missing ray", cone=tuple(cone)) from exc
            if not indices:
                raise ValidationError("empty maximal cone")
            cone_sets.add(indices)
        maximal = [c for c in cone_sets if not any(c < other for other in cone_sets)]
        object.__setattr__(self, "rays", tuple(ordered))
        object.__setattr__(self, "cones", tuple(sorted(tuple(sorted(c)) for c in maximal)))

    @classmethod
    def from_ray_sets(cls, ray_sets: Iterable[Iterable[Sequence[int]]]) -> "Fan":
        """Build from cones given directly as collections of rays."""
        ray_sets = [[tuple(int(c) for c in ray) for ray in rays] for rays in ray_sets]
        rays = sorted({ray for rays in ray_sets for ray in rays})
        position = {ray: i for i, ray in enumerate(rays)}
        return cls(tuple(rays), tuple(tuple(position[ray] for ray in cone) for cone in ray_sets))

    @property
    def dim_ambient(self) -> int:
        return len(self.rays[0])

    def ray_index(self, ray: Sequence[int]) -> int:
        return self.rays.index(tuple(ray))

    def cone_rays(self, i: int) -> Tuple[IntVec, ...]:
        return tuple(self.rays[j] for j in self.cones[i])

    def cone(self, i: int) -> Cone:
        return Cone(self.cone_rays(i), self.dim_ambient)

    @cached_property
    def all_cones(self) -> Tuple[Cone, ...]:
        return tuple(self.cone(i) for i in range(len(self.cones)))

    def ray_sets(self) -> FrozenSet[FrozenSet[IntVec]]:
        return frozenset(frozenset(self.cone_rays(i)) for i in range(len(self.cones)))

    def cones_containing(self, point: Sequence[int]) -> List[int]:
        return [i for i, cone in enumerate(self.all_cones) if cone.contains(point)]

    @cached_property
    def simplicial(self) -> bool:
        return all(cone.is_simplicial for cone in self.all_cones)

    @cached_property
    def smooth(self) -> bool:
        return self.simplicial and all(cone_index(cone) == 1 for cone in self.all_cones)

    @cached_property
    def complete(self) -> bool:
        """Every maximal cone is full-dimensional and every facet is shared by exactly two cones."""
        if not all(cone.is_full_dimensional for cone in self.all_cones):
            return False
        counts = Counter(
            frozenset(facet) for cone in self.all_cones for facet in cone.facets()
        )
        return all(count == 2 for count in counts.values())

    def cone_indices(self) -> Dict[Tuple[int, ...], int]:
        """Multiplicity of every maximal cone (simplicial fans only)."""
        return {self.cones[i]: cone_index(cone) for i, cone in enumerate(self.all_cones)}

    def walls(self) -> List[FanWall]:
        """Pairs of full-dimensional maximal cones meeting in a common facet."""
        found = []
        for i, j in combinations(range(len(self.cones)), 2):
            shared = tuple(sorted(set(self.cones[i]) & set(self.cones[j])))
            if shared and rank([self.rays[k] for k in shared]) == self.dim_ambient - 1:
                found.append(FanWall(i, j, shared))
        return found

    def validate(self) -> "Fan":
        """
        Check that every pair of maximal cones meets in the cone of their common rays.

        Each intersection is cut by a unit box and its vertices must lie in the
        cone spanned by the shared rays.

        Raises:
            ValidationError: with the first offending pair
        """
        dim = self.dim_ambient
        box = []
        for axis in range(dim):
            unit = tuple(int(k == axis) for k in range(dim))
            box.append(HalfSpace(unit, 1))
            box.append(HalfSpace(tuple(-c for c in unit), 1))
        cones = self.all_cones
        for i, j in combinations(range(len(cones)), 2):
            hrep = [HalfSpace(form, 0) for form in cones[i].inequalities() + cones[j].inequalities()]
            meet = vertex_enumeration(hrep + box, dim)
            shared = sorted(set(cones[i].rays) & set(cones[j].rays))
            common = Cone(tuple(shared), dim) if shared else None
            for vertex in meet.vertices:
                if any(vertex) and (common is None or not common.contains(vertex)):
                    raise ValidationError(
                        "maximal cones do not meet in a common face",
                        cones=(cones[i].rays, cones[j].rays),
                        witness=vertex,
                    )
        return self

    def is_refined_by(self, other: "Fan") -> bool:
        """True when every cone of ``other`` lies in some cone of this fan."""
        return all(
            any(all(mine.contains(ray) for ray in cone.rays) for mine in self.all_cones)
            for cone in other.all_cones
        )


def normal_fan(polytope: LatticePolytope) -> Fan:
    """
    Inner normal fan of a full-dimensional polytope.

    Args:
        polytope: full-dimensional polytope in its ambient space

    Returns:
        Complete fan with one maximal cone per vertex

    Raises:
        DegeneratePolytope: the polytope is empty or lower-dimensional
    """
    if not polytope.is_full_dimensional:
        raise DegeneratePolytope(
            "normal fan needs a full-dimensional polytope",
            dimension=polytope.affine_dimension(),
            ambient=polytope.dim_ambient,
        )
    dim = polytope.dim_ambient
    facets = []
    for h in polytope.hrep:
        tight = [v for v in polytope.vertices if h.is_tight(v)]
        if tight and rank([sub(v, tight[0]) for v in tight[1:]]) == dim - 1:
            facets.append(h)
    cones = [[h.normal for h in facets if h.is_tight(vertex)] for vertex in polytope.vertices]
    return Fan.from_ray_sets(cones)
