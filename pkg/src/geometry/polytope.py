"""Exact rational polytopes: half-spaces, vertex enumeration, lattice points, slices."""

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, reduce
from itertools import combinations
from math import ceil, floor, gcd
from typing import FrozenSet, Iterable, Optional, Sequence, Tuple

import numpy as np

from src.errors import Unbounded

from .linalg import kernel_line, nullspace, rank, solve_square
from .rational import IntVec, RatVec, Scalar, dot, primitive, sub

logger = logging.getLogger(__name__)


@dataclass(frozen=True, order=True)
class HalfSpace:
    """The closed half-space {x : <normal, x> >= -offset}."""

    normal: IntVec
    offset: Fraction

    def __post_init__(self):
        normal = tuple(int(c) for c in self.normal)
        if not any(normal):
            raise ValueError("half-space normal must be nonzero")
        object.__setattr__(self, "normal", normal)
        object.__setattr__(self, "offset", Fraction(self.offset))

    @classmethod
    def from_rational(cls, normal: Sequence[Scalar], offset: Scalar) -> "HalfSpace":
        """Build from a rational normal by clearing denominators."""
        factor = reduce(lambda acc, c: acc * Fraction(c).denominator // gcd(acc, Fraction(c).denominator), normal, 1)
        return cls(tuple(int(Fraction(c) * factor) for c in normal), Fraction(offset) * factor)

    @property
    def dim(self) -> int:
        return len(self.normal)

    def value(self, point: Sequence[Scalar]) -> Fraction:
        """Slack <normal, x> + offset (nonnegative exactly on the half-space)."""
        return dot(self.normal, point) + self.offset

    def contains(self, point: Sequence[Scalar]) -> bool:
        return self.value(point) >= 0

    def is_tight(self, point: Sequence[Scalar]) -> bool:
        return self.value(point) == 0

    def canonical(self) -> "HalfSpace":
        """Same half-space with a primitive normal."""
        g = reduce(gcd, self.normal, 0)
        return HalfSpace(tuple(c // g for c in self.normal), self.offset / g)


@dataclass(frozen=True)
class LatticePolytope:
    """
    Bounded rational polytope carrying both representations.

    ``hrep`` is canonical (primitive normals, deduplicated, sorted) and
    ``vertices`` is exactly the set of extreme points of its intersection,
    sorted lexicographically. The empty polytope has no vertices.
    """

    hrep: Tuple[HalfSpace, ...]
    vertices: Tuple[RatVec, ...]
    dim_ambient: int

    def __post_init__(self):
        for vertex in self.vertices:
            if len(vertex) != self.dim_ambient:
                raise ValueError("vertex dimension does not match the ambient dimension")
            tight = [h.normal for h in self.hrep if h.is_tight(vertex)]
            if any(not h.contains(vertex) for h in self.hrep) or rank(tight) < self.dim_ambient:
                raise ValueError(f"{vertex} is not a vertex of the half-space system")

    @property
    def is_empty(self) -> bool:
        return not self.vertices

    @property
    def vertex_set(self) -> FrozenSet[RatVec]:
        return frozenset(self.vertices)

    def contains(self, point: Sequence[Scalar]) -> bool:
        return not self.is_empty and all(h.contains(point) for h in self.hrep)

    def affine_dimension(self) -> int:
        """Dimension of the affine hull (-1 when empty)."""
        if self.is_empty:
            return -1
        base = self.vertices[0]
        return rank([sub(v, base) for v in self.vertices[1:]])

    @property
    def is_full_dimensional(self) -> bool:
        return self.affine_dimension() == self.dim_ambient

    def tight_halfspaces(self, point: Sequence[Scalar]) -> Tuple[HalfSpace, ...]:
        return tuple(h for h in self.hrep if h.is_tight(point))

    def dilate(self, factor: Scalar) -> "LatticePolytope":
        """k * P for a positive rational k."""
        factor = Fraction(factor)
        if factor <= 0:
            raise ValueError("dilation factor must be positive")
        hrep = [HalfSpace(h.normal, h.offset * factor) for h in self.hrep]
        return vertex_enumeration(hrep, self.dim_ambient)

    def same_as(self, other: "LatticePolytope") -> bool:
        """Equality as point sets (vertex set to vertex set)."""
        return self.dim_ambient == other.dim_ambient and self.vertex_set == other.vertex_set


def _canonical_hrep(hrep: Iterable[HalfSpace]) -> Tuple[HalfSpace, ...]:
    return tuple(sorted({h.canonical() for h in hrep}))


def vertex_enumeration(hrep: Iterable[HalfSpace], dim_ambient: int) -> LatticePolytope:
    """
    Exact vertex enumeration by brute force over constraint subsets.

    Args:
        hrep: finitely many half-spaces in dimension ``dim_ambient``
        dim_ambient: ambient dimension (desk scale, <= ~6)

    Returns:
        The polytope; empty when infeasible

    Raises:
        Unbounded: the feasible region has a nontrivial recession cone
    """
    canonical = _canonical_hrep(hrep)
    if any(h.dim != dim_ambient for h in canonical):
        raise ValueError("half-space dimension does not match the ambient dimension")
    return _enumerate(canonical, dim_ambient)


@lru_cache(maxsize=16384)
def _enumerate(hrep: Tuple[HalfSpace, ...], dim: int) -> LatticePolytope:
    normals = [h.normal for h in hrep]
    if rank(normals) < dim:
        # A lineality direction exists; the region is empty or unbounded.
        pinned = list(hrep)
        for direction in nullspace(normals, dim):
            line = primitive(direction)
            pinned.append(HalfSpace(line, 0))
            pinned.append(HalfSpace(tuple(-c for c in line), 0))
        if _candidate_vertices(_canonical_hrep(pinned), dim):
            logger.debug("lineality space of rank %d in %d constraints", dim - rank(normals), len(hrep))
            raise Unbounded("half-space system contains a line", dim=dim)
        return LatticePolytope(hrep, (), dim)

    vertices = _candidate_vertices(hrep, dim)
    if not vertices:
        return LatticePolytope(hrep, (), dim)
    ray = _recession_ray(normals, dim)
    if ray is not None:
        raise Unbounded("half-space system has a recession ray", ray=ray)
    return LatticePolytope(hrep, vertices, dim)


def _candidate_vertices(hrep: Sequence[HalfSpace], dim: int) -> Tuple[RatVec, ...]:
    found = set()
    for subset in combinations(hrep, dim):
        point = solve_square([h.normal for h in subset], [-h.offset for h in subset])
        if point is not None and all(h.contains(point) for h in hrep):
            found.add(point)
    return tuple(sorted(found))


def _recession_ray(normals: Sequence[IntVec], dim: int) -> Optional[IntVec]:
    """An extreme ray of {d : N d >= 0}, or None when that cone is {0}."""
    if dim == 1:
        candidates = [(1,), (-1,)]
    else:
        candidates = []
        for subset in combinations(normals, dim - 1):
            line = kernel_line(list(subset), dim)
            if line is not None:
                candidates.extend([line, tuple(-c for c in line)])
    for direction in candidates:
        if all(dot(n, direction) >= 0 for n in normals):
            return direction
    return None


def lattice_points(polytope: LatticePolytope) -> FrozenSet[IntVec]:
    """
    All integer points of a bounded polytope.

    Scans the integer bounding box and tests membership with exact integer
    arithmetic (each half-space is scaled by its offset denominator).
    """
    if polytope.is_empty:
        return frozenset()
    columns = list(zip(*polytope.vertices))
    axes = [np.arange(ceil(min(col)), floor(max(col)) + 1, dtype=np.int64) for col in columns]
    if any(axis.size == 0 for axis in axes):
        return frozenset()
    grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, polytope.dim_ambient)
    mask = np.ones(len(grid), dtype=bool)
    for h in polytope.hrep:
        denominator = h.offset.denominator
        lhs = grid @ np.array([c * denominator for c in h.normal], dtype=np.int64)
        mask &= lhs >= -h.offset.numerator
    return frozenset(tuple(int(x) for x in row) for row in grid[mask])


def fix_coordinate(polytope: LatticePolytope, axis: int, value: Scalar) -> LatticePolytope:
    """
    Restrict to {x_axis = value} and drop that coordinate.

    This is the explicit projection of a coordinate slice to the hyperplane
    lattice; the result lives in dimension ``dim_ambient - 1``.
    """
    value = Fraction(value)
    dim = polytope.dim_ambient - 1
    if polytope.is_empty:
        return LatticePolytope((), (), dim)
    reduced = []
    for h in polytope.hrep:
        normal = h.normal[:axis] + h.normal[axis + 1:]
        offset = h.offset + h.normal[axis] * value
        if any(normal):
            reduced.append(HalfSpace(normal, offset))
        elif offset < 0:
            return LatticePolytope((), (), dim)
    if not reduced:
        raise Unbounded("no constraints survive the coordinate restriction", axis=axis)
    return vertex_enumeration(reduced, dim)


def slice_polytope(polytope: LatticePolytope, form: Sequence[int], level: Scalar) -> LatticePolytope:
    """
    P intersected with {<form, x> = level}, kept in the ambient space of P.

    Args:
        polytope: the polytope to cut
        form: integer linear form w
        level: rational value t

    Returns:
        Possibly empty polytope in the same ambient dimension
    """
    level = Fraction(level)
    if polytope.is_empty:
        return polytope
    cut = [HalfSpace(tuple(form), -level), HalfSpace(tuple(-c for c in form), level)]
    return vertex_enumeration(polytope.hrep + tuple(cut), polytope.dim_ambient)


def minkowski_points(first: Iterable[Sequence[int]], second: Iterable[Sequence[int]]) -> FrozenSet[IntVec]:
    """Pairwise sums {p + q}."""
    second = list(second)
    return frozenset(tuple(a + b for a, b in zip(p, q)) for p in first for q in second)


def count_lattice_points_recursive(polytope: LatticePolytope) -> int:
    """
    Count integer points by fixing the first coordinate and recursing.

    Independent of :func:`lattice_points`; used to cross-check it.
    """
    if polytope.is_empty:
        return 0
    first = [v[0] for v in polytope.vertices]
    low, high = ceil(min(first)), floor(max(first))
    if polytope.dim_ambient == 1:
        return max(0, high - low + 1)
    return sum(
        count_lattice_points_recursive(fix_coordinate(polytope, 0, k)) for k in range(low, high + 1)
    )


def support_polytope(polytope: LatticePolytope, rays: Sequence[IntVec]) -> LatticePolytope:
    """
    Rebuild a polytope from its support function h(v) = min <v, x> on ``rays``.
    """
    hrep = [HalfSpace(ray, -min(dot(ray, v) for v in polytope.vertices)) for ray in rays]
    return vertex_enumeration(hrep, polytope.dim_ambient)
