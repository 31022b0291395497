"""Walls of the C*-action on the master polytope and their fixed components."""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, FrozenSet, List, Set, Tuple

from src.errors import OracleMismatch
from src.geometry import Fan, primitive
from src.geometry.linalg import coordinates, rank
from src.geometry.rational import RatVec, sub
from src.master import MasterPolytope, quotient_of_parameter

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FixedComponent:
    """
    A maximal face of Q on which the weight is constant.

    ``down_weights`` are negative and ``up_weights`` positive integers;
    ``simple`` is False when the face has more tight facets than its
    codimension, in which case the weights come from the leaving edges.
    """

    vertices: Tuple[RatVec, ...]
    weight_value: Fraction
    down_weights: Tuple[int, ...]
    up_weights: Tuple[int, ...]
    simple: bool

    @property
    def centroid(self) -> RatVec:
        """Centroid of the face projected to u-space."""
        count = len(self.vertices)
        dim = len(self.vertices[0]) - 1
        return tuple(sum(v[k] for v in self.vertices) / count for k in range(dim))


@dataclass(frozen=True)
class Wall:
    s_value: Fraction
    fixed_components: Tuple[FixedComponent, ...]


def _tight_rows(master: MasterPolytope, vertex) -> FrozenSet[int]:
    return frozenset(i for i, h in enumerate(master.polytope.hrep) if h.is_tight(vertex))


def edges(master: MasterPolytope) -> List[Tuple[RatVec, RatVec]]:
    """Edges of Q as vertex pairs."""
    vertices = master.vertices
    tight = {v: _tight_rows(master, v) for v in vertices}
    normals = [h.normal for h in master.polytope.hrep]
    dim = master.polytope.dim_ambient
    found = []
    for i, u in enumerate(vertices):
        for v in vertices[i + 1:]:
            common = tight[u] & tight[v]
            if rank([normals[k] for k in common]) != dim - 1:
                continue
            between = [w for w in vertices if common <= tight[w]]
            if len(between) == 2:
                found.append((u, v))
    return found


def _edge_weight(master: MasterPolytope, start: RatVec, end: RatVec) -> int:
    """w-component of the primitive integer direction from start to end."""
    return primitive(sub(end, start))[master.weight_axis]


def _components(master: MasterPolytope, s_value: Fraction) -> List[Tuple[RatVec, ...]]:
    level = [v for v in master.vertices if master.height(v) == s_value]
    adjacency: Dict[RatVec, Set[RatVec]] = {v: set() for v in level}
    for u, v in edges(master):
        if u in adjacency and v in adjacency:
            adjacency[u].add(v)
            adjacency[v].add(u)
    seen: Set[RatVec] = set()
    groups = []
    for start in level:
        if start in seen:
            continue
        stack, group = [start], []
        seen.add(start)
        while stack:
            current = stack.pop()
            group.append(current)
            for nxt in adjacency[current]:
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        groups.append(tuple(sorted(group)))
    return sorted(groups)


def fixed_components_at(master: MasterPolytope, s_value: Fraction) -> List[FixedComponent]:
    """
    All maximal w-constant faces of Q at height ``s_value`` with their
    Bialynicki-Birula weights.

    For a simple face the weights are the coordinates of the weight
    direction in the tight facet normals, scaled jointly to a primitive
    integer vector; otherwise each edge leaving the face contributes the
    w-component of its primitive direction.
    """
    hrep = master.polytope.hrep
    dim = master.polytope.dim_ambient
    all_edges = edges(master)
    result = []
    for face in _components(master, s_value):
        common = frozenset.intersection(*(_tight_rows(master, v) for v in face))
        normals = [hrep[k].normal for k in sorted(common)]
        face_dim = rank([sub(v, face[0]) for v in face[1:]])
        simple = len(normals) == dim - face_dim and rank(normals) == len(normals)
        weights: List[int] = []
        if simple:
            coords = coordinates(normals, master.weight_form)
            if coords is None:
                simple = False
            else:
                weights = [c for c in primitive(coords) if c != 0]
        if not simple:
            members = set(face)
            for u, v in all_edges:
                if (u in members) != (v in members):
                    start, end = (u, v) if u in members else (v, u)
                    weights.append(_edge_weight(master, start, end))
        result.append(
            FixedComponent(
                vertices=face,
                weight_value=s_value,
                down_weights=tuple(sorted(w for w in weights if w < 0)),
                up_weights=tuple(sorted(w for w in weights if w > 0)),
                simple=simple,
            )
        )
    return result


def _changes_at(master: MasterPolytope, below: Fraction, above: Fraction) -> bool:
    return quotient_of_parameter(master, below) != quotient_of_parameter(master, above)


def walls_by_vertex_heights(master: MasterPolytope) -> List[Fraction]:
    """Vertex heights in (0, 1) across which the quotient fan changes."""
    heights = master.interior_heights
    bounds = [Fraction(0)] + list(heights) + [Fraction(1)]
    found = []
    for i, h in enumerate(heights, start=1):
        below = (bounds[i - 1] + h) / 2
        above = (h + bounds[i + 1]) / 2
        if _changes_at(master, below, above):
            found.append(h)
    return found


def walls_by_bisection(master: MasterPolytope, initial_intervals: int = 8) -> List[Fraction]:
    """
    Locate fan changes by recursive bisection, independent of the vertex list.

    Every wall is a vertex height whose denominator is at most the Hadamard
    bound D, so two walls are at least 1/D^2 apart; an interval narrower than
    1/(2 D^2) holds at most one, recovered with limit_denominator(D).
    """
    bound = master.hadamard_bound()
    lo = Fraction(1, 2 * bound)
    hi = 1 - lo
    width = Fraction(1, 2 * bound * bound)
    cache: Dict[Fraction, Fan] = {}

    def fan_at(s: Fraction) -> Fan:
        if s not in cache:
            cache[s] = quotient_of_parameter(master, s)
        return cache[s]

    found: Set[Fraction] = set()
    stack = []
    points = [lo + (hi - lo) * Fraction(k, initial_intervals) for k in range(initial_intervals + 1)]
    stack.extend(zip(points, points[1:]))
    while stack:
        left, right = stack.pop()
        if fan_at(left) == fan_at(right):
            continue
        if right - left < width:
            found.add(((left + right) / 2).limit_denominator(bound))
            continue
        middle = (left + right) / 2
        stack.append((left, middle))
        stack.append((middle, right))
    return sorted(found)


def compute_walls(master: MasterPolytope) -> List[Wall]:
    """
    Walls in increasing s, found by vertex heights and by bisection.

    Raises:
        OracleMismatch: the two methods disagree
    """
    by_heights = walls_by_vertex_heights(master)
    by_bisection = walls_by_bisection(master)
    if by_heights != by_bisection:
        raise OracleMismatch(
            "wall methods disagree",
            vertex_heights=[str(s) for s in by_heights],
            bisection=[str(s) for s in by_bisection],
        )
    walls = [Wall(s, tuple(fixed_components_at(master, s))) for s in by_heights]
    logger.info("walls: %s", [str(w.s_value) for w in walls])
    return walls
