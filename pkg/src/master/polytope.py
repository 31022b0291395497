"""The master polytope Q with its weight form and the quotients of its slices."""

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import isqrt
from typing import List, Tuple

from src.errors import EmptySlice, InternalInconsistency, Unbounded, ValidationError
from src.geometry import Fan, HalfSpace, LatticePolytope, fix_coordinate, normal_fan, slice_polytope, vertex_enumeration
from src.geometry.rational import IntVec, Scalar, as_fraction, common_denominator
from src.toric import KodairaSplit, TorusDivisor

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class MasterPolytope:
    """
    Q = {(u, s) : <u, v> >= -((1 - s) A_v + s E_v) for every ray v, 0 <= s <= 1}.

    The weight form is the last coordinate s. ``q`` is the least positive
    integer making q * Q a lattice polytope.
    """

    split: KodairaSplit
    polytope: LatticePolytope
    q: int

    @property
    def rank(self) -> int:
        """Lattice rank n of the source variety (Q lives in rank n + 1)."""
        return self.polytope.dim_ambient - 1

    @property
    def weight_axis(self) -> int:
        return self.rank

    @property
    def weight_form(self) -> IntVec:
        return tuple(int(k == self.weight_axis) for k in range(self.rank + 1))

    @property
    def vertices(self):
        return self.polytope.vertices

    def height(self, point) -> Fraction:
        return Fraction(point[self.weight_axis])

    @cached_property
    def interior_heights(self) -> Tuple[Fraction, ...]:
        """Sorted weight values of the vertices strictly between 0 and 1."""
        return tuple(sorted({self.height(v) for v in self.vertices if 0 < self.height(v) < 1}))

    def slice_at(self, s: Scalar) -> LatticePolytope:
        """Q cut by {w = s}, still in rank n + 1."""
        return slice_polytope(self.polytope, self.weight_form, s)

    def projected_slice(self, s: Scalar) -> LatticePolytope:
        """The slice at s with the weight coordinate dropped."""
        return fix_coordinate(self.polytope, self.weight_axis, s)

    def divisor_at(self, s: Scalar) -> TorusDivisor:
        """(1 - s) A + s E."""
        s = as_fraction(s)
        return (1 - s) * self.split.ample + s * self.split.exceptional

    def lattice_model(self) -> LatticePolytope:
        """q * Q."""
        return self.polytope.dilate(self.q)

    def hadamard_bound(self) -> int:
        """
        Integer D bounding the denominator of every vertex height.

        Product of the n + 1 largest integer-rounded-up row norms, times the
        common denominator of the offsets.
        """
        norms = sorted((isqrt(sum(c * c for c in h.normal) - 1) + 1 for h in self.polytope.hrep), reverse=True)
        bound = 1
        for norm in norms[: self.rank + 1]:
            bound *= norm
        return bound * common_denominator(h.offset for h in self.polytope.hrep)


def master_halfspaces(split: KodairaSplit) -> List[HalfSpace]:
    rows = []
    for ray, a, e in zip(split.ample.owner.rays, split.ample.coeffs, split.exceptional.coeffs):
        rows.append(HalfSpace.from_rational(tuple(ray) + (e - a,), a))
    dim = len(split.ample.owner.rays[0]) + 1
    lower = tuple(int(k == dim - 1) for k in range(dim))
    rows.append(HalfSpace(lower, 0))
    rows.append(HalfSpace(tuple(-c for c in lower), 1))
    return rows


def build_master_polytope(split: KodairaSplit) -> MasterPolytope:
    """
    Enumerate the master polytope of a Kodaira split.

    Raises:
        ValidationError: E is zero (there is nothing to vary)
        InternalInconsistency: Q came out unbounded
    """
    if split.exceptional.is_zero:
        raise ValidationError("master polytope needs a nonzero exceptional divisor")
    dim = split.ample.owner.lattice_rank + 1
    try:
        polytope = vertex_enumeration(master_halfspaces(split), dim)
    except Unbounded as exc:
        raise InternalInconsistency("master polytope is unbounded", detail=str(exc)) from exc
    q = common_denominator(c for v in polytope.vertices for c in v)
    logger.info("master polytope: %d vertices, q = %d", len(polytope.vertices), q)
    return MasterPolytope(split=split, polytope=polytope, q=q)


def quotient_of_parameter(master: MasterPolytope, s: Scalar) -> Fan:
    """
    The GIT quotient at the character through (1 - s, s): the normal fan of
    the u-projection of the slice of Q at w = s.

    Raises:
        ValidationError: s outside (0, 1)
        EmptySlice: the slice is empty
    """
    s = as_fraction(s)
    if not 0 < s < 1:
        raise ValidationError("parameter must lie strictly between 0 and 1", s=s)
    projected = master.projected_slice(s)
    if projected.is_empty:
        raise EmptySlice("slice of the master polytope is empty", s=s)
    return normal_fan(projected)
