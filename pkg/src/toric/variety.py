"""Complete toric varieties and their torus-invariant divisors."""

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Mapping, Optional, Sequence, Tuple

from src.errors import NotCartier, ValidationError
from src.geometry import Fan, HalfSpace, LatticePolytope, vertex_enumeration
from src.geometry.linalg import solve_unique
from src.geometry.rational import IntVec, RatVec, Scalar, as_fraction, dot


@dataclass(frozen=True)
class ToricVariety:
    """A complete toric variety, stored as its fan."""

    fan: Fan
    name: str = ""

    def __post_init__(self):
        if not self.fan.complete:
            raise ValidationError("toric variety needs a complete fan", name=self.name, rays=self.fan.rays)

    @property
    def lattice_rank(self) -> int:
        return self.fan.dim_ambient

    @property
    def rays(self) -> Tuple[IntVec, ...]:
        return self.fan.rays

    @property
    def simplicial(self) -> bool:
        return self.fan.simplicial

    def divisor(self, coeffs: Sequence[Scalar]) -> "TorusDivisor":
        return TorusDivisor(self, tuple(coeffs))

    def zero_divisor(self) -> "TorusDivisor":
        return TorusDivisor(self, (0,) * len(self.rays))

    def ray_divisor(self, ray: Sequence[int]) -> "TorusDivisor":
        """The prime divisor D_ray."""
        index = self.fan.ray_index(ray)
        return TorusDivisor(self, tuple(int(i == index) for i in range(len(self.rays))))

    def __eq__(self, other) -> bool:
        return isinstance(other, ToricVariety) and self.fan == other.fan

    def __hash__(self) -> int:
        return hash(self.fan)


@dataclass(frozen=True)
class TorusDivisor:
    """
    A Q-divisor sum(coeffs[i] * D_i) on ``owner``, one coefficient per ray
    in the owner's canonical ray order.
    """

    owner: ToricVariety
    coeffs: RatVec

    def __post_init__(self):
        coeffs = tuple(as_fraction(c) for c in self.coeffs)
        if len(coeffs) != len(self.owner.rays):
            raise ValidationError(
                "divisor needs one coefficient per ray",
                expected=len(self.owner.rays),
                found=len(coeffs),
            )
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def from_mapping(cls, owner: ToricVariety, mapping: Mapping[Tuple[int, ...], Scalar]) -> "TorusDivisor":
        """Build from {ray: coefficient}; absent rays get 0."""
        unknown = set(map(tuple, mapping)) - set(owner.rays)
        if unknown:
            raise ValidationError("divisor refers to rays outside the fan", rays=sorted(unknown))
        return cls(owner, tuple(mapping.get(ray, 0) for ray in owner.rays))

    def as_mapping(self) -> Dict[IntVec, Fraction]:
        return dict(zip(self.owner.rays, self.coeffs))

    def coefficient(self, ray: Sequence[int]) -> Fraction:
        return self.coeffs[self.owner.fan.ray_index(ray)]

    def _check_owner(self, other: "TorusDivisor"):
        if self.owner != other.owner:
            raise ValidationError("divisors live on different varieties")

    def __add__(self, other: "TorusDivisor") -> "TorusDivisor":
        self._check_owner(other)
        return TorusDivisor(self.owner, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "TorusDivisor") -> "TorusDivisor":
        self._check_owner(other)
        return TorusDivisor(self.owner, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "TorusDivisor":
        return TorusDivisor(self.owner, tuple(-a for a in self.coeffs))

    def __mul__(self, factor: Scalar) -> "TorusDivisor":
        factor = as_fraction(factor)
        return TorusDivisor(self.owner, tuple(a * factor for a in self.coeffs))

    __rmul__ = __mul__

    @property
    def is_effective(self) -> bool:
        return all(c >= 0 for c in self.coeffs)

    @property
    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def support(self) -> Tuple[IntVec, ...]:
        return tuple(ray for ray, c in zip(self.owner.rays, self.coeffs) if c != 0)

    def cone_character(self, cone: int) -> Optional[RatVec]:
        """
        The character m with <m, v> = -D_v on every ray v of the cone.

        Returns:
            The unique solution, or None when the support function is not
            linear on the cone (the divisor is not Q-Cartier there)
        """
        rays = self.owner.fan.cone_rays(cone)
        index = self.owner.fan.cones[cone]
        return solve_unique(rays, [-self.coeffs[i] for i in index])

    def require_character(self, cone: int) -> RatVec:
        character = self.cone_character(cone)
        if character is None:
            raise NotCartier("support function is not linear on a cone", cone=self.owner.fan.cone_rays(cone))
        return character

    def support_value(self, point: Sequence[int]) -> Fraction:
        """psi_D(point), evaluated on any cone containing the point."""
        cones = self.owner.fan.cones_containing(point)
        if not cones:
            raise ValidationError("point lies outside the support of the fan", point=tuple(point))
        return dot(self.require_character(cones[0]), point)

    def polytope(self) -> LatticePolytope:
        return divisor_polytope(self)


def divisor_polytope(divisor: TorusDivisor) -> LatticePolytope:
    """
    The polytope {u : <u, v> >= -D_v for every ray v}.

    Bounded because the owner fan is complete.
    """
    hrep = [HalfSpace(ray, coeff) for ray, coeff in zip(divisor.owner.rays, divisor.coeffs)]
    return vertex_enumeration(hrep, divisor.owner.lattice_rank)
