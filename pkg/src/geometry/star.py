"""Star subdivisions of fans and their recognition."""

import logging
from dataclasses import dataclass
from itertools import combinations
from typing import Iterator, List, Optional, Sequence, Tuple

from src.errors import NotStar, ValidationError

from .cone import Cone
from .fan import Fan
from .linalg import rank
from .rational import IntVec, RatVec, integral, is_primitive, to_ints

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class StarCertificate:
    """
    Proof that a fine fan is the star subdivision of a coarse one.

    Generators are listed by increasing weight, ties broken lexicographically.

    ``ray`` equals sum(weights[i] * generators[i]) and lies in the relative
    interior of the cone spanned by ``generators`` in the coarse fan.
    """

    ray: IntVec
    generators: Tuple[IntVec, ...]
    weights: Tuple[int, ...]

    def identity_holds(self) -> bool:
        combined = [sum(w * g[k] for w, g in zip(self.weights, self.generators)) for k in range(len(self.ray))]
        return tuple(combined) == tuple(self.ray)


def star_subdivide(fan: Fan, ray: Sequence[int]) -> Fan:
    """
    Insert ``ray`` and cone over the subdivided boundary of every cone containing it.

    Args:
        fan: fan to subdivide
        ray: primitive ray not already in the fan

    Returns:
        The star subdivision, canonicalized
    """
    ray = tuple(int(c) for c in ray)
    if not is_primitive(ray) or len(ray) != fan.dim_ambient:
        raise ValueError(f"{ray} is not a primitive vector of rank {fan.dim_ambient}")
    if ray in fan.rays:
        raise ValueError(f"{ray} is already a ray of the fan")
    dim = fan.dim_ambient
    cones: List[Tuple[IntVec, ...]] = []
    touched = False
    for cone in fan.all_cones:
        if not cone.contains(ray):
            cones.append(cone.rays)
            continue
        touched = True
        for facet in cone.facets():
            if not (facet and Cone(facet, dim).contains(ray)):
                cones.append(facet + (ray,))
    if not touched:
        raise ValueError(f"{ray} lies outside the support of the fan")
    return Fan.from_ray_sets(cones)


def _tau_candidates(ray: IntVec, link: Sequence[IntVec], dim: int) -> Iterator[Tuple[Tuple[IntVec, ...], RatVec]]:
    """Independent ray subsets whose cone holds ``ray`` in its relative interior."""
    found = []
    for size in range(2, dim + 1):
        for subset in combinations(link, size):
            if rank(subset) < size:
                continue
            cone = Cone(subset, dim)
            if cone.in_relative_interior(ray):
                found.append((subset, cone.generator_coordinates(ray)))
    found.sort(key=lambda item: (not integral(item[1]), len(item[0]), item[0]))
    return iter(found)


def remove_ray(fan: Fan, ray: Sequence[int]) -> Fan:
    """
    Undo a star subdivision: merge the star of ``ray`` back into coarser cones.

    Args:
        fan: fan containing ``ray``
        ray: the ray to remove

    Returns:
        The unique coarser fan whose star subdivision at ``ray`` is ``fan``

    Raises:
        NotStar: no such coarser fan exists
    """
    ray = tuple(int(c) for c in ray)
    if ray not in fan.rays:
        raise NotStar("ray is not part of the fan", ray=ray)
    star = [cone.rays for cone in fan.all_cones if ray in cone.rays]
    kept = [cone.rays for cone in fan.all_cones if ray not in cone.rays]
    link = sorted({r for rays in star for r in rays if r != ray})
    for tau, _ in _tau_candidates(ray, link, fan.dim_ambient):
        merged = set()
        try:
            for rays in star:
                cone = Cone(tuple(set(rays) - {ray}) + tau, fan.dim_ambient)
                merged.add(cone.rays)
            coarse = Fan.from_ray_sets(kept + sorted(merged))
            if star_subdivide(coarse, ray) == fan:
                return coarse
        except (ValueError, ValidationError):
            continue
    raise NotStar("star of the ray does not merge into a coarser fan", ray=ray)


def recognize_star_subdivision(fine: Fan, coarse: Fan) -> StarCertificate:
    """
    Identify ``fine`` as the star subdivision of ``coarse`` at a single ray.

    Args:
        fine: the refined fan (exactly one extra ray)
        coarse: the coarser fan

    Returns:
        Certificate with the ray, the generators of the minimal coarse cone
        holding it in its relative interior, and the positive integer weights

    Raises:
        NotStar: more or fewer than one extra ray, a ray on the boundary,
            non-integral weights or a cone structure mismatch
    """
    extra = sorted(set(fine.rays) - set(coarse.rays))
    if len(extra) != 1 or not set(coarse.rays) <= set(fine.rays):
        raise NotStar("fans do not differ by exactly one ray", extra=tuple(extra))
    ray = extra[0]
    certificate = _minimal_face(coarse, ray)
    if certificate is None:
        raise NotStar("extra ray has no integral expression in a simplicial coarse cone", ray=ray)
    if star_subdivide(coarse, ray) != fine:
        raise NotStar("cone structure is not the star subdivision", ray=ray)
    logger.debug("star subdivision at %s with weights %s", ray, certificate.weights)
    return certificate


def _minimal_face(coarse: Fan, ray: IntVec) -> Optional[StarCertificate]:
    for cone in coarse.all_cones:
        if not cone.contains(ray):
            continue
        if not cone.is_simplicial:
            return None
        coords = cone.generator_coordinates(ray)
        support = sorted(((g, c) for g, c in zip(cone.rays, coords) if c != 0), key=lambda item: (item[1], item[0]))
        if len(support) < 2 or not integral([c for _, c in support]):
            return None
        return StarCertificate(
            ray=ray,
            generators=tuple(g for g, _ in support),
            weights=to_ints([c for _, c in support]),
        )
    return None
