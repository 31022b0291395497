"""Refinement morphisms between toric varieties, pullback and relative negativity."""

import logging
from dataclasses import dataclass
from typing import Tuple

from src.errors import NotRefinement, ValidationError
from src.geometry.rational import IntVec, dot

from .ampleness import strictly_convex_across
from .variety import ToricVariety, TorusDivisor

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ToricMorphism:
    """
    Identity-lattice morphism from a refining fan to a coarser one.

    ``cone_map[i]`` is the target cone containing source cone ``i``.
    """

    source: ToricVariety
    target: ToricVariety
    cone_map: Tuple[int, ...]

    @property
    def exceptional_rays(self) -> Tuple[IntVec, ...]:
        target = set(self.target.rays)
        return tuple(ray for ray in self.source.rays if ray not in target)

    @property
    def is_identity(self) -> bool:
        return self.source.fan == self.target.fan

    def target_cone_of_ray(self, ray) -> int:
        index = self.source.fan.ray_index(ray)
        for cone, image in enumerate(self.cone_map):
            if index in self.source.fan.cones[cone]:
                return image
        raise ValidationError("ray lies in no source cone", ray=tuple(ray))


def check_refinement(source: ToricVariety, target: ToricVariety) -> ToricMorphism:
    """
    Prove that every cone of ``source`` lies in a cone of ``target``.

    Args:
        source: the variety X
        target: the variety Y, same lattice rank

    Returns:
        The morphism X -> Y with its cone map

    Raises:
        NotRefinement: the first source cone found in no target cone
    """
    if source.lattice_rank != target.lattice_rank:
        raise NotRefinement("lattice ranks differ", source=source.lattice_rank, target=target.lattice_rank)
    cone_map = []
    for i, cone in enumerate(source.fan.all_cones):
        image = next(
            (j for j, big in enumerate(target.fan.all_cones) if all(big.contains(ray) for ray in cone.rays)),
            None,
        )
        if image is None:
            raise NotRefinement("source cone lies in no target cone", cone=cone.rays)
        cone_map.append(image)
    morphism = ToricMorphism(source, target, tuple(cone_map))
    logger.debug("refinement with exceptional rays %s", morphism.exceptional_rays)
    return morphism


def pullback(morphism: ToricMorphism, divisor: TorusDivisor) -> TorusDivisor:
    """
    f*D: the coefficient at each source ray v is -psi_D(v).

    Raises:
        NotCartier: psi_D is not linear on some target cone
    """
    if divisor.owner != morphism.target:
        raise ValidationError("divisor does not live on the target")
    coeffs = []
    for ray in morphism.source.rays:
        character = divisor.require_character(morphism.target_cone_of_ray(ray))
        coeffs.append(-dot(character, ray))
    return TorusDivisor(morphism.source, tuple(coeffs))


def check_neg_exceptional(morphism: ToricMorphism, exceptional: TorusDivisor) -> bool:
    """
    Relative ampleness of -E.

    True iff, over every target cone, the support function of -E is strictly
    convex across each interior wall of the source cones subdividing it.
    """
    negative = -exceptional
    fan = morphism.source.fan
    for wall in fan.walls():
        if morphism.cone_map[wall.left] != morphism.cone_map[wall.right]:
            continue
        if not strictly_convex_across(negative, wall.left, wall.right):
            return False
    return True
