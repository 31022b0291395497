"""Search for a split m * f*D = A + E with A ample and E effective exceptional."""

import logging
from dataclasses import dataclass
from itertools import product
from typing import Iterator, Tuple

from src.errors import SearchExhausted, ValidationError

from .ampleness import AmplenessWitness, is_ample
from .morphism import ToricMorphism, check_neg_exceptional, pullback
from .variety import TorusDivisor

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class KodairaSplit:
    """
    m * f*D = A + E with its certificates.

    ``A`` is ample on the source, ``E`` is effective with support exactly the
    exceptional rays and ``-E`` is relatively ample over the target.
    """

    morphism: ToricMorphism
    divisor: TorusDivisor
    m: int
    ample: TorusDivisor
    exceptional: TorusDivisor
    ample_witness: AmplenessWitness
    neg_exceptional: bool

    @property
    def total(self) -> TorusDivisor:
        """B = A + E."""
        return self.ample + self.exceptional

    @property
    def exceptional_support_ok(self) -> bool:
        return set(self.exceptional.support()) == set(self.morphism.exceptional_rays)

    def identity_holds(self) -> bool:
        return self.m * pullback(self.morphism, self.divisor) == self.total


def _coefficient_vectors(count: int, c_max: int) -> Iterator[Tuple[int, ...]]:
    """All vectors in [1, c_max]^count ordered by (sum, lexicographic)."""
    return iter(sorted(product(range(1, c_max + 1), repeat=count), key=lambda c: (sum(c), c)))


def kodaira_split(morphism: ToricMorphism, divisor: TorusDivisor, m_max: int = 12, c_max: int = 6) -> KodairaSplit:
    """
    Find the least m and then the lightest E making m * f*D - E ample.

    Args:
        morphism: refinement f: X -> Y with at least one exceptional ray
        divisor: ample divisor D on Y
        m_max: largest multiple tried
        c_max: largest exceptional coefficient tried

    Returns:
        The first split in (m, sum of E, lexicographic E) order

    Raises:
        ValidationError: D is not ample or f has no exceptional ray
        SearchExhausted: no split within the bounds
    """
    if not is_ample(divisor):
        raise ValidationError("divisor on the target is not ample", coeffs=divisor.coeffs)
    exceptional_rays = morphism.exceptional_rays
    if not exceptional_rays:
        raise ValidationError("morphism has no exceptional ray")
    source = morphism.source
    pulled = pullback(morphism, divisor)
    prime = [source.ray_divisor(ray) for ray in exceptional_rays]
    candidates = list(_coefficient_vectors(len(prime), c_max))
    for m in range(1, m_max + 1):
        total = m * pulled
        for coeffs in candidates:
            exceptional = source.zero_divisor()
            for c, d in zip(coeffs, prime):
                exceptional = exceptional + c * d
            ample = total - exceptional
            witness = is_ample(ample)
            if witness:
                logger.info("Kodaira split found: m=%d, E=%s", m, dict(zip(exceptional_rays, coeffs)))
                return KodairaSplit(
                    morphism=morphism,
                    divisor=divisor,
                    m=m,
                    ample=ample,
                    exceptional=exceptional,
                    ample_witness=witness,
                    neg_exceptional=check_neg_exceptional(morphism, exceptional),
                )
    raise SearchExhausted("no Kodaira split within bounds", m_max=m_max, c_max=c_max)
