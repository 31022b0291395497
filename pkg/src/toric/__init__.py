"""Toric varieties, divisors, refinement morphisms and the Kodaira split."""

from .ampleness import AmplenessWitness, is_ample
from .descent import DescentTrial, TwistDescentReport, verify_twist_descent
from .kodaira import KodairaSplit, kodaira_split
from .morphism import ToricMorphism, check_neg_exceptional, check_refinement, pullback
from .variety import ToricVariety, TorusDivisor, divisor_polytope

__all__ = [
    "AmplenessWitness",
    "is_ample",
    "DescentTrial",
    "TwistDescentReport",
    "verify_twist_descent",
    "KodairaSplit",
    "kodaira_split",
    "ToricMorphism",
    "check_neg_exceptional",
    "check_refinement",
    "pullback",
    "ToricVariety",
    "TorusDivisor",
    "divisor_polytope",
]
