"""Bigraded section data R = sum H^0(aA + bE) and multiplication surjectivity."""

import logging
from dataclasses import dataclass, field
from itertools import combinations_with_replacement
from typing import Dict, FrozenSet, Iterator, List, Optional, Tuple

from src.errors import ValidationError
from src.geometry import LatticePolytope, lattice_points, minkowski_points
from src.geometry.rational import IntVec
from src.toric import KodairaSplit, divisor_polytope

logger = logging.getLogger(__name__)

Degree = Tuple[int, int]


@dataclass(frozen=True)
class SectionEntry:
    """Polytope and lattice points of aA + bE."""

    polytope: LatticePolytope
    points: FrozenSet[IntVec]

    @property
    def h0(self) -> int:
        return len(self.points)


@dataclass
class SectionTable:
    """
    Entries for every (a, b) with a + b <= d_max.

    Scaled degrees beyond d_max are computed on first lookup and cached.
    """

    split: KodairaSplit
    d_max: int
    entries: Dict[Degree, SectionEntry] = field(default_factory=dict)

    def __getitem__(self, degree: Degree) -> SectionEntry:
        if degree not in self.entries:
            self.entries[degree] = self.compute(degree)
        return self.entries[degree]

    def compute(self, degree: Degree) -> SectionEntry:
        a, b = degree
        polytope = divisor_polytope(a * self.split.ample + b * self.split.exceptional)
        return SectionEntry(polytope, lattice_points(polytope))

    def h0(self, a: int, b: int) -> int:
        return self[(a, b)].h0


def build_section_table(split: KodairaSplit, d_max: int = 6) -> SectionTable:
    """
    Tabulate H^0(X, aA + bE) as lattice points.

    Args:
        split: the Kodaira split providing A and E
        d_max: total degree bound (at least 2)

    Returns:
        Table with an entry for every (a, b) with a + b <= d_max
    """
    if d_max < 2:
        raise ValidationError("section table needs d_max >= 2", d_max=d_max)
    table = SectionTable(split=split, d_max=d_max)
    for total in range(d_max + 1):
        for b in range(total + 1):
            table.entries[(total - b, b)] = table.compute((total - b, b))
    logger.debug("section table up to degree %d: %d entries", d_max, len(table.entries))
    return table


@dataclass(frozen=True)
class PairFailure:
    """A product R_v1 * R_v2 missing ``missing`` from R_{v1+v2} (scaled degrees)."""

    chamber: int
    first: Degree
    second: Degree
    missing: IntVec


@dataclass
class SurjectivityReport:
    chamber: int
    scaling: int
    pairs_checked: int = 0
    nontrivial_pairs: int = 0
    failures: List[PairFailure] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures and self.nontrivial_pairs > 0


def in_chamber(degree: Degree, chamber: int) -> bool:
    """Chamber 1 is the closed side b <= a, chamber 2 is a <= b."""
    a, b = degree
    return b <= a if chamber == 1 else a <= b


def _compare(table: SectionTable, chamber: int, first: Degree, second: Degree) -> Optional[PairFailure]:
    total = (first[0] + second[0], first[1] + second[1])
    products = minkowski_points(table[first].points, table[second].points)
    missing = sorted(table[total].points - products)
    if missing:
        return PairFailure(chamber, first, second, missing[0])
    return None


def _chamber_pairs(table: SectionTable, chamber: int) -> Iterator[Tuple[Degree, Degree]]:
    vectors = [(a, s - a) for s in range(table.d_max + 1) for a in range(s, -1, -1) if in_chamber((a, s - a), chamber)]
    for v1, v2 in combinations_with_replacement(vectors, 2):
        if sum(v1) + sum(v2) <= table.d_max:
            yield v1, v2


def _scaled(v: Degree, scaling: int) -> Degree:
    return (scaling * v[0], scaling * v[1])


def check_multiplication_surjectivity(table: SectionTable, chamber: int, scaling: int = 1) -> SurjectivityReport:
    """
    Check R_{k v1} (x) R_{k v2} -> R_{k(v1+v2)} is onto for chamber vectors v1, v2.

    Pairs are unordered and limited to deg v1 + deg v2 <= d_max at every
    scaling; the scaled degrees are looked up in the table on demand.

    Args:
        table: section table
        chamber: 1 (b <= a) or 2 (a <= b)
        scaling: the multiple k

    Returns:
        Report listing every failing pair with one missing lattice point
    """
    _check_arguments(chamber, scaling)
    report = SurjectivityReport(chamber=chamber, scaling=scaling)
    for v1, v2 in _chamber_pairs(table, chamber):
        report.pairs_checked += 1
        if any(v1) and any(v2):
            report.nontrivial_pairs += 1
        failure = _compare(table, chamber, _scaled(v1, scaling), _scaled(v2, scaling))
        if failure is not None:
            report.failures.append(failure)
    return report


def _check_arguments(chamber: int, scaling: int):
    if chamber not in (1, 2):
        raise ValidationError("chamber must be 1 or 2", chamber=chamber)
    if scaling < 1:
        raise ValidationError("scaling must be positive", scaling=scaling)


def _surjective_at(table: SectionTable, chamber: int, scaling: int) -> bool:
    nontrivial = False
    for v1, v2 in _chamber_pairs(table, chamber):
        if _compare(table, chamber, _scaled(v1, scaling), _scaled(v2, scaling)) is not None:
            return False
        nontrivial = nontrivial or (any(v1) and any(v2))
    return nontrivial


def least_surjective_scaling(table: SectionTable, scaling_max: int = 8) -> Optional[int]:
    """Least k <= scaling_max at which both chambers pass, None if there is none."""
    for k in range(1, scaling_max + 1):
        if all(_surjective_at(table, chamber, k) for chamber in (1, 2)):
            logger.debug("multiplication surjective at scaling %d", k)
            return k
    return None


def cross_chamber_findings(table: SectionTable) -> List[PairFailure]:
    """
    Products of a vector strictly inside chamber 1 with one strictly inside
    chamber 2. Surjectivity is not expected there; failures are informational.
    """
    findings = []
    for s1 in range(1, table.d_max):
        for s2 in range(1, table.d_max - s1 + 1):
            for b1 in range(s1 + 1):
                first = (s1 - b1, b1)
                if not first[1] < first[0]:
                    continue
                for a2 in range(s2 + 1):
                    second = (a2, s2 - a2)
                    if not second[0] < second[1]:
                        continue
                    failure = _compare(table, 0, first, second)
                    if failure is not None:
                        findings.append(failure)
    return findings
