"""
Independent re-validation of a factorization report.

Every claim is re-derived from the echoed input; the first disagreement
raises CertificateMismatch with the JSON path of the offending claim.
"""

import json
import logging
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Any, List, Optional, Tuple

from src.cli.schemas import FactorizationReport, FanModel, RayCoefficient
from src.errors import CertificateMismatch, FactorizationError
from src.geometry import Fan, recognize_star_subdivision, remove_ray, star_subdivide
from src.master import (
    GenerationReport,
    MasterPolytope,
    PairFailure,
    build_master_polytope,
    build_master_resolution,
    build_section_table,
    check_generation,
    check_multiplication_surjectivity,
    cross_chamber_findings,
    least_surjective_scaling,
    quotient_of_parameter,
    twist_descent_at,
    vertex_cones,
)
from src.service import DescentOutcome, Deviations, Problem, StepOutline, descent_parameter, prepare_problem
from src.toric import KodairaSplit, TorusDivisor, check_neg_exceptional, is_ample, pullback
from src.vgit import StabilityCertificate, StepKind, compute_walls, stability_certificate

logger = logging.getLogger(__name__)


@dataclass
class CheckResult:
    """Paths of every claim that was re-derived successfully."""

    claims: List[str] = field(default_factory=list)

    def expect(self, path: str, expected: Any, found: Any):
        if expected != found:
            raise CertificateMismatch(path, expected=expected, found=found)
        self.claims.append(path)


@contextmanager
def _at(path: str):
    """Report any failure while re-deriving a claim as a mismatch at ``path``."""
    try:
        yield
    except CertificateMismatch:
        raise
    except (FactorizationError, ValueError) as exc:
        raise CertificateMismatch(path, expected="re-derivable claim", found=str(exc)) from exc


def _divisor(owner, entries: List[RayCoefficient]) -> TorusDivisor:
    return TorusDivisor.from_mapping(owner, {tuple(e.ray): e.coefficient for e in entries})


def _fan(model: FanModel) -> Fan:
    return model.to_fan()


def _check_kodaira(report: FactorizationReport, problem: Problem, result: CheckResult) -> KodairaSplit:
    claim = report.kodaira
    if claim is None:
        raise CertificateMismatch("kodaira", expected="Kodaira split", found=None)
    morphism = problem.morphism
    with _at("kodaira"):
        ample = _divisor(problem.source, claim.ample)
        exceptional = _divisor(problem.source, claim.exceptional)
        pulled = pullback(morphism, problem.divisor)
        claimed_divisor = _divisor(problem.target, claim.divisor)
        claimed_pullback = _divisor(problem.source, claim.pullback)
    result.expect("kodaira.divisor", problem.divisor, claimed_divisor)
    result.expect("kodaira.pullback", pulled, claimed_pullback)
    result.expect("kodaira.m", claim.m * pulled, ample + exceptional)
    witness = is_ample(ample)
    result.expect("kodaira.ample_ok", True, bool(witness))
    result.expect("kodaira.ample_ok", bool(witness), claim.ample_ok)
    result.expect("kodaira.exceptional", True, exceptional.is_effective)
    support_ok = set(exceptional.support()) == set(morphism.exceptional_rays)
    result.expect("kodaira.exceptional_support_ok", support_ok, claim.exceptional_support_ok)
    result.expect("kodaira.exceptional_support_ok", True, support_ok)
    neg = check_neg_exceptional(morphism, exceptional)
    result.expect("kodaira.neg_exceptional", neg, claim.neg_exceptional)
    return KodairaSplit(morphism, problem.divisor, claim.m, ample, exceptional, witness, neg)


def _check_master(report: FactorizationReport, master: MasterPolytope, result: CheckResult):
    claim = report.master
    if claim is None:
        raise CertificateMismatch("master", expected="master polytope", found=None)
    result.expect("master.vertices", set(master.vertices), {tuple(v) for v in claim.vertices})
    result.expect("master.q", master.q, claim.q)
    result.expect("master.interior_heights", list(master.interior_heights), claim.interior_heights)
    derived = [(tuple(c.vertex), tuple(c.rays), c.index) for c in vertex_cones(master.lattice_model())]
    found = [(tuple(c.vertex), tuple(tuple(r) for r in c.rays), c.index) for c in claim.vertex_cones]
    result.expect("master.vertex_cones", sorted(derived), sorted(found))


def _check_walls(report: FactorizationReport, master: MasterPolytope, result: CheckResult):
    walls = compute_walls(master)
    result.expect("walls", [w.s_value for w in walls], [w.s_value for w in report.walls])
    for i, (wall, claim) in enumerate(zip(walls, report.walls)):
        derived = [
            (c.vertices, c.weight_value, c.down_weights, c.up_weights, c.simple) for c in wall.fixed_components
        ]
        found = [
            (
                tuple(tuple(v) for v in c.vertices),
                c.weight_value,
                tuple(c.down_weights),
                tuple(c.up_weights),
                c.simple,
            )
            for c in claim.fixed_components
        ]
        result.expect(f"walls[{i}].fixed_components", derived, found)
        previous = report.walls[i - 1].s_value if i else 0
        following = report.walls[i + 1].s_value if i + 1 < len(report.walls) else 1
        result.expect(f"walls[{i}].below", True, previous < claim.below < claim.s_value)
        result.expect(f"walls[{i}].above", True, claim.s_value < claim.above < following)
        with _at(f"walls[{i}].fan_below"):
            result.expect(f"walls[{i}].fan_below", quotient_of_parameter(master, claim.below), _fan(claim.fan_below))
        with _at(f"walls[{i}].fan_above"):
            result.expect(f"walls[{i}].fan_above", quotient_of_parameter(master, claim.above), _fan(claim.fan_above))


def _check_steps(report: FactorizationReport, result: CheckResult):
    """Each step must be the star subdivision it claims, with the claimed weights."""
    for i, wall in enumerate(report.walls):
        for j, step in enumerate(wall.steps):
            path = f"walls[{i}].steps[{j}]"
            with _at(path):
                source, target = _fan(step.source), _fan(step.target)
                fine, coarse = (source, target) if step.kind == StepKind.BLOWDOWN.value else (target, source)
                certificate = recognize_star_subdivision(fine, coarse)
            result.expect(f"{path}.ray", certificate.ray, tuple(step.ray))
            result.expect(f"{path}.generators", certificate.generators, tuple(tuple(g) for g in step.generators))
            result.expect(f"{path}.weights", certificate.weights, tuple(step.weights))
            result.expect(f"{path}.identity", True, certificate.identity_holds())


def _replay(report: FactorizationReport, problem: Problem, result: CheckResult):
    """Replay the recorded ray moves wall by wall; the last fan must be fan(Y)."""
    current = problem.source.fan
    for i, wall in enumerate(report.walls):
        result.expect(f"walls[{i}].fan_below", _fan(wall.fan_below), current)
        for j, step in enumerate(wall.steps):
            with _at(f"walls[{i}].steps[{j}]"):
                if step.kind == StepKind.BLOWDOWN.value:
                    current = remove_ray(current, step.ray)
                else:
                    current = star_subdivide(current, step.ray)
        result.expect(f"walls[{i}].fan_above", _fan(wall.fan_above), current)
    result.expect("composed_fan", problem.target.fan, current)
    result.expect("composed_fan", _fan(report.composed_fan), current)


def _check_chambers(
    report: FactorizationReport, master: MasterPolytope, problem: Problem, result: CheckResult
) -> List[StabilityCertificate]:
    """Chamber fans and one stability certificate per sampled parameter, in order."""
    if not report.chambers:
        raise CertificateMismatch("chambers", expected="at least one chamber", found=[])
    walls = [w.s_value for w in report.walls]
    result.expect("chambers", walls, [c.hi for c in report.chambers[:-1]])
    result.expect("chambers[0].fan", problem.source.fan, _fan(report.chambers[0].fan))
    result.expect(f"chambers[{len(report.chambers) - 1}].fan", problem.target.fan, _fan(report.chambers[-1].fan))
    for i, chamber in enumerate(report.chambers):
        result.expect(f"chambers[{i}].parameters", True, bool(chamber.parameters))
        fan = _fan(chamber.fan)
        for s in chamber.parameters:
            result.expect(f"chambers[{i}].parameters", True, chamber.lo < s < chamber.hi)
            with _at(f"chambers[{i}].fan"):
                result.expect(f"chambers[{i}].fan", quotient_of_parameter(master, s), fan)

    samples = [s for chamber in report.chambers for s in chamber.parameters]
    result.expect("stability", samples, [claim.parameter for claim in report.stability])
    certificates = []
    for i, (s, claim) in enumerate(zip(samples, report.stability)):
        path = f"stability[{i}]"
        with _at(path):
            certificate = stability_certificate(master, s, walls)
        result.expect(f"{path}.stable_equals_semistable", certificate.stable_equals_semistable, claim.stable_equals_semistable)
        result.expect(f"{path}.free_action", certificate.free_action, claim.free_action)
        result.expect(f"{path}.witnesses", [w.weight for w in certificate.witnesses], [w.weight for w in claim.witnesses])
        result.expect(f"{path}.quotient_cone_indices", list(certificate.quotient_cone_indices), claim.quotient_cone_indices)
        certificates.append(certificate)
    return certificates


def _check_sections(
    report: FactorizationReport, master: MasterPolytope, result: CheckResult
) -> Tuple[Optional[int], List[PairFailure], GenerationReport]:
    claim = report.surjectivity
    if claim is None:
        raise CertificateMismatch("surjectivity", expected="surjectivity report", found=None)
    table = build_section_table(master.split, claim.d_max)
    least = least_surjective_scaling(table, claim.scaling_max)
    result.expect("surjectivity.least_scaling", least, claim.least_scaling)
    scaling_one = [f for chamber in (1, 2) for f in check_multiplication_surjectivity(table, chamber, 1).failures]
    failures = [(f.chamber, list(f.first), list(f.second), list(f.missing)) for f in scaling_one]
    found = [(f.chamber, f.first, f.second, f.missing) for f in claim.scaling_one_failures]
    result.expect("surjectivity.scaling_one_failures", failures, found)
    findings = [(list(f.first), list(f.second), list(f.missing)) for f in cross_chamber_findings(table)]
    result.expect(
        "surjectivity.cross_chamber_findings",
        findings,
        [(f.first, f.second, f.missing) for f in claim.cross_chamber_findings],
    )
    generation = report.generation
    if generation is None:
        raise CertificateMismatch("generation", expected="generation report", found=None)
    result.expect("generation.scaling", least or 1, generation.scaling)
    derived = check_generation(master, generation.scaling)
    result.expect("generation.degree", derived.degree, generation.degree)
    result.expect("generation.missing", derived.missing, [tuple(v) for v in generation.missing])
    return least, scaling_one, derived


def _check_descent(report: FactorizationReport, master: MasterPolytope, result: CheckResult) -> List[DescentOutcome]:
    """One twist descent entry for the first and one for the last chamber."""
    result.expect("twist_descent", [1, 2], [claim.chamber for claim in report.twist_descent])
    resolution = build_master_resolution(master, [w.s_value for w in report.walls])
    outcomes = []
    for i, (claim, chamber) in enumerate(zip(report.twist_descent, (report.chambers[0], report.chambers[-1]))):
        path = f"twist_descent[{i}]"
        result.expect(f"{path}.parameter", descent_parameter(chamber.parameters), claim.parameter)
        result.expect(f"{path}.centers", list(resolution.centers), [tuple(c) for c in claim.centers])
        derived = twist_descent_at(resolution, claim.parameter, claim.n_max)
        result.expect(f"{path}.least_n", derived.least_n, claim.least_n)
        fan = FanModel.from_fan(derived.quotient_fan) if derived.quotient_fan is not None else None
        result.expect(f"{path}.quotient_fan", fan, claim.quotient_fan)
        outcomes.append((claim.chamber, claim.parameter, _fan(chamber.fan), derived))
    return outcomes


def _step_outlines(report: FactorizationReport) -> List[StepOutline]:
    return [
        (step.kind, tuple(step.ray), _fan(step.source), _fan(step.target))
        for wall in report.walls
        for step in wall.steps
    ]


def _warning_keys(warnings) -> List[str]:
    """Warnings as an order-free multiset; reordered steps reorder their warnings."""
    return sorted(json.dumps(w.model_dump(mode="json"), sort_keys=True) for w in warnings)


def check_report(report: FactorizationReport) -> CheckResult:
    """
    Re-derive every certificate of a report from its echoed input.

    The warning list is rebuilt from the re-derived data as well, so a
    report with a deviation removed fails at ``warnings``.

    Args:
        report: a parsed report produced by run_factorize

    Returns:
        The list of verified claim paths

    Raises:
        CertificateMismatch: the first claim that fails, with its path
    """
    result = CheckResult()
    with _at("input"):
        problem = prepare_problem(report.input)
    if report.trivial:
        result.expect("trivial", (), problem.morphism.exceptional_rays)
        result.expect("walls", [], report.steps())
        result.expect("composed_fan", problem.target.fan, _fan(report.composed_fan))
        result.expect("warnings", [], report.warnings)
        return result
    split = _check_kodaira(report, problem, result)
    with _at("master"):
        master = build_master_polytope(split)
    _check_master(report, master, result)
    _check_walls(report, master, result)
    _check_steps(report, result)
    _replay(report, problem, result)
    certificates = _check_chambers(report, master, problem, result)
    least, scaling_one, generation = _check_sections(report, master, result)
    descents = _check_descent(report, master, result)
    expected = Deviations(
        least_scaling=least,
        scaling_max=report.surjectivity.scaling_max,
        d_max=report.surjectivity.d_max,
        scaling_one=scaling_one,
        generation=generation,
        stability=certificates,
        steps=_step_outlines(report),
        descents=descents,
    ).warnings()
    result.expect("warnings", _warning_keys(expected), _warning_keys(report.warnings))
    logger.info("report verified: %d claims", len(result.claims))
    return result
