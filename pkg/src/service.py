"""Factorization service that orchestrates all pipeline stages."""

import logging
from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from src.cli.schemas import (
    ChamberModel,
    DescentTrialModel,
    EdgeWitnessModel,
    FactorizationReport,
    FanModel,
    FixedComponentModel,
    GenerationModel,
    GridPointModel,
    KodairaModel,
    MasterModel,
    PairFailureModel,
    ProblemInput,
    ScanReport,
    StabilityModel,
    StepModel,
    SurjectivityModel,
    TwistDescentModel,
    VertexConeModel,
    WallModel,
    WarningModel,
    divisor_entries,
)
from src.config import Settings, get_settings
from src.errors import InternalInconsistency, NotSimplicial, OracleMismatch, ValidationError
from src.geometry import Fan
from src.geometry.rational import IntVec
from src.master import (
    ChamberReport,
    GenerationReport,
    MasterPolytope,
    PairFailure,
    build_master_polytope,
    build_master_resolution,
    build_section_table,
    chamber_scan,
    check_generation,
    check_multiplication_surjectivity,
    cross_chamber_findings,
    grid_scan,
    least_surjective_scaling,
    twist_descent_at,
    vertex_cones,
)
from src.monitoring import LatencyTimer, StageMetrics
from src.toric import (
    KodairaSplit,
    ToricMorphism,
    ToricVariety,
    TorusDivisor,
    TwistDescentReport,
    check_refinement,
    is_ample,
    kodaira_split,
    pullback,
)
from src.vgit import (
    Crossing,
    FactorizationStep,
    StabilityCertificate,
    TieBreak,
    compose_steps,
    compute_walls,
    factorize_walls,
    stability_certificate,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Problem:
    """Validated domain objects behind a ProblemInput."""

    source: ToricVariety
    target: ToricVariety
    morphism: ToricMorphism
    divisor: TorusDivisor


def prepare_problem(problem: ProblemInput) -> Problem:
    """
    Turn a parsed input into varieties, the refinement morphism and D.

    Raises:
        ValidationError: the first input invariant that fails
    """
    fan_x = problem.fan_x.to_fan().validate()
    fan_y = problem.fan_y.to_fan().validate()
    source = ToricVariety(fan_x, name="X")
    target = ToricVariety(fan_y, name="Y")
    if not source.simplicial:
        raise NotSimplicial("source fan must be simplicial", rays=fan_x.rays)
    morphism = check_refinement(source, target)
    divisor = TorusDivisor.from_mapping(
        target, {tuple(ray): c for ray, c in zip(problem.fan_y.rays, problem.ample_on_y)}
    )
    witness = is_ample(divisor)
    if not witness:
        raise ValidationError("ample_on_y is not ample on Y", reason=witness.reason)
    return Problem(source, target, morphism, divisor)


def resolve_settings(problem: ProblemInput, base: Optional[Settings] = None, **flags) -> Settings:
    """Layer CLI flags over the input's options over the defaults."""
    settings = base if base is not None else get_settings()
    return settings.merged(**problem.options.model_dump()).merged(**flags)


class FactorizationService:
    """Runs the factorization pipeline and assembles its reports."""

    def __init__(self, settings: Optional[Settings] = None, metrics: Optional[StageMetrics] = None):
        """
        Initialize the service.

        Args:
            settings: pipeline bounds, the cached defaults when omitted
            metrics: stage timing tracker
        """
        self.settings = settings if settings is not None else get_settings()
        self.metrics = metrics if metrics is not None else StageMetrics()

    @contextmanager
    def _stage(self, name: str):
        with LatencyTimer() as timer:
            yield
        self.metrics.record_stage(name, timer.latency_ms)
        logger.info("stage %s took %.1f ms", name, timer.latency_ms)

    def _master(self, prepared: Problem) -> MasterPolytope:
        with self._stage("kodaira"):
            split = kodaira_split(prepared.morphism, prepared.divisor, self.settings.m_max, self.settings.c_max)
        with self._stage("master"):
            return build_master_polytope(split)

    def run_factorize(self, problem: ProblemInput, allow_trivial: bool = False) -> FactorizationReport:
        """
        Factor f: X -> Y into weighted blowups and blowdowns.

        Args:
            problem: parsed input document
            allow_trivial: accept a morphism without exceptional rays and
                report zero steps

        Returns:
            The full, self-contained report

        Raises:
            ValidationError: an input invariant fails
            SearchExhausted: the Kodaira bounds are too small
            InternalInconsistency: two computations that must agree did not
        """
        settings = self.settings
        self.metrics.record_run()
        with self._stage("validate"):
            prepared = prepare_problem(problem)
        morphism = prepared.morphism
        if not morphism.exceptional_rays:
            return self._trivial_report(problem, prepared, allow_trivial)

        master = self._master(prepared)
        split = master.split
        with self._stage("sections"):
            table = build_section_table(split, settings.d_max)
            least = least_surjective_scaling(table, settings.scaling_max)
            scaling_one = [f for chamber in (1, 2) for f in check_multiplication_surjectivity(table, chamber, 1).failures]
            findings = cross_chamber_findings(table)
        with self._stage("generation"):
            generation = check_generation(master, least or 1)
        with self._stage("walls"):
            walls = compute_walls(master)
            values = [wall.s_value for wall in walls]
            chambers = chamber_scan(master, settings.samples)
            if list(chambers.walls) != values:
                raise OracleMismatch(
                    "chamber scan and wall scan disagree",
                    chambers=[str(s) for s in chambers.walls],
                    walls=[str(s) for s in values],
                )
        with self._stage("stability"):
            certificates = [
                stability_certificate(master, s, values) for chamber in chambers.chambers for s in chamber.parameters
            ]
        self.metrics.increment("fan_evaluations", len(certificates))
        with self._stage("factorization"):
            crossings = factorize_walls(master, walls, TieBreak(settings.tie_break))
            steps = [step for crossing in crossings for step in crossing.steps]
            composed = compose_steps(morphism.source.fan, steps)
            if composed != morphism.target.fan:
                raise InternalInconsistency("composed steps do not reach the target fan")
        self.metrics.increment("walls", len(walls))
        self.metrics.increment("steps", len(steps))
        with self._stage("descent"):
            resolution = build_master_resolution(master, values)
            descents = []
            for index, chamber in ((1, chambers.chamber1), (2, chambers.chamber2)):
                s = descent_parameter(chamber.parameters)
                descents.append((index, s, chamber.fan, twist_descent_at(resolution, s, settings.n_max)))
            cones = vertex_cones(master.lattice_model())

        warnings = Deviations(
            least_scaling=least,
            scaling_max=settings.scaling_max,
            d_max=settings.d_max,
            scaling_one=scaling_one,
            generation=generation,
            stability=certificates,
            steps=[(step.kind.value, step.ray, step.source, step.target) for step in steps],
            descents=descents,
        ).warnings()
        report = FactorizationReport(
            schema_version=settings.schema_version,
            input=problem,
            kodaira=_kodaira_model(split),
            master=MasterModel(
                vertices=[list(v) for v in master.vertices],
                q=master.q,
                interior_heights=list(master.interior_heights),
                vertex_cones=[
                    VertexConeModel(vertex=list(c.vertex), rays=[list(r) for r in c.rays], index=c.index) for c in cones
                ],
            ),
            walls=[_wall_model(crossing) for crossing in crossings],
            chambers=_chamber_models(chambers),
            stability=[_stability_model(c) for c in certificates],
            surjectivity=SurjectivityModel(
                d_max=settings.d_max,
                scaling_max=settings.scaling_max,
                least_scaling=least,
                scaling_one_failures=[_pair_model(f) for f in scaling_one],
                cross_chamber_findings=[_pair_model(f) for f in findings],
            ),
            generation=GenerationModel(
                scaling=generation.scaling,
                degree=generation.degree,
                missing=[list(v) for v in generation.missing],
            ),
            twist_descent=[
                _descent_model(index, s, outcome, resolution.centers) for index, s, _, outcome in descents
            ],
            composed_fan=FanModel.from_fan(composed),
            warnings=warnings,
        )
        logger.info("factorized into %d step(s) across %d wall(s)", len(steps), len(walls))
        return report

    def _trivial_report(self, problem: ProblemInput, prepared: Problem, allow_trivial: bool) -> FactorizationReport:
        if not allow_trivial:
            raise ValidationError("morphism has no exceptional ray (use --allow-trivial for an empty factorization)")
        if prepared.source.fan != prepared.target.fan:
            raise ValidationError("refinement without exceptional rays still changes the fan")
        logger.info("trivial morphism: zero steps")
        return FactorizationReport(
            schema_version=self.settings.schema_version,
            input=problem,
            trivial=True,
            composed_fan=FanModel.from_fan(prepared.target.fan),
        )

    def run_scan(self, problem: ProblemInput, grid: Optional[int] = None) -> ScanReport:
        """
        Chamber scan on a rational grid that avoids the walls.

        Raises:
            ChamberInconsistent: a grid point disagrees with its chamber
        """
        grid = grid if grid is not None else self.settings.grid
        prepared = prepare_problem(problem)
        master = self._master(prepared)
        with self._stage("walls"):
            values = [wall.s_value for wall in compute_walls(master)]
        with self._stage("grid"):
            scan = grid_scan(master, values, grid)
        self.metrics.increment("fan_evaluations", len(scan.points))
        fans: Dict[int, FanModel] = {}
        for _, chamber, fan in scan.points:
            fans.setdefault(chamber, FanModel.from_fan(fan))
        return ScanReport(
            schema_version=self.settings.schema_version,
            walls=values,
            grid=grid,
            chambers=[fans[k] for k in sorted(fans)],
            points=[GridPointModel(s=s, chamber=chamber) for s, chamber, _ in scan.points],
        )


def descent_parameter(parameters: Sequence[Fraction]) -> Fraction:
    """The middle sample of a chamber, where twist descent is evaluated."""
    return parameters[len(parameters) // 2]


def _kodaira_model(split: KodairaSplit) -> KodairaModel:
    return KodairaModel(
        m=split.m,
        divisor=divisor_entries(split.divisor.as_mapping()),
        pullback=divisor_entries(pullback(split.morphism, split.divisor).as_mapping()),
        ample=divisor_entries(split.ample.as_mapping()),
        exceptional=divisor_entries(split.exceptional.as_mapping()),
        ample_ok=bool(split.ample_witness),
        exceptional_support_ok=split.exceptional_support_ok,
        neg_exceptional=split.neg_exceptional,
    )


def step_model(step: FactorizationStep) -> StepModel:
    return StepModel(
        kind=step.kind.value,
        ray=list(step.ray),
        generators=[list(g) for g in step.certificate.generators],
        weights=list(step.weights),
        source=FanModel.from_fan(step.source),
        target=FanModel.from_fan(step.target),
        component=step.component,
    )


def _wall_model(crossing: Crossing) -> WallModel:
    return WallModel(
        s_value=crossing.wall.s_value,
        below=crossing.below,
        above=crossing.above,
        fan_below=FanModel.from_fan(crossing.fan_below),
        fan_above=FanModel.from_fan(crossing.fan_above),
        fixed_components=[
            FixedComponentModel(
                vertices=[list(v) for v in c.vertices],
                weight_value=c.weight_value,
                down_weights=list(c.down_weights),
                up_weights=list(c.up_weights),
                simple=c.simple,
            )
            for c in crossing.wall.fixed_components
        ],
        steps=[step_model(step) for step in crossing.steps],
    )


def _chamber_models(report: ChamberReport) -> List[ChamberModel]:
    return [
        ChamberModel(lo=c.lo, hi=c.hi, parameters=list(c.parameters), fan=FanModel.from_fan(c.fan))
        for c in report.chambers
    ]


def _stability_model(certificate: StabilityCertificate) -> StabilityModel:
    return StabilityModel(
        parameter=certificate.parameter,
        stable_equals_semistable=certificate.stable_equals_semistable,
        free_action=certificate.free_action,
        witnesses=[
            EdgeWitnessModel(point=list(w.point), start=list(w.start), end=list(w.end), weight=w.weight)
            for w in certificate.witnesses
        ],
        quotient_cone_indices=list(certificate.quotient_cone_indices),
    )


def _pair_model(failure: PairFailure) -> PairFailureModel:
    return PairFailureModel(
        chamber=failure.chamber,
        first=list(failure.first),
        second=list(failure.second),
        missing=list(failure.missing),
    )


def _descent_model(chamber: int, s: Fraction, report: TwistDescentReport, centers) -> TwistDescentModel:
    return TwistDescentModel(
        chamber=chamber,
        parameter=s,
        n_max=report.n_max,
        least_n=report.least_n,
        centers=[list(c) for c in centers],
        quotient_fan=FanModel.from_fan(report.quotient_fan) if report.quotient_fan is not None else None,
        trials=[
            DescentTrialModel(
                n=t.n,
                vertices_equal=t.vertices_equal,
                points_equal=t.points_equal,
                fans_equal=t.fans_equal,
                twisted_points=t.twisted_points,
                pulled_points=t.pulled_points,
            )
            for t in report.trials
        ],
    )


StepOutline = Tuple[str, IntVec, Fan, Fan]
DescentOutcome = Tuple[int, Fraction, Fan, TwistDescentReport]


@dataclass(frozen=True)
class Deviations:
    """
    Everything the report's warnings are derived from.

    ``check`` rebuilds this from re-derived data and compares the warning
    lists, so a report cannot drop a deviation and still pass.
    """

    least_scaling: Optional[int]
    scaling_max: int
    d_max: int
    scaling_one: Sequence[PairFailure]
    generation: GenerationReport
    stability: Sequence[StabilityCertificate]
    steps: Sequence[StepOutline]
    descents: Sequence[DescentOutcome]

    def warnings(self) -> List[WarningModel]:
        return (
            self._surjectivity()
            + self._generation()
            + self._stability()
            + self._smoothness()
            + self._descent()
        )

    def _surjectivity(self) -> List[WarningModel]:
        warnings = [
            WarningModel(
                kind="surjectivity",
                message=f"chamber {f.chamber}: R{f.first} * R{f.second} misses a lattice point at scaling 1",
                data=[list(f.first), list(f.second), list(f.missing)],
            )
            for f in self.scaling_one
        ]
        if self.least_scaling is None:
            warnings.append(
                WarningModel(
                    kind="surjectivity",
                    message=(
                        f"no scaling up to {self.scaling_max} makes multiplication surjective "
                        f"on chamber pairs of total degree <= {self.d_max}"
                    ),
                    data=[[self.scaling_max, self.d_max]],
                )
            )
        return warnings

    def _generation(self) -> List[WarningModel]:
        report = self.generation
        if report.ok:
            return []
        return [
            WarningModel(
                kind="generation",
                message=f"{len(report.missing)} vertices of {report.degree}Q are not lattice points of their slices",
                data=[list(v) for v in report.missing],
            )
        ]

    def _stability(self) -> List[WarningModel]:
        return [
            WarningModel(
                kind="stability",
                message=f"s={c.parameter}: stable=semistable {c.stable_equals_semistable}, free {c.free_action}",
                data=[[c.parameter]],
            )
            for c in self.stability
            if not (c.stable_equals_semistable and c.free_action)
        ]

    def _smoothness(self) -> List[WarningModel]:
        warnings = []
        for kind, ray, source, target in self.steps:
            for label, fan in (("source", source), ("target", target)):
                if not fan.smooth:
                    indices = sorted(set(fan.cone_indices().values()) - {1})
                    warnings.append(
                        WarningModel(
                            kind="non_smooth",
                            message=f"{kind} at ray {tuple(ray)}: {label} fan has cone indices {indices}",
                            data=[list(ray), indices],
                        )
                    )
        return warnings

    def _descent(self) -> List[WarningModel]:
        warnings = []
        for index, s, fan, outcome in self.descents:
            if outcome.least_n is None:
                message = f"chamber {index}: no n up to {outcome.n_max} makes the twist descend"
            elif outcome.quotient_fan != fan:
                message = f"chamber {index}: descended quotient differs from the chamber fan"
            else:
                continue
            warnings.append(WarningModel(kind="twist_descent", message=message, data=[[s]]))
        return warnings
