"""Pydantic models for problem inputs, factorization reports and scan reports."""

from fractions import Fraction
from typing import Annotated, Any, List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, PlainSerializer, PlainValidator, model_validator

from src.errors import ValidationError
from src.geometry import Fan, format_rational
from src.geometry.rational import as_fraction


def _read_rational(value: Any) -> Fraction:
    try:
        return as_fraction(value)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"expected an exact rational (int or 'p/q' string), got {value!r}") from exc


Rational = Annotated[Fraction, PlainValidator(_read_rational), PlainSerializer(format_rational, return_type=str)]


class Schema(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True, extra="forbid")


class FanModel(Schema):
    """Rays as integer arrays and maximal cones as lists of ray indices."""

    rays: List[List[int]]
    max_cones: List[List[int]]

    def to_fan(self) -> Fan:
        """
        Build the canonical fan.

        Raises:
            ValidationError: malformed rays or cones
        """
        for cone in self.max_cones:
            for index in cone:
                if not 0 <= index < len(self.rays):
                    raise ValidationError("cone refers to a missing ray", cone=tuple(cone))
        return Fan(tuple(tuple(ray) for ray in self.rays), tuple(tuple(cone) for cone in self.max_cones))

    @classmethod
    def from_fan(cls, fan: Fan) -> "FanModel":
        return cls(rays=[list(ray) for ray in fan.rays], max_cones=[list(cone) for cone in fan.cones])


class Options(Schema):
    """Per-problem overrides of the pipeline defaults."""

    d_max: Optional[int] = Field(None, ge=2)
    scaling_max: Optional[int] = Field(None, ge=1)
    m_max: Optional[int] = Field(None, ge=1)
    c_max: Optional[int] = Field(None, ge=1)
    samples: Optional[int] = Field(None, ge=2)
    n_max: Optional[int] = Field(None, ge=1)
    grid: Optional[int] = Field(None, ge=1)
    tie_break: Optional[Literal["centroid-lex", "centroid-revlex"]] = None


class ProblemInput(Schema):
    """
    A projective birational toric morphism X -> Y and an ample divisor on Y.

    ``ample_on_y`` lists one coefficient per ray of ``fan_y`` in the order the
    rays are given.
    """

    name: str = ""
    lattice_rank: int = Field(..., ge=1)
    fan_x: FanModel
    fan_y: FanModel
    ample_on_y: List[Rational]
    options: Options = Field(default_factory=Options)

    @model_validator(mode="after")
    def _check_shapes(self) -> "ProblemInput":
        for label, fan in (("fan_x", self.fan_x), ("fan_y", self.fan_y)):
            if any(len(ray) != self.lattice_rank for ray in fan.rays):
                raise ValueError(f"every ray of {label} must have {self.lattice_rank} coordinates")
        if len(self.ample_on_y) != len(self.fan_y.rays):
            raise ValueError("ample_on_y needs one coefficient per ray of fan_y")
        return self


class RayCoefficient(Schema):
    ray: List[int]
    coefficient: Rational


def divisor_entries(mapping) -> List[RayCoefficient]:
    return [RayCoefficient(ray=list(ray), coefficient=c) for ray, c in sorted(mapping.items())]


class KodairaModel(Schema):
    m: int
    divisor: List[RayCoefficient]
    pullback: List[RayCoefficient]
    ample: List[RayCoefficient]
    exceptional: List[RayCoefficient]
    ample_ok: bool
    exceptional_support_ok: bool
    neg_exceptional: bool


class VertexConeModel(Schema):
    """Normal cone of q * Q at a vertex; ``index`` is None for a non-simplicial cone."""

    vertex: List[Rational]
    rays: List[List[int]]
    index: Optional[int]


class MasterModel(Schema):
    vertices: List[List[Rational]]
    q: int
    interior_heights: List[Rational]
    vertex_cones: List[VertexConeModel]


class FixedComponentModel(Schema):
    vertices: List[List[Rational]]
    weight_value: Rational
    down_weights: List[int]
    up_weights: List[int]
    simple: bool


class StepModel(Schema):
    kind: Literal["weighted_blowup", "weighted_blowdown"]
    ray: List[int]
    generators: List[List[int]]
    weights: List[int]
    source: FanModel
    target: FanModel
    component: Optional[int]


class WallModel(Schema):
    s_value: Rational
    below: Rational
    above: Rational
    fan_below: FanModel
    fan_above: FanModel
    fixed_components: List[FixedComponentModel]
    steps: List[StepModel]


class ChamberModel(Schema):
    lo: Rational
    hi: Rational
    parameters: List[Rational]
    fan: FanModel


class EdgeWitnessModel(Schema):
    point: List[Rational]
    start: List[Rational]
    end: List[Rational]
    weight: int


class StabilityModel(Schema):
    parameter: Rational
    stable_equals_semistable: bool
    free_action: bool
    witnesses: List[EdgeWitnessModel]
    quotient_cone_indices: List[Optional[int]]


class PairFailureModel(Schema):
    """``chamber`` 0 marks a pair straddling the wall."""

    chamber: int
    first: List[int]
    second: List[int]
    missing: List[int]


class SurjectivityModel(Schema):
    d_max: int
    scaling_max: int
    least_scaling: Optional[int]
    scaling_one_failures: List[PairFailureModel]
    cross_chamber_findings: List[PairFailureModel]


class GenerationModel(Schema):
    scaling: int
    degree: int
    missing: List[List[Rational]]


class DescentTrialModel(Schema):
    n: int
    vertices_equal: bool
    points_equal: bool
    fans_equal: bool
    twisted_points: int
    pulled_points: int


class TwistDescentModel(Schema):
    chamber: int
    parameter: Rational
    n_max: int
    least_n: Optional[int]
    centers: List[List[int]]
    quotient_fan: Optional[FanModel]
    trials: List[DescentTrialModel]


class WarningModel(Schema):
    """A deviation recorded with the data needed to re-derive it."""

    kind: Literal["generation", "surjectivity", "non_smooth", "stability", "twist_descent"]
    message: str
    data: List[List[Rational]] = Field(default_factory=list)


class FactorizationReport(Schema):
    schema_version: str
    input: ProblemInput
    trivial: bool = False
    kodaira: Optional[KodairaModel] = None
    master: Optional[MasterModel] = None
    walls: List[WallModel] = Field(default_factory=list)
    chambers: List[ChamberModel] = Field(default_factory=list)
    stability: List[StabilityModel] = Field(default_factory=list)
    surjectivity: Optional[SurjectivityModel] = None
    generation: Optional[GenerationModel] = None
    twist_descent: List[TwistDescentModel] = Field(default_factory=list)
    composed_fan: FanModel
    warnings: List[WarningModel] = Field(default_factory=list)

    def steps(self) -> List[StepModel]:
        return [step for wall in self.walls for step in wall.steps]


class GridPointModel(Schema):
    s: Rational
    chamber: int


class ScanReport(Schema):
    schema_version: str
    walls: List[Rational]
    grid: int
    chambers: List[FanModel]
    points: List[GridPointModel]
