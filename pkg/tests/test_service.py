"""Tests for the factorization service."""

from fractions import Fraction

import pydantic
import pytest

from src.cli.schemas import FanModel, ProblemInput
from src.config import Settings
from src.errors import NotRefinement, NotSimplicial, ValidationError
from src.master import check_generation
from src.service import Deviations, FactorizationService, prepare_problem, resolve_settings
from src.utils import plane_problem

from .pipeline_cache import BLP2, CORPUS, MORPHISM_NAMES, P2, master_of, report_of

HALF = Fraction(1, 2)


def test_blowup_report():
    """Test the headline contents of the Bl_p P2 report."""
    report = report_of("blp2")

    assert not report.trivial
    assert report.kodaira.m == 2
    assert report.kodaira.ample_ok
    assert report.kodaira.exceptional_support_ok
    assert report.kodaira.neg_exceptional
    assert report.master.q == 2
    assert report.master.interior_heights == [HALF]
    assert [w.s_value for w in report.walls] == [HALF]
    assert len(report.chambers) == 2
    assert report.chambers[0].fan.to_fan() == BLP2
    assert report.chambers[1].fan.to_fan() == P2
    assert report.composed_fan.to_fan() == P2
    assert report.generation.missing == []


def test_blowup_step():
    """Test the single blowdown of the Bl_p P2 report."""
    (step,) = report_of("blp2").steps()

    assert step.kind == "weighted_blowdown"
    assert step.ray == [1, 1]
    assert step.weights == [1, 1]
    assert step.generators == [[0, 1], [1, 0]]
    assert step.source.to_fan() == BLP2
    assert step.target.to_fan() == P2


def test_blowup_descent_and_stability():
    """Test descent multiples and stability certificates in the report."""
    report = report_of("blp2")

    assert [d.least_n for d in report.twist_descent] == [2, 2]
    assert [d.chamber for d in report.twist_descent] == [1, 2]
    assert len(report.stability) == 2 * 5
    assert all(c.stable_equals_semistable and c.free_action for c in report.stability)
    assert not report.warnings


@pytest.mark.slow
@pytest.mark.parametrize("name", MORPHISM_NAMES)
def test_every_morphism_composes_to_target(name):
    """Test that the recorded steps reach fan(Y) with one wall."""
    report = report_of(name)

    assert report.composed_fan.to_fan() == P2
    assert len(report.walls) == 1
    assert report.steps()
    assert report.surjectivity.least_scaling is not None
    assert report.surjectivity.least_scaling <= 8
    assert all(c.stable_equals_semistable and c.free_action for c in report.stability)
    assert [d.chamber for d in report.twist_descent] == [1, 2]
    assert all(d.least_n is not None and d.least_n <= 8 for d in report.twist_descent)


def test_unreached_surjectivity_names_its_bounds():
    """Test the warning emitted when no scaling up to the bound passes."""
    deviations = Deviations(
        least_scaling=None,
        scaling_max=8,
        d_max=6,
        scaling_one=[],
        generation=check_generation(master_of("blp2"), 1),
        stability=[],
        steps=[],
        descents=[],
    )

    (warning,) = deviations.warnings()

    assert warning.kind == "surjectivity"
    assert "up to 8" in warning.message
    assert "total degree <= 6" in warning.message
    assert warning.data == [[8, 6]]


def test_chain_report_has_two_steps():
    """Test the step order of the chain input in the report."""
    steps = report_of("chain").steps()

    assert [s.ray for s in steps] == [[1, 2], [1, 1]]
    assert steps[0].target.to_fan() == BLP2 == steps[1].source.to_fan()


def test_weighted_report_flags_singular_cone():
    """Test the index-2 cone and the non_smooth warning."""
    report = report_of("weighted")
    (step,) = report.steps()

    assert step.weights == [1, 2]
    assert any(2 in c.quotient_cone_indices for c in report.stability)
    assert any(w.kind == "non_smooth" for w in report.warnings)


def test_report_is_deterministic():
    """Test that two runs serialize identically."""
    service = FactorizationService(Settings())
    problem = CORPUS.get_problem("blp2")

    first = service.run_factorize(problem).model_dump_json()
    second = service.run_factorize(problem).model_dump_json()

    assert first == second


def test_identity_needs_allow_trivial():
    """Test the trivial morphism with and without the flag."""
    service = FactorizationService(Settings())
    problem = CORPUS.get_problem("identity")

    with pytest.raises(ValidationError):
        service.run_factorize(problem)

    report = service.run_factorize(problem, allow_trivial=True)
    assert report.trivial
    assert report.steps() == []
    assert report.composed_fan.to_fan() == P2


def test_prepare_problem_rejects_reversed_morphism():
    """Test that Y must be refined by X."""
    problem = plane_problem("reversed", [[1, 1]])
    swapped = problem.model_copy(
        update={"fan_x": problem.fan_y, "fan_y": problem.fan_x, "ample_on_y": [0, 0, 0, 1]}
    )

    with pytest.raises(NotRefinement):
        prepare_problem(swapped)


def test_prepare_problem_rejects_non_ample_divisor():
    """Test that the zero divisor is refused."""
    problem = plane_problem("flat", [[1, 1]]).model_copy(update={"ample_on_y": [Fraction(0)] * 3})

    with pytest.raises(ValidationError):
        prepare_problem(problem)


def test_prepare_problem_rejects_incomplete_fan():
    """Test that an incomplete source fan is refused."""
    problem = plane_problem("open", [[1, 1]])
    quadrant = FanModel(rays=[[1, 0], [0, 1]], max_cones=[[0, 1]])

    with pytest.raises(ValidationError):
        prepare_problem(problem.model_copy(update={"fan_x": quadrant}))


def test_prepare_problem_requires_simplicial_source():
    """Test that a fan with a square pyramid cone is refused."""
    pyramid = FanModel(
        rays=[[1, 0, 1], [0, 1, 1], [-1, 0, 1], [0, -1, 1], [0, 0, -1]],
        max_cones=[[0, 1, 2, 3], [0, 1, 4], [1, 2, 4], [2, 3, 4], [3, 0, 4]],
    )
    problem = ProblemInput(
        name="pyramid",
        lattice_rank=3,
        fan_x=pyramid,
        fan_y=pyramid,
        ample_on_y=[0, 0, 0, 0, 1],
    )

    with pytest.raises(NotSimplicial):
        prepare_problem(problem)



def test_resolve_settings_layering():
    """Test flags over options over defaults."""
    problem = plane_problem("blp2", [[1, 1]]).model_copy(
        update={"options": CORPUS.get_problem("blp2").options.model_copy(update={"d_max": 4, "m_max": 5})}
    )

    settings = resolve_settings(problem, Settings(), m_max=7, tie_break=None)

    assert settings.d_max == 4
    assert settings.m_max == 7
    assert settings.scaling_max == 8
    assert settings.tie_break == "centroid-lex"


def test_run_scan():
    """Test the grid scan report."""
    report = FactorizationService(Settings()).run_scan(CORPUS.get_problem("blp2"), grid=8)

    assert report.walls == [HALF]
    assert report.grid == 8
    assert len(report.points) == 8
    assert [c.to_fan() for c in report.chambers] == [BLP2, P2]
    assert [p.chamber for p in report.points] == [0] * 4 + [1] * 4


def test_stage_metrics_are_recorded():
    """Test that a run records stage timings and counters."""
    service = FactorizationService(Settings())
    service.run_factorize(CORPUS.get_problem("blp2"))

    summary = service.metrics.get_metrics_summary()

    assert summary["total_runs"] == 1
    assert {"validate", "kodaira", "master", "walls", "factorization", "descent"} <= set(summary["stages"])
    assert service.metrics.get_count("steps") == 1
    assert service.metrics.get_count("walls") == 1
    assert service.metrics.get_count("fan_evaluations") == 10


def test_settings_ignore_the_environment(monkeypatch):
    """Test that only explicit values override the defaults."""
    monkeypatch.setenv("D_MAX", "3")

    assert Settings().d_max == 6
    assert Settings(d_max=3).d_max == 3


def test_settings_bounds():
    """Test that out-of-range bounds are refused."""
    with pytest.raises(pydantic.ValidationError):
        Settings(samples=1)
    with pytest.raises(pydantic.ValidationError):
        Settings().merged(tie_break="random")
