"""Tests for walls, stability certificates and wall-crossing factorization."""

from fractions import Fraction

import pytest

from src.errors import ValidationError, WallParameter
from src.vgit import (
    StepKind,
    TieBreak,
    compose_steps,
    compute_walls,
    crossing_parameters,
    edges,
    factor_crossing,
    factorize_walls,
    stability_certificate,
    walls_by_bisection,
    walls_by_vertex_heights,
)

from .pipeline_cache import BLP2, MORPHISM_NAMES, P2, master_of

HALF = Fraction(1, 2)
QUARTER = Fraction(1, 4)


@pytest.mark.parametrize("name", MORPHISM_NAMES)
def test_wall_methods_agree(name):
    """Test vertex heights and bisection find the same single wall."""
    master = master_of(name)

    assert walls_by_vertex_heights(master) == walls_by_bisection(master) == [HALF]


def test_fixed_component_of_blowup():
    """Test the weights at the isolated fixed point of the blowup."""
    (wall,) = compute_walls(master_of("blp2"))
    (component,) = wall.fixed_components

    assert wall.s_value == HALF
    assert component.vertices == ((0, 0, HALF),)
    assert component.simple
    assert component.down_weights == (-1, -1)
    assert component.up_weights == (1,)
    assert component.centroid == (0, 0)


def test_fixed_component_of_weighted_blowup():
    """Test that the down weights carry the blowup weights."""
    (wall,) = compute_walls(master_of("weighted"))
    (component,) = wall.fixed_components

    assert component.simple
    assert component.down_weights == (-2, -1)
    assert component.up_weights == (1,)


def test_edges_of_blowup_master():
    """Test the edge count of the blowup's master polytope."""
    assert len(edges(master_of("blp2"))) == 9


def test_stability_below_the_wall():
    """Test the stability certificate inside the Bl_p P2 chamber."""
    certificate = stability_certificate(master_of("blp2"), QUARTER, [HALF])

    assert certificate.stable_equals_semistable
    assert certificate.free_action
    assert len(certificate.witnesses) == 4
    assert all(w.weight == 1 for w in certificate.witnesses)
    assert certificate.quotient_cone_indices == (1, 1, 1, 1)


def test_stability_above_the_wall():
    """Test the stability certificate inside the P2 chamber."""
    certificate = stability_certificate(master_of("blp2"), Fraction(3, 4), [HALF])

    assert certificate.stable_equals_semistable
    assert certificate.free_action
    assert len(certificate.witnesses) == 3
    assert certificate.quotient_cone_indices == (1, 1, 1)


def test_stability_is_not_certified_on_a_wall():
    """Test that a wall parameter is refused."""
    with pytest.raises(WallParameter):
        stability_certificate(master_of("blp2"), HALF, [HALF])


@pytest.mark.parametrize("s", [0, 1, Fraction(-1, 3)])
def test_stability_rejects_parameters_outside_the_interval(s):
    """Test that s must lie strictly inside (0, 1)."""
    with pytest.raises(ValidationError):
        stability_certificate(master_of("blp2"), s, [HALF])


def test_weighted_p1xp1_is_not_free_below_the_wall():
    """Test the weight-3 edge of the (3, 2) blowup of P1 x P1 and the free side above."""
    master = master_of("p1xp1_weighted")
    below = stability_certificate(master, QUARTER, [HALF])
    above = stability_certificate(master, Fraction(3, 4), [HALF])

    assert below.stable_equals_semistable
    assert not below.free_action
    assert sorted(abs(w.weight) for w in below.witnesses) == [1, 1, 1, 1, 3]
    assert above.free_action
    assert all(abs(w.weight) == 1 for w in above.witnesses)


def test_weighted_quotient_has_free_action_and_singular_cone():
    """Test that the weighted chamber is free but not smooth."""
    certificate = stability_certificate(master_of("weighted"), QUARTER, [HALF])

    assert certificate.free_action
    assert 2 in certificate.quotient_cone_indices


def test_crossing_parameters():
    """Test midpoints to the neighbouring walls or the endpoints."""
    assert crossing_parameters([HALF], 0) == (QUARTER, Fraction(3, 4))
    assert crossing_parameters([QUARTER, HALF], 1) == (Fraction(3, 8), Fraction(3, 4))


def test_blowup_factors_into_one_blowdown():
    """Test the single step of Bl_p P2 -> P2."""
    master = master_of("blp2")
    (wall,) = compute_walls(master)
    crossing = factor_crossing(master, wall, QUARTER, Fraction(3, 4))
    (step,) = crossing.steps

    assert crossing.fan_below == BLP2
    assert crossing.fan_above == P2
    assert step.kind is StepKind.BLOWDOWN
    assert step.ray == (1, 1)
    assert step.weights == (1, 1)
    assert step.fine == BLP2 and step.coarse == P2
    assert step.component == 0


def test_weighted_step_weights():
    """Test that the weighted blowdown records weights (1, 2)."""
    master = master_of("weighted")
    (crossing,) = factorize_walls(master, compute_walls(master))
    (step,) = crossing.steps

    assert step.ray == (1, 2)
    assert step.weights == (1, 2)
    assert step.certificate.generators == ((1, 0), (0, 1))
    assert not step.source.smooth


def test_chain_master_and_step_order():
    """Test the two-ray chain: a non-simple fixed point and two ordered blowdowns."""
    master = master_of("chain")
    walls = compute_walls(master)
    (crossing,) = factorize_walls(master, walls)
    first, second = crossing.steps

    assert len(master.vertices) == 7
    assert master.q == 2
    assert any(not c.simple for c in walls[0].fixed_components)
    assert first.ray == (1, 2)
    assert second.ray == (1, 1)
    assert first.target == BLP2 == second.source
    assert second.target == P2
    assert all(step.kind is StepKind.BLOWDOWN for step in crossing.steps)


def test_two_point_tie_break_orders():
    """Test that both tie-break orders compose to P2 in reversed order."""
    master = master_of("two_point")
    walls = compute_walls(master)
    source = master.split.morphism.source.fan

    lex = [s for c in factorize_walls(master, walls, TieBreak.CENTROID_LEX) for s in c.steps]
    revlex = [s for c in factorize_walls(master, walls, TieBreak.CENTROID_REVLEX) for s in c.steps]

    assert len(walls[0].fixed_components) == 2
    assert {s.ray for s in lex} == {(1, 1), (-1, 0)}
    assert [s.ray for s in lex] == [s.ray for s in reversed(revlex)]
    assert compose_steps(source, lex) == P2
    assert compose_steps(source, revlex) == P2


def test_tie_break_order_reverses():
    """Test that revlex is the reverse of lex."""
    (wall,) = compute_walls(master_of("two_point"))

    lex = TieBreak.CENTROID_LEX.order(wall.fixed_components)
    assert TieBreak.CENTROID_REVLEX.order(wall.fixed_components) == lex[::-1]
