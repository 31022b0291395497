"""Tests for exact lattice geometry."""

from fractions import Fraction

import pytest

from src.errors import DegeneratePolytope, InternalInconsistency, NotSimplicial, NotStar, Unbounded, ValidationError
from src.geometry import (
    Cone,
    Fan,
    HalfSpace,
    LatticePolytope,
    as_fraction,
    cone_index,
    count_lattice_points_recursive,
    fix_coordinate,
    format_rational,
    lattice_points,
    minkowski_points,
    normal_fan,
    parse_rational,
    primitive,
    recognize_star_subdivision,
    remove_ray,
    star_subdivide,
    support_polytope,
    vertex_enumeration,
)
from src.geometry.linalg import lattice_index, maximal_minor_gcd

from .pipeline_cache import BLP2, P2


def triangle(size: int = 2) -> LatticePolytope:
    return vertex_enumeration(
        [HalfSpace((1, 0), 0), HalfSpace((0, 1), 0), HalfSpace((-1, -1), size)],
        2,
    )


def test_rational_parsing():
    """Test "p/q" parsing, normalization and formatting."""
    assert parse_rational("3/6") == Fraction(1, 2)
    assert parse_rational("-4") == Fraction(-4)
    assert format_rational(Fraction(4, 2)) == "2"
    assert format_rational(Fraction(-1, 3)) == "-1/3"


def test_floats_are_rejected():
    """Test that inexact values never become rationals."""
    with pytest.raises(TypeError):
        as_fraction(0.5)
    with pytest.raises(ValueError):
        parse_rational("1.5")


def test_primitive_vectors():
    """Test scaling to primitive integer generators."""
    assert primitive((2, 4)) == (1, 2)
    assert primitive((Fraction(1, 2), 1)) == (1, 2)
    assert primitive((0, -3)) == (0, -1)
    with pytest.raises(ValueError):
        primitive((0, 0))


def test_vertex_enumeration_triangle():
    """Test vertices and lattice points of the size-2 triangle."""
    polytope = triangle()

    assert polytope.vertex_set == {(0, 0), (2, 0), (0, 2)}
    assert len(lattice_points(polytope)) == 6
    assert count_lattice_points_recursive(polytope) == 6
    assert polytope.is_full_dimensional


def test_unbounded_system_raises():
    """Test that a quadrant is reported as unbounded."""
    with pytest.raises(Unbounded):
        vertex_enumeration([HalfSpace((1, 0), 0), HalfSpace((0, 1), 0)], 2)


def test_infeasible_system_is_empty():
    """Test that contradictory constraints give the empty polytope."""
    polytope = vertex_enumeration(
        [HalfSpace((1, 0), -1), HalfSpace((-1, 0), 0), HalfSpace((0, 1), 0), HalfSpace((0, -1), 1)],
        2,
    )

    assert polytope.is_empty
    assert lattice_points(polytope) == frozenset()


def test_dilation_scales_vertices():
    """Test k * P vertexwise."""
    assert triangle(1).dilate(3).vertex_set == {(0, 0), (3, 0), (0, 3)}
    assert triangle(2).dilate(Fraction(1, 2)).same_as(triangle(1))


def test_fix_coordinate_projects_slice():
    """Test restricting a square to x = 1."""
    square = vertex_enumeration(
        [HalfSpace((1, 0), 0), HalfSpace((-1, 0), 2), HalfSpace((0, 1), 0), HalfSpace((0, -1), 2)],
        2,
    )
    segment = fix_coordinate(square, 0, 1)

    assert segment.dim_ambient == 1
    assert segment.vertex_set == {(0,), (2,)}


def test_lattice_point_counters_agree():
    """Test the vectorised and recursive counters on a rational polytope."""
    polytope = vertex_enumeration(
        [HalfSpace((1, 0), 0), HalfSpace((0, 1), 0), HalfSpace((-1, -1), 2), HalfSpace.from_rational((1, 2), -1)],
        2,
    )

    assert len(lattice_points(polytope)) == count_lattice_points_recursive(polytope)


def test_minkowski_points():
    """Test pairwise sums of lattice point sets."""
    total = minkowski_points({(0, 0), (1, 0)}, {(0, 0), (0, 1)})

    assert total == {(0, 0), (1, 0), (0, 1), (1, 1)}


def test_normal_fan_of_triangle_is_p2():
    """Test the inner normal fan of the standard triangle."""
    assert normal_fan(triangle(1)) == P2


def test_normal_fan_of_segment_raises():
    """Test that a lower-dimensional polytope has no complete normal fan."""
    segment = vertex_enumeration(
        [HalfSpace((1, 0), 0), HalfSpace((-1, 0), 1), HalfSpace((0, 1), 0), HalfSpace((0, -1), 0)],
        2,
    )

    with pytest.raises(DegeneratePolytope):
        normal_fan(segment)


def test_support_function_round_trip():
    """Test rebuilding a polytope from its support function on its normal fan."""
    polytope = vertex_enumeration(
        [HalfSpace((1, 0), 0), HalfSpace((0, 1), 0), HalfSpace((-1, -1), 2), HalfSpace((1, 1), -1)],
        2,
    )

    assert support_polytope(polytope, normal_fan(polytope).rays).same_as(polytope)


def test_cone_membership_and_index():
    """Test containment and multiplicity of a non-smooth cone."""
    cone = Cone(((1, 0), (1, 2)), 2)

    assert cone.contains((1, 1))
    assert not cone.contains((0, 1))
    assert cone.in_relative_interior((2, 2))
    assert cone_index(cone) == 2
    assert lattice_index(cone.rays) == maximal_minor_gcd(cone.rays) == 2


def test_cone_index_cross_checks_minors(monkeypatch):
    """Test that a disagreeing Smith form is reported as an inconsistency."""
    monkeypatch.setattr("src.geometry.cone.lattice_index", lambda rows: 3)

    with pytest.raises(InternalInconsistency):
        cone_index(Cone(((1, 0), (1, 2)), 2))


def test_ray_removal_merges_over_an_open_cone():
    """Test that removal merges into the cone holding the ray in its relative interior."""
    cone = Cone(((1, 0), (0, 1)), 2)

    assert not cone.in_relative_interior((1, 0))
    assert cone.in_relative_interior((1, 2))
    assert remove_ray(star_subdivide(P2, (1, 2)), (1, 2)) == P2


def test_cone_index_requires_simplicial():
    """Test that the square pyramid has no cone index."""
    pyramid = Cone(((1, 0, 1), (0, 1, 1), (-1, 0, 1), (0, -1, 1)), 3)

    assert not pyramid.is_simplicial
    with pytest.raises(NotSimplicial):
        cone_index(pyramid)


def test_fan_canonical_form():
    """Test that ray and cone order do not matter."""
    shuffled = Fan(((-1, -1), (0, 1), (1, 0)), ((2, 0), (0, 1), (1, 2)))

    assert shuffled == P2
    assert P2.complete
    assert P2.smooth
    assert BLP2.is_refined_by(BLP2)
    assert P2.is_refined_by(BLP2)
    assert not BLP2.is_refined_by(P2)


def test_fan_rejects_bad_rays():
    """Test that non-primitive rays are rejected."""
    with pytest.raises(ValidationError):
        Fan(((2, 0), (0, 1)), ((0, 1),))


def test_fan_validation_detects_overlap():
    """Test that overlapping maximal cones fail validation."""
    overlapping = Fan.from_ray_sets([[(1, 0), (0, 1)], [(1, 1), (-1, 0)]])

    with pytest.raises(ValidationError):
        overlapping.validate()
    assert P2.validate() is P2


def test_star_subdivision_and_removal():
    """Test the blowup of P2 at a fixed point and its inverse."""
    assert star_subdivide(P2, (1, 1)) == BLP2
    assert remove_ray(BLP2, (1, 1)) == P2
    with pytest.raises(ValueError):
        star_subdivide(BLP2, (1, 1))


def test_recognize_smooth_blowup():
    """Test the star certificate of Bl_p P2 -> P2."""
    certificate = recognize_star_subdivision(BLP2, P2)

    assert certificate.ray == (1, 1)
    assert certificate.weights == (1, 1)
    assert certificate.generators == ((0, 1), (1, 0))
    assert certificate.identity_holds()


def test_recognize_weighted_blowup():
    """Test that weights are listed in increasing order."""
    fine = star_subdivide(P2, (1, 2))
    certificate = recognize_star_subdivision(fine, P2)

    assert certificate.weights == (1, 2)
    assert certificate.generators == ((1, 0), (0, 1))
    assert not fine.smooth


def test_two_extra_rays_are_not_one_star():
    """Test that recognition rejects a double blowup."""
    chain = star_subdivide(BLP2, (1, 2))

    with pytest.raises(NotStar):
        recognize_star_subdivision(chain, P2)
