"""Tests for the section table, the master polytope and its chamber structure."""

from fractions import Fraction

import pytest

from src.errors import ValidationError
from src.geometry import count_lattice_points_recursive, lattice_points
from src.master import (
    build_master_resolution,
    build_section_table,
    chamber_scan,
    check_generation,
    check_multiplication_surjectivity,
    grid_points,
    grid_scan,
    least_surjective_scaling,
    quotient_of_parameter,
    sample_parameters,
    twist_descent_at,
    vertex_cones,
)
from src.master.sections import in_chamber
from src.toric import divisor_polytope, pullback

from .pipeline_cache import BLP2, MORPHISM_NAMES, P2, master_of, split_of

HALF = Fraction(1, 2)


def test_section_dimensions():
    """Test h0 of A and E for the blowup at a point."""
    table = build_section_table(split_of("blp2"), d_max=4)

    assert table.h0(1, 0) == 5
    assert table.h0(0, 1) == 1
    assert table.h0(0, 0) == 1
    assert len(table.entries) == 15


def test_section_table_needs_degree_two():
    """Test the lower bound on d_max."""
    with pytest.raises(ValidationError):
        build_section_table(split_of("blp2"), d_max=1)


def test_chamber_membership():
    """Test that the diagonal belongs to both chambers."""
    assert in_chamber((2, 1), 1)
    assert not in_chamber((1, 2), 1)
    assert in_chamber((1, 1), 1) and in_chamber((1, 1), 2)


@pytest.mark.parametrize("name", MORPHISM_NAMES)
def test_surjectivity_is_reached(name):
    """Test that some scaling up to 8 makes both chambers surjective."""
    table = build_section_table(split_of(name), d_max=6)
    least = least_surjective_scaling(table, scaling_max=8)

    assert least is not None
    for chamber in (1, 2):
        report = check_multiplication_surjectivity(table, chamber, least)
        assert report.passed
        assert report.nontrivial_pairs > 0


def test_scaled_pairs_keep_the_unscaled_degree_bound():
    """Test that every scaling checks the same pairs and extends the table on demand."""
    table = build_section_table(split_of("p1xp1_weighted"), d_max=4)
    once = check_multiplication_surjectivity(table, 1, 1)
    four = check_multiplication_surjectivity(table, 1, 4)

    assert once.pairs_checked == four.pairs_checked
    assert once.nontrivial_pairs == four.nontrivial_pairs > 0
    assert not once.passed
    assert max(a + b for a, b in table.entries) == 16


@pytest.mark.slow
def test_surjectivity_needs_a_scaling_beyond_one():
    """Test that the (3, 2) weighted blowup of P1 x P1 first passes between 2 and 6."""
    table = build_section_table(split_of("p1xp1_weighted"), d_max=6)
    least = least_surjective_scaling(table, scaling_max=8)

    assert least is not None
    assert 1 < least <= 6
    assert all(check_multiplication_surjectivity(table, chamber, least).passed for chamber in (1, 2))


def test_surjectivity_rejects_bad_arguments():
    """Test chamber and scaling validation."""
    table = build_section_table(split_of("blp2"), d_max=2)

    with pytest.raises(ValidationError):
        check_multiplication_surjectivity(table, 3)
    with pytest.raises(ValidationError):
        check_multiplication_surjectivity(table, 1, scaling=0)


def test_master_polytope_of_blowup():
    """Test the vertices, denominator and interior heights of Q."""
    master = master_of("blp2")

    assert set(master.vertices) == {
        (1, 0, 0),
        (2, 0, 0),
        (0, 1, 0),
        (0, 2, 0),
        (0, 0, HALF),
        (0, 0, 1),
    }
    assert master.q == 2
    assert master.interior_heights == (HALF,)
    assert master.rank == 2
    assert master.weight_form == (0, 0, 1)


def test_master_ends_are_a_and_e():
    """Test that the slices at 0 and 1 are P_A and P_E."""
    master = master_of("blp2")
    split = master.split

    assert master.projected_slice(0).same_as(split.ample.polytope())
    assert master.projected_slice(1).same_as(split.exceptional.polytope())
    assert master.divisor_at(0) == split.ample
    assert master.divisor_at(1) == split.exceptional


def test_quotients_on_either_side_of_the_wall():
    """Test that the quotient is Bl_p P2 below 1/2 and P2 above."""
    master = master_of("blp2")

    assert quotient_of_parameter(master, Fraction(1, 4)) == BLP2
    assert quotient_of_parameter(master, Fraction(3, 4)) == P2


def test_quotient_rejects_endpoints():
    """Test that s must lie strictly inside (0, 1)."""
    master = master_of("blp2")

    for s in (0, 1, Fraction(3, 2)):
        with pytest.raises(ValidationError):
            quotient_of_parameter(master, s)


def test_sample_parameters_are_interior():
    """Test equal spacing strictly inside the interval."""
    params = sample_parameters(Fraction(0), HALF, 4)

    assert params == [Fraction(1, 10), Fraction(1, 5), Fraction(3, 10), Fraction(2, 5)]


@pytest.mark.parametrize("name", MORPHISM_NAMES)
def test_chamber_scan_ends_at_x_and_y(name):
    """Test that the first chamber is fan(X) and the last is fan(Y)."""
    master = master_of(name)
    report = chamber_scan(master, samples=3)
    morphism = master.split.morphism

    assert report.chamber1.fan == morphism.source.fan
    assert report.chamber2.fan == morphism.target.fan
    assert report.walls == (HALF,)
    assert report.wall_parameter == HALF


def test_chamber_scan_needs_two_samples():
    """Test the sample lower bound."""
    with pytest.raises(ValidationError):
        chamber_scan(master_of("blp2"), samples=1)


def test_grid_scan():
    """Test 32 grid midpoints split into two constant chambers."""
    master = master_of("blp2")
    scan = grid_scan(master, [HALF], grid=32)

    assert len(scan.points) == 32
    assert {chamber for _, chamber, _ in scan.points} == {0, 1}
    assert all(fan == (BLP2 if chamber == 0 else P2) for _, chamber, fan in scan.points)
    assert grid_points(2) == [Fraction(1, 4), Fraction(3, 4)]


def test_generation_holds_for_blowup():
    """Test that every vertex of 2Q is a lattice point of its graded slice."""
    report = check_generation(master_of("blp2"), 1)

    assert report.degree == 2
    assert report.ok


def test_vertex_cones_of_master():
    """Test one normal cone per vertex with a non-simplicial apex."""
    master = master_of("blp2")
    cones = vertex_cones(master.lattice_model())

    assert len(cones) == 6
    apex = next(c for c in cones if c.vertex == (0, 0, 2))
    assert apex.index is None
    assert not apex.smooth
    assert all(c.index is not None for c in cones if c.vertex != (0, 0, 2))


def test_master_resolution_blows_up_wall_vertex():
    """Test that only the vertex at the wall height is blown up."""
    resolution = build_master_resolution(master_of("blp2"), [HALF])

    assert len(resolution.centers) == 1
    assert resolution.morphism.exceptional_rays == resolution.centers
    assert resolution.exceptional.support() == resolution.centers


def test_twist_descent_in_both_chambers():
    """Test that the least descending multiple is 2 on each side."""
    resolution = build_master_resolution(master_of("blp2"), [HALF])

    below = twist_descent_at(resolution, Fraction(1, 4))
    above = twist_descent_at(resolution, Fraction(3, 4))

    assert below.least_n == 2
    assert above.least_n == 2
    assert below.quotient_fan == BLP2
    assert above.quotient_fan == P2


@pytest.mark.parametrize("name", MORPHISM_NAMES)
def test_slices_are_divisor_polytopes(name):
    """Test that the slice of Q at s is P of (1 - s) A + s E for 32 values of s."""
    master = master_of(name)

    for i in range(1, 33):
        s = Fraction(i, 33)
        assert master.projected_slice(s).same_as(divisor_polytope(master.divisor_at(s)))


@pytest.mark.parametrize("name", MORPHISM_NAMES)
def test_lattice_point_counters_agree_on_corpus(name):
    """Test the vectorised and recursive counters on every polytope of a corpus input."""
    master = master_of(name)
    split = master.split
    table = build_section_table(split, d_max=4)
    polytopes = [
        split.divisor.polytope(),
        divisor_polytope(pullback(split.morphism, split.divisor)),
        split.ample.polytope(),
        split.exceptional.polytope(),
        master.polytope,
        master.lattice_model(),
    ] + [entry.polytope for entry in table.entries.values()]

    for polytope in polytopes:
        assert len(lattice_points(polytope)) == count_lattice_points_recursive(polytope)
