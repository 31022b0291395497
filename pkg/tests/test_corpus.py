"""Tests for the problem corpus and its JSON files."""

from fractions import Fraction
from pathlib import Path

import pydantic
import pytest

from src.cli.schemas import ProblemInput
from src.utils import ProblemCorpus, cyclic_fan, load_problem, plane_problem, save_problem

DATA_DIR = Path(__file__).resolve().parent.parent / "data"


def test_default_corpus():
    """Test the five reference problems."""
    corpus = ProblemCorpus.create_default_corpus()

    assert len(corpus) == 5
    assert corpus.names() == ["blp2", "chain", "identity", "two_point", "weighted"]


def test_plane_problem_orders_rays_by_angle():
    """Test that inserted rays land between their neighbours."""
    problem = plane_problem("two_point", [[-1, 0], [1, 1]])

    assert problem.fan_x.rays == [[1, 0], [1, 1], [0, 1], [-1, 0], [-1, -1]]
    assert problem.fan_x.max_cones[-1] == [4, 0]
    assert problem.ample_on_y == [0, 0, 1]


def test_cyclic_fan_closes_up():
    """Test that the last cone wraps around to the first ray."""
    fan = cyclic_fan([[1, 0], [0, 1], [-1, -1]])

    assert fan.max_cones == [[0, 1], [1, 2], [2, 0]]
    assert fan.to_fan().complete


def test_corpus_requires_names():
    """Test that unnamed problems are refused."""
    corpus = ProblemCorpus()
    problem = plane_problem("", [[1, 1]])

    with pytest.raises(ValueError):
        corpus.add_problems([problem])


def test_save_and_load_corpus(tmp_path):
    """Test writing one file per problem and reading them back."""
    corpus = ProblemCorpus.create_default_corpus()
    corpus.save_corpus(tmp_path / "corpus")

    loaded = ProblemCorpus.load_corpus(tmp_path / "corpus")

    assert sorted(p.name for p in (tmp_path / "corpus").glob("*.json")) == [f"{n}.json" for n in corpus.names()]
    assert loaded.get_problem("chain") == corpus.get_problem("chain")


@pytest.mark.parametrize("name", ["blp2", "weighted", "two_point", "chain", "identity"])
def test_data_files_match_builders(name):
    """Test that the shipped inputs are the corpus problems."""
    corpus = ProblemCorpus.create_default_corpus()

    assert load_problem(DATA_DIR / f"{name}.json") == corpus.get_problem(name)


def test_rationals_are_written_as_strings(tmp_path):
    """Test the serialized form of ample_on_y."""
    problem = plane_problem("halved", [[1, 1]]).model_copy(
        update={"ample_on_y": [Fraction(0), Fraction(0), Fraction(1, 2)]}
    )
    path = tmp_path / "halved.json"
    save_problem(problem, path)

    assert '"1/2"' in path.read_text(encoding="utf-8")
    assert load_problem(path).ample_on_y[2] == Fraction(1, 2)


def test_ray_length_must_match_rank():
    """Test the shape validation of a problem document."""
    document = plane_problem("blp2", [[1, 1]]).model_dump(mode="json")
    document["fan_x"]["rays"][0] = [1, 0, 0]

    with pytest.raises(pydantic.ValidationError):
        ProblemInput.model_validate(document)


def test_ample_coefficients_must_match_rays():
    """Test one coefficient per ray of fan_y."""
    document = plane_problem("blp2", [[1, 1]]).model_dump(mode="json")
    document["ample_on_y"] = ["0", "1"]

    with pytest.raises(pydantic.ValidationError):
        ProblemInput.model_validate(document)


def test_floats_are_rejected():
    """Test that a float coefficient makes the document invalid."""
    document = plane_problem("blp2", [[1, 1]]).model_dump(mode="json")
    document["ample_on_y"] = [0, 0, 1.0]

    with pytest.raises(pydantic.ValidationError):
        ProblemInput.model_validate(document)


def test_unknown_fields_are_rejected():
    """Test that typos in option names are caught."""
    document = plane_problem("blp2", [[1, 1]]).model_dump(mode="json")
    document["options"] = {"dmax": 4}

    with pytest.raises(pydantic.ValidationError):
        ProblemInput.model_validate(document)
