"""Desk-scale corpus of factorization problems."""

import math
from pathlib import Path
from typing import Dict, List, Sequence, Union

from src.cli.schemas import FanModel, ProblemInput

PathLike = Union[str, Path]

P2_RAYS = [[1, 0], [0, 1], [-1, -1]]
P2_CONES = [[0, 1], [1, 2], [2, 0]]
# Coefficients on P2_RAYS: the line at infinity.
HYPERPLANE = [0, 0, 1]


def cyclic_fan(rays: Sequence[Sequence[int]]) -> FanModel:
    """Complete rank-2 fan whose rays are listed counter-clockwise."""
    count = len(rays)
    return FanModel(rays=[list(r) for r in rays], max_cones=[[i, (i + 1) % count] for i in range(count)])


def plane_problem(name: str, extra_rays: Sequence[Sequence[int]]) -> ProblemInput:
    """
    A toric blowup X -> P^2 given by the rays added to the fan of P^2.

    Args:
        name: problem name
        extra_rays: rays to insert, each inside a cone of P^2

    Returns:
        The problem with the hyperplane class as ample divisor
    """
    rays = sorted({tuple(r) for r in P2_RAYS + [list(r) for r in extra_rays]}, key=_angle)
    return ProblemInput(
        name=name,
        lattice_rank=2,
        fan_x=cyclic_fan(rays),
        fan_y=FanModel(rays=P2_RAYS, max_cones=P2_CONES),
        ample_on_y=HYPERPLANE,
    )


def _angle(ray) -> float:
    return math.atan2(ray[1], ray[0]) % (2 * math.pi)


class ProblemCorpus:
    """Named problems with JSON persistence."""

    def __init__(self):
        """Initialize an empty corpus."""
        self.problems: Dict[str, ProblemInput] = {}

    def add_problems(self, problems: List[ProblemInput]):
        """
        Add problems to the corpus, keyed by name.

        Args:
            problems: problems with distinct non-empty names
        """
        for problem in problems:
            if not problem.name:
                raise ValueError("corpus problems need a name")
            self.problems[problem.name] = problem

    def get_problem(self, name: str) -> ProblemInput:
        return self.problems[name]

    def names(self) -> List[str]:
        return sorted(self.problems)

    def __len__(self) -> int:
        return len(self.problems)

    def save_corpus(self, directory: PathLike):
        """Write one ``<name>.json`` per problem."""
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        for name, problem in self.problems.items():
            save_problem(problem, directory / f"{name}.json")

    @classmethod
    def load_corpus(cls, directory: PathLike) -> "ProblemCorpus":
        """Load every ``*.json`` problem of a directory."""
        corpus = cls()
        corpus.add_problems([load_problem(path) for path in sorted(Path(directory).glob("*.json"))])
        return corpus

    @classmethod
    def create_default_corpus(cls) -> "ProblemCorpus":
        """
        The five reference problems over P^2.

        Returns:
            blp2, weighted, two_point, chain and identity
        """
        corpus = cls()
        corpus.add_problems(
            [
                plane_problem("blp2", [[1, 1]]),
                plane_problem("weighted", [[1, 2]]),
                plane_problem("two_point", [[1, 1], [-1, 0]]),
                plane_problem("chain", [[1, 1], [1, 2]]),
                plane_problem("identity", []),
            ]
        )
        return corpus


def save_problem(problem: ProblemInput, path: PathLike):
    Path(path).write_text(problem.model_dump_json(indent=2) + "\n", encoding="utf-8")


def load_problem(path: PathLike) -> ProblemInput:
    """Parse a problem file; floats and malformed fields raise pydantic's ValidationError."""
    return ProblemInput.model_validate_json(Path(path).read_text(encoding="utf-8"))
