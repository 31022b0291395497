"""Corpus problems and SVG output."""

from .corpus import ProblemCorpus, cyclic_fan, load_problem, plane_problem, save_problem
from .svg import emit_svg

__all__ = ["ProblemCorpus", "cyclic_fan", "load_problem", "plane_problem", "save_problem", "emit_svg"]
