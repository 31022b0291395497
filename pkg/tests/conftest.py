"""Shared fixtures for the test suite."""

import pytest

from src.toric import ToricVariety, TorusDivisor
from src.utils import ProblemCorpus

from .pipeline_cache import BLP2, P2


@pytest.fixture
def corpus():
    return ProblemCorpus.create_default_corpus()


@pytest.fixture
def p2():
    return ToricVariety(P2, name="P2")


@pytest.fixture
def blp2():
    return ToricVariety(BLP2, name="BlP2")


@pytest.fixture
def hyperplane(p2):
    return TorusDivisor.from_mapping(p2, {(-1, -1): 1})
