from pathlib import Path

import pytest

from src.controller import DEFAULT_FIXTURE_DIR, Settings, load_topology
from src.harness import Corpus, exhaustive_corpus, special_topologies
from src.mset import MSpace
from src.semi import SemiFamily, enumerate_semi
from src.topology import MTopology

REFERENCE_FIXTURE = DEFAULT_FIXTURE_DIR / "reference_space.json"
SOM_INTERSECTION_FIXTURE = DEFAULT_FIXTURE_DIR / "som_intersection.json"
BASIS_FIXTURE = DEFAULT_FIXTURE_DIR / "basis_example.json"
MISSING_EMPTY_FIXTURE = DEFAULT_FIXTURE_DIR / "invalid" / "missing_empty.json"


@pytest.fixture(scope="session")
def fixture_dir() -> Path:
    return DEFAULT_FIXTURE_DIR


@pytest.fixture(scope="session")
def reference() -> MTopology:
    """X = {a, b, c}, w = 5, M = {5/a, 2/b, 3/c} with its six-member topology."""
    return load_topology(REFERENCE_FIXTURE).topology


@pytest.fixture(scope="session")
def ref_space(reference: MTopology) -> MSpace:
    return reference.space


@pytest.fixture(scope="session")
def ref_semi(reference: MTopology) -> SemiFamily:
    return enumerate_semi(reference)


@pytest.fixture(scope="session")
def three_point() -> MTopology:
    """{phi, {1/a}, {1/b}, {1/a, 1/b}, M} on M = {1/a, 1/b, 1/c}."""
    return load_topology(SOM_INTERSECTION_FIXTURE).topology


@pytest.fixture(scope="session")
def discrete(reference: MTopology) -> MTopology:
    return special_topologies(reference.ground)["discrete"]


@pytest.fixture(scope="session")
def indiscrete(reference: MTopology) -> MTopology:
    ground = reference.ground
    return MTopology(ground, (ground.space.empty(), ground))


@pytest.fixture(scope="session")
def small_corpus() -> Corpus:
    """Every topology over |X| = 2, w = 1 and over |X| = 1, w = 2."""
    return exhaustive_corpus(spaces=((2, 1), (1, 2)))


@pytest.fixture(scope="session")
def default_corpus() -> Corpus:
    return exhaustive_corpus()


@pytest.fixture
def settings() -> Settings:
    return Settings()
