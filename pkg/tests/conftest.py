"""Shared fixture-corpus loading for the test suite."""

from dataclasses import dataclass
from pathlib import Path

import pytest

from cartan import io as descio
from cartan.dirichlet import DirichletOrder, validate_order

FIXTURES_DIR = Path(__file__).resolve().parent.parent / "fixtures"

PRINCIPAL_FIXTURES = ("taf2", "taf3", "taf4", "taf6", "graph_edge", "graph_tree", "graph_diamond")
NEST_FIXTURES = ("taf2", "taf3", "taf4", "taf6", "graph_edge", "graph_tree", "graph_diamond")
NORM_FIXTURES = ("taf3", "taf4", "taf6", "graph_tree", "graph_diamond")


@dataclass(frozen=True)
class Bundle:
    name: str
    path: Path
    spec: object
    groupoid: object
    order: DirichletOrder | None
    raw_order: frozenset | None


def load_bundle(name: str) -> Bundle:
    path = FIXTURES_DIR / f"{name}.json"
    spec = descio.load(path)
    groupoid = descio.to_groupoid(spec)
    raw = descio.order_arrows(spec)
    order = None
    if raw is not None:
        result = validate_order(groupoid, raw)
        if isinstance(result, DirichletOrder):
            order = result
    return Bundle(name, path, spec, groupoid, order, raw)


@pytest.fixture(scope="session")
def corpus():
    return {name: load_bundle(name) for name in PRINCIPAL_FIXTURES}


@pytest.fixture(scope="session")
def twisted4():
    return load_bundle("twisted4")


@pytest.fixture(scope="session")
def block_nontotal():
    return load_bundle("block_nontotal")


@pytest.fixture(scope="session")
def taf4_broken():
    return load_bundle("taf4_broken")
