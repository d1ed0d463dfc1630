"""
SignedFlow Test Configuration - Shared Fixtures and Configuration
Central configuration for all test suites
"""

import os
import sys
from dataclasses import dataclass
from typing import List, Tuple

import pytest

# Add project root to path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), ".."))

from signedflow.config import load_settings  # noqa: E402
from signedflow.core.generators import (  # noqa: E402
    gen_gn,
    gen_k4,
    gen_prism_factors,
    gen_z4z2,
    gn_hamiltonian,
)
from signedflow.core.ladders import LadderKind, LadderSpec, gen_ladder  # noqa: E402
from signedflow.core.sgraph import SignedGraph, build_graph  # noqa: E402
from signedflow.core.templates import load_templates  # noqa: E402
from signedflow.core.trace import ConstructionTrace  # noqa: E402

# =============================================================================
# Test Data Factories
# =============================================================================


@dataclass
class NamedInstance:
    """A graph with the facts the tests check it against"""

    name: str
    graph: SignedGraph
    phi: object  # int, or "inf" for inadmissible graphs
    hamiltonian: Tuple[int, ...] = ()


class TestDataFactory:
    """Factory for the named signed graphs used across the suites"""

    @staticmethod
    def g3() -> SignedGraph:
        return gen_gn(3)

    @staticmethod
    def z4z2() -> SignedGraph:
        return gen_z4z2()

    @staticmethod
    def k4(negative: Tuple[int, ...] = ()) -> SignedGraph:
        return gen_k4(negative)

    @staticmethod
    def balanced_triangle() -> SignedGraph:
        return build_graph(3, [(0, 1, 1), (1, 2, -1), (2, 0, -1)])

    @staticmethod
    def unbalanced_triangle() -> SignedGraph:
        return build_graph(3, [(0, 1, 1), (1, 2, 1), (2, 0, -1)])

    @staticmethod
    def unbalanced_digon() -> SignedGraph:
        return build_graph(2, [(0, 1, 1), (0, 1, -1)])

    @staticmethod
    def short_barbell() -> SignedGraph:
        """Two unbalanced digons sharing vertex 1"""
        return build_graph(3, [(0, 1, 1), (0, 1, -1), (1, 2, 1), (1, 2, -1)])

    @staticmethod
    def long_barbell() -> SignedGraph:
        """Two unbalanced digons joined by the path 1-2 (edge 2)"""
        return build_graph(4, [(0, 1, 1), (0, 1, -1), (1, 2, 1), (2, 3, 1), (2, 3, -1)])

    @staticmethod
    def bridged_triangles() -> SignedGraph:
        """Two positive triangles joined by the bridge 2-3 (edge 3)"""
        return build_graph(
            6,
            [(0, 1, 1), (1, 2, 1), (2, 0, 1), (2, 3, 1), (3, 4, 1), (4, 5, 1), (5, 3, 1)],
        )

    @staticmethod
    def figure_eight() -> SignedGraph:
        """Two positive triangles sharing vertex 0"""
        return build_graph(5, [(0, 1, 1), (1, 2, 1), (2, 0, 1), (0, 3, 1), (3, 4, 1), (4, 0, 1)])

    @staticmethod
    def k5(negative: Tuple[int, ...] = ()) -> SignedGraph:
        signs = {eid: -1 for eid in negative}
        pairs = [(u, v) for u in range(5) for v in range(u + 1, 5)]
        return build_graph(5, [(u, v, signs.get(i, 1)) for i, (u, v) in enumerate(pairs)])

    @staticmethod
    def ladder(kind: str, n: int, negative: Tuple[int, ...] = ()) -> SignedGraph:
        return gen_ladder(LadderSpec(LadderKind(kind), n, {e: -1 for e in negative}))

    @staticmethod
    def named_instances() -> List[NamedInstance]:
        return [
            NamedInstance("g3", gen_gn(3), 6, tuple(gn_hamiltonian(3))),
            NamedInstance("z4z2", gen_z4z2(), 6),
            NamedInstance("k4", gen_k4(), 4),
            NamedInstance("balanced-triangle", TestDataFactory.balanced_triangle(), 2),
            NamedInstance("long-barbell", TestDataFactory.long_barbell(), 3),
            NamedInstance("short-barbell", TestDataFactory.short_barbell(), 2),
            NamedInstance("unbalanced-digon", TestDataFactory.unbalanced_digon(), "inf"),
            NamedInstance("bridged-triangles", TestDataFactory.bridged_triangles(), "inf"),
        ]


# =============================================================================
# Trace Helpers
# =============================================================================


def trace_cases(trace) -> List[str]:
    """Case labels of a trace and of every construction nested in it"""
    if isinstance(trace, ConstructionTrace):
        trace = trace.to_dict()
    found: List[str] = []
    if isinstance(trace, dict):
        found.extend(trace.get("cases", []))
        for value in trace.get("objects", trace).values():
            if isinstance(value, dict):
                found.extend(trace_cases(value))
    return found


# =============================================================================
# Pytest Fixtures
# =============================================================================


@pytest.fixture
def test_data_factory():
    """Provide test data factory"""
    return TestDataFactory()


@pytest.fixture
def g3():
    """G_3: cubic, three unbalanced digons, balanced Hamiltonian circuit"""
    return gen_gn(3)


@pytest.fixture
def g3_hamiltonian():
    """Edge ids of the positive Hamiltonian circuit of G_3"""
    return gn_hamiltonian(3)


@pytest.fixture
def z4z2():
    """Signed Cayley graph on Z4 x Z2 without a nowhere-zero 5-flow"""
    return gen_z4z2()


@pytest.fixture
def k4():
    """All-positive K4"""
    return gen_k4()


@pytest.fixture
def prism_with_factors():
    """All-positive CL_3 and a Kotzig decomposition"""
    return gen_prism_factors()


@pytest.fixture
def long_barbell():
    """Two unbalanced digons joined by a single edge"""
    return TestDataFactory.long_barbell()


@pytest.fixture
def unbalanced_digon():
    """A positive and a negative edge between two vertices"""
    return TestDataFactory.unbalanced_digon()


@pytest.fixture
def named_instances():
    """Every named instance with its known flow number"""
    return TestDataFactory.named_instances()


# =============================================================================
# Settings Isolation
# =============================================================================


@pytest.fixture(autouse=True)
def fresh_settings():
    """Drop cached settings and template tables around every test"""
    load_settings.cache_clear()
    load_templates.cache_clear()
    yield
    load_settings.cache_clear()
    load_templates.cache_clear()


# =============================================================================
# Test Configuration
# =============================================================================


def pytest_configure(config):
    """Configure pytest markers"""
    config.addinivalue_line("markers", "unit: Unit tests")
    config.addinivalue_line("markers", "construction: 6-flow construction tests")
    config.addinivalue_line("markers", "oracle: Exhaustive search tests")
    config.addinivalue_line("markers", "property: Hypothesis property tests")
    config.addinivalue_line("markers", "cli: Command-line tests")
    config.addinivalue_line("markers", "slow: Slow running tests")


def pytest_collection_modifyitems(config, items):
    """Modify test collection based on markers"""
    if config.getoption("--runslow", default=False):
        return

    skip_slow = pytest.mark.skip(reason="Need --runslow option to run")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


def pytest_addoption(parser):
    """Add custom command line options"""
    parser.addoption("--runslow", action="store_true", default=False, help="Run slow tests")
