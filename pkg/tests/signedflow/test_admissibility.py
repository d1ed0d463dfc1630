"""
Flow Admissibility Tests
Signed-circuit classification, inadmissibility edges and signed-circuit covers
"""

import pytest
from hypothesis import given
from hypothesis import strategies as st

from signedflow.core.admissibility import (
    CircuitTag,
    classify_signed_circuit,
    cover_is_complete,
    edge_blocks_flows,
    is_flow_admissible,
    signed_circuit_cover,
    signed_circuit_through,
)
from signedflow.core.certificates import CertificateKind
from signedflow.core.sgraph import switch_at
from tests.conftest import TestDataFactory
from tests.generators.strategies import (
    INVARIANCE_SETTINGS,
    PROPERTY_SETTINGS,
    connected_graphs,
)

pytestmark = pytest.mark.unit


class TestClassification:
    """Tests for classify_signed_circuit"""

    def test_balanced_circuit(self):
        g = TestDataFactory.balanced_triangle()
        result = classify_signed_circuit(g, g.edge_ids)
        assert result.accepted
        assert result.kind.tag == CircuitTag.BALANCED_CIRCUIT

    def test_unbalanced_circuit_is_not_signed(self):
        g = TestDataFactory.unbalanced_triangle()
        result = classify_signed_circuit(g, g.edge_ids)
        assert not result.accepted
        assert result.reason == "unbalanced circuit"

    def test_short_barbell(self):
        """Two unbalanced digons at one vertex form a short barbell"""
        g = TestDataFactory.short_barbell()
        result = classify_signed_circuit(g, g.edge_ids)
        assert result.accepted
        assert result.kind.tag == CircuitTag.SHORT_BARBELL
        assert sorted(sorted(c) for c in result.kind.circuits) == [[0, 1], [2, 3]]

    def test_long_barbell(self, long_barbell):
        """The joining edge should be reported as the barbell path"""
        result = classify_signed_circuit(long_barbell, long_barbell.edge_ids)
        assert result.accepted
        assert result.kind.tag == CircuitTag.LONG_BARBELL
        assert result.kind.path == (2,)
        assert result.kind.edges == frozenset(long_barbell.edge_ids)

    def test_barbell_of_balanced_circuits_rejected(self):
        g = TestDataFactory.figure_eight()
        result = classify_signed_circuit(g, g.edge_ids)
        assert not result.accepted
        assert result.reason == "barbell circuit is balanced"

    def test_empty_and_disconnected(self, k4):
        assert classify_signed_circuit(k4, []).reason == "empty edge set"
        assert classify_signed_circuit(k4, [0, 5]).reason == "disconnected"

    def test_theta_rejected(self, k4):
        """Three internally disjoint paths are no signed circuit"""
        result = classify_signed_circuit(k4, [0, 1, 2, 3, 4])
        assert not result.accepted


class TestAdmissibility:
    """Tests for is_flow_admissible"""

    def test_unbalanced_digon_inadmissible(self, unbalanced_digon):
        """Deleting either edge leaves a balanced graph"""
        result = is_flow_admissible(unbalanced_digon)
        assert not result
        assert result.edge == 0
        assert result.certificate.kind == CertificateKind.INADMISSIBILITY_EDGE
        assert result.certificate.payload == {"edge": 0}

    def test_bridge_in_balanced_graph(self):
        g = TestDataFactory.bridged_triangles()
        result = is_flow_admissible(g)
        assert not result
        assert result.edge == 3
        assert edge_blocks_flows(g, 3)
        assert not edge_blocks_flows(g, 0)

    def test_long_barbell_admissible(self, long_barbell):
        """A bridge between unbalanced parts does not block flows"""
        result = is_flow_admissible(long_barbell)
        assert result
        assert not edge_blocks_flows(long_barbell, 2)
        assert [kind.tag for kind in result.cover] == [CircuitTag.LONG_BARBELL]
        assert result.certificate.kind == CertificateKind.SIGNED_CIRCUIT_COVER

    def test_unbalanced_triangle_inadmissible(self):
        assert not is_flow_admissible(TestDataFactory.unbalanced_triangle())

    def test_g3_admissible(self, g3):
        result = is_flow_admissible(g3)
        assert result
        assert cover_is_complete(g3, result.cover)

    def test_cover_budget_leaves_result_uncertified(self, g3, monkeypatch):
        """Running out of circuit budget still reports admissibility, without a cover"""
        monkeypatch.setenv("SFF_CIRCUIT_BUDGET", "1")
        result = is_flow_admissible(g3)
        assert result
        assert result.certificate is None
        assert result.cover == ()

    def test_uncertified_result(self, k4):
        result = is_flow_admissible(k4, certify=False)
        assert result
        assert result.certificate is None
        assert result.cover == ()

    @pytest.mark.property
    @PROPERTY_SETTINGS
    @given(connected_graphs())
    def test_cover_exists_iff_admissible(self, instance):
        """Admissible graphs are covered by signed circuits, others are not"""
        g = instance.graph
        cover = signed_circuit_cover(g)
        if is_flow_admissible(g, certify=False):
            assert cover is not None
            assert cover_is_complete(g, cover)
            for kind in cover:
                assert classify_signed_circuit(g, kind.edges).accepted
        else:
            assert cover is None

    @pytest.mark.property
    @INVARIANCE_SETTINGS
    @given(connected_graphs(), st.data())
    def test_admissibility_survives_switching(self, instance, data):
        g = instance.graph
        U = data.draw(st.lists(st.sampled_from(g.vertices), unique=True))
        before = is_flow_admissible(g, certify=False)
        after = is_flow_admissible(switch_at(g, U), certify=False)
        assert bool(before) == bool(after)


class TestSignedCircuitSearch:
    """Tests for signed_circuit_through"""

    def test_prefers_balanced_circuit(self, k4):
        found = signed_circuit_through(k4, 0)
        assert found.tag == CircuitTag.BALANCED_CIRCUIT
        assert len(found.edges) == 3
        assert 0 in found.edges

    def test_short_barbell_through_digon(self):
        g = TestDataFactory.short_barbell()
        found = signed_circuit_through(g, 2)
        assert found.tag == CircuitTag.SHORT_BARBELL
        assert found.edges == frozenset(g.edge_ids)

    def test_no_signed_circuit(self, unbalanced_digon):
        assert signed_circuit_through(unbalanced_digon, 0) is None
