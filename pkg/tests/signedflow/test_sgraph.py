"""
Signed Multigraph Tests
Construction, switching, balance, structural edits and circuit enumeration
"""

import pytest
from hypothesis import given

from signedflow.core.sgraph import (
    SignedGraph,
    boundary_cut,
    build_graph,
    components,
    contract_edges,
    enumerate_circuits,
    euler_tour,
    find_hamiltonian_circuit,
    hamiltonian_circuits,
    is_balanced,
    is_connected,
    relabel,
    same_up_to_relabel,
    sign_of,
    split_vertex,
    switch_at,
    symmetric_difference,
    xor_edges,
)
from signedflow.exceptions import (
    BadEndpoint,
    LoopRejected,
    MixedParents,
    NegativeEdgeInContractionSet,
    NotEulerian,
    NotIncident,
    UnknownEdge,
)
from tests.conftest import TestDataFactory
from tests.generators.strategies import INVARIANCE_SETTINGS, connected_graphs

pytestmark = pytest.mark.unit


class TestConstruction:
    """Tests for graph construction and validation"""

    def test_build_graph_assigns_ids_in_order(self):
        """Edge ids should follow input order"""
        g = build_graph(3, [(0, 1, 1), (1, 2, -1), (2, 0, 1)])
        assert g.edge_ids == (0, 1, 2)
        assert g.edge(1).ends == (1, 2)
        assert g.negative_edges() == (1,)

    def test_loop_is_rejected(self):
        """Loops should never enter a graph"""
        with pytest.raises(LoopRejected):
            build_graph(2, [(1, 1, 1)])

    def test_bad_endpoint(self):
        """Endpoints outside the vertex range should be rejected"""
        with pytest.raises(BadEndpoint):
            build_graph(2, [(0, 2, 1)])

    def test_unknown_edge(self):
        """Looking up a missing edge id should raise"""
        with pytest.raises(UnknownEdge):
            TestDataFactory.unbalanced_digon().edge(7)

    def test_parallel_edges_kept(self, unbalanced_digon):
        """Parallel edges should be distinct edges with their own signs"""
        assert unbalanced_digon.degree(0) == 2
        assert [unbalanced_digon.sign(e) for e in unbalanced_digon.edge_ids] == [1, -1]

    def test_g3_is_cubic(self, g3):
        """G_3 should be cubic with three negative edges"""
        assert g3.is_cubic()
        assert len(g3.vertices) == 6
        assert len(g3.negative_edges()) == 3

    def test_other_endpoint(self, g3):
        """Edge.other should reject vertices off the edge"""
        e = g3.edge(0)
        assert e.other(0) == 1
        with pytest.raises(NotIncident):
            e.other(4)


class TestSerialization:
    """Tests for canonical graph files and fingerprints"""

    def test_dict_roundtrip_keeps_fingerprint(self, g3):
        """Reading the emitted graph file should give the same graph"""
        again = SignedGraph.from_dict(g3.to_dict())
        assert again == g3
        assert again.fingerprint == g3.fingerprint

    def test_fingerprint_depends_on_signs(self, k4):
        """Changing one sign should change the fingerprint but not the graph id"""
        flipped = k4.with_signs({0: -1})
        assert flipped.fingerprint != k4.fingerprint
        assert flipped.graph_id == k4.graph_id

    def test_canonical_json_is_compact(self, k4):
        """Compact graphs should record the vertex count"""
        assert k4.canonical_dict()["vertices"] == 4
        assert " " not in k4.canonical_json()


class TestSwitching:
    """Tests for switching and balance"""

    def test_switch_flips_cut_edges(self, k4):
        """Switching at {0} should negate exactly the edges at 0"""
        switched = switch_at(k4, [0])
        assert switched.negative_edges() == (0, 1, 2)

    def test_balanced_triangle(self):
        """A triangle with two negative edges should switch to all-positive"""
        g = TestDataFactory.balanced_triangle()
        balanced, U = is_balanced(g)
        assert balanced
        assert switch_at(g, U).negative_edges() == ()

    def test_unbalanced_triangle_returns_circuit(self):
        """An unbalanced graph should report an unbalanced circuit"""
        g = TestDataFactory.unbalanced_triangle()
        balanced, circuit = is_balanced(g)
        assert not balanced
        assert sign_of(g, circuit) == -1
        assert circuit.edges == frozenset({0, 1, 2})

    def test_balance_of_subgraph(self, g3, g3_hamiltonian):
        """The positive Hamiltonian circuit of G_3 should be balanced, G_3 itself not"""
        assert is_balanced(g3, g3_hamiltonian)[0]
        assert not is_balanced(g3)[0]

    @INVARIANCE_SETTINGS
    @given(connected_graphs())
    def test_switching_preserves_circuit_signs(self, instance):
        """Every circuit keeps its sign under any switching"""
        g = instance.graph
        U = [v for v in g.vertices if v % 2 == 0]
        switched = switch_at(g, U)
        for circuit in enumerate_circuits(g, max_length=5):
            assert sign_of(g, circuit.edges) == sign_of(switched, circuit.edges)

    @INVARIANCE_SETTINGS
    @given(connected_graphs())
    def test_switching_twice_is_identity(self, instance):
        g = instance.graph
        U = list(g.vertices[::3])
        assert switch_at(switch_at(g, U), U) == g

    @INVARIANCE_SETTINGS
    @given(connected_graphs())
    def test_balance_witness_switches_all_positive(self, instance):
        g = instance.graph
        balanced, witness = is_balanced(g)
        if balanced:
            assert switch_at(g, witness).negative_edges() == ()
        else:
            assert sign_of(g, witness) == -1


class TestStructuralEdits:
    """Tests for splitting, contraction and relabeling"""

    def test_split_vertex(self):
        """Splitting the shared vertex of a figure eight should separate the triangles"""
        g = TestDataFactory.figure_eight()
        result = split_vertex(g, 0, [3, 5])
        assert result.new_vertex == 5
        assert len(components(result.graph)) == 2
        assert result.graph.edge(3).ends == (5, 3)

    def test_split_rejects_foreign_edge(self):
        with pytest.raises(NotIncident):
            split_vertex(TestDataFactory.figure_eight(), 0, [1])

    def test_contract_positive_edge(self, k4):
        """Contracting one edge of K4 should leave a triangle with a doubled side"""
        result = contract_edges(k4, [0])
        assert result.loops_removed == 0
        assert len(result.graph.vertices) == 3
        assert len(result.graph.edges) == 5
        assert result.vertex_map[1] == 0

    def test_contract_counts_loops(self, unbalanced_digon):
        """The parallel edge of a contracted edge becomes a removed loop"""
        result = contract_edges(unbalanced_digon, [0])
        assert result.loops_removed == 1
        assert len(result.graph.edges) == 0

    def test_contract_negative_edge_rejected(self, unbalanced_digon):
        with pytest.raises(NegativeEdgeInContractionSet):
            contract_edges(unbalanced_digon, [1])

    def test_relabel_roundtrip(self, g3):
        """same_up_to_relabel should accept the map used to relabel"""
        vmap = {v: (v + 2) % 6 for v in g3.vertices}
        moved = relabel(g3, vmap)
        assert moved != g3
        assert same_up_to_relabel(g3, moved, vmap)

    def test_boundary_cut(self, k4):
        """The cut around edge 2-3 of K4 is the four edges leaving it"""
        assert boundary_cut(k4, [5]) == frozenset({1, 2, 3, 4})

    def test_symmetric_difference(self, k4):
        """Two triangles through edge 0 should sum to a 4-circuit"""
        a = k4.ref([0, 1, 3])
        b = k4.ref([0, 2, 4])
        assert symmetric_difference([a, b]).edges == frozenset({1, 2, 3, 4})
        assert xor_edges([[0, 1], [1, 2]]) == frozenset({0, 2})

    def test_mixed_parents_rejected(self, k4, g3):
        with pytest.raises(MixedParents):
            symmetric_difference([k4.ref([0]), g3.ref([0])])


class TestTraversal:
    """Tests for Euler tours and circuit enumeration"""

    def test_euler_tour_uses_each_edge_once(self):
        """A figure eight tour should be closed and cover all six edges"""
        g = TestDataFactory.figure_eight()
        tour = euler_tour(g, g.edge_ids)
        assert sorted(step.edge for step in tour) == list(g.edge_ids)
        assert tour[0].tail == tour[-1].head == 0
        for a, b in zip(tour, tour[1:]):
            assert a.head == b.tail

    def test_euler_tour_rejects_odd_degree(self, k4):
        with pytest.raises(NotEulerian):
            euler_tour(k4, k4.edge_ids)

    def test_k4_circuits(self, k4):
        """K4 has four triangles and three 4-circuits"""
        circuits = list(enumerate_circuits(k4))
        assert len(circuits) == 7
        assert sorted(len(c.edges) for c in circuits) == [3, 3, 3, 3, 4, 4, 4]

    def test_digon_is_a_circuit(self, unbalanced_digon):
        circuits = list(enumerate_circuits(unbalanced_digon))
        assert [c.edges for c in circuits] == [(0, 1)]

    def test_k4_hamiltonian_circuits(self, k4):
        assert len(list(hamiltonian_circuits(k4))) == 3

    def test_balanced_hamiltonian_circuit_of_g3(self, g3, g3_hamiltonian):
        """The only balanced Hamiltonian circuits of G_3 use evenly many negative edges"""
        circuit = find_hamiltonian_circuit(g3)
        assert circuit is not None
        assert sign_of(g3, circuit.edges) == 1
        assert len(circuit.edges) == 6

    def test_connectivity(self):
        assert not is_connected(TestDataFactory.bridged_triangles(), [0, 1, 2, 4, 5, 6])
        assert is_connected(TestDataFactory.bridged_triangles())
