"""
Cubic Reduction
Covering pairs of even subgraphs and the reduction to signed cubic graphs with an even 2-factor
"""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Mapping, Optional, Set, Tuple

from ..config import get_search_settings
from ..exceptions import (
    GraphError,
    InvalidPair,
    NegativeEdgeInContractionSet,
    NotEvenEulerian,
    NotSupereulerian,
)
from .admissibility import is_flow_admissible
from .flows import (
    FlowAssignment,
    FlowMode,
    VerificationReport,
    default_orientation,
    require_verified,
    restrict_flow,
    switch_flow,
    two_nzf_even_eulerian,
    z2_nzf_on_even,
)
from .search import FlowSearch
from .sgraph import (
    Edge,
    SignedGraph,
    SubgraphLike,
    SubgraphRef,
    components,
    contract_edges,
    degrees_in,
    edge_set,
    euler_tour,
    is_balanced,
    is_connected,
    odd_vertex,
    same_up_to_relabel,
    sign_of,
    switch_at,
    vertex_set,
    xor_edges,
)
from .trace import ConstructionTrace

logger = logging.getLogger("signedflow.reduction")


# =============================================================================
# Types
# =============================================================================


@dataclass(frozen=True)
class CoveringPair:
    """Two even subgraphs covering every edge, with mod-2 flow witnesses"""

    h1: SubgraphRef
    h2: SubgraphRef
    f1: FlowAssignment
    f2: FlowAssignment
    fundamental: Mapping[int, FrozenSet[int]] = field(default_factory=dict)


@dataclass(frozen=True)
class ComponentMatch:
    """One component of H1 and its image in the 2-factor J"""

    h1_vertices: FrozenSet[int]
    h1_edges: FrozenSet[int]
    j_edges: FrozenSet[int]


@dataclass(frozen=True)
class ReductionResult:
    g_prime: SignedGraph
    S: FrozenSet[int]
    J: FrozenSet[int]
    bijection: Tuple[ComponentMatch, ...]
    vertex_origin: Mapping[int, int]
    trace: ConstructionTrace

    def to_dict(self) -> Dict[str, object]:
        compact, vmap = self.g_prime.compact()
        return {
            "g_prime": compact.canonical_dict(),
            "S": sorted(self.S),
            "J": sorted(self.J),
            "bijection": [
                {
                    "h1_vertices": sorted(m.h1_vertices),
                    "h1_edges": sorted(m.h1_edges),
                    "j_edges": sorted(m.j_edges),
                }
                for m in self.bijection
            ],
            "vertex_origin": {str(vmap[v]): o for v, o in sorted(self.vertex_origin.items())},
            "trace": self.trace.to_dict(),
        }


# =============================================================================
# Covering Pairs
# =============================================================================


def spanning_eulerian_subgraph(g: SignedGraph, budget: Optional[int] = None) -> FrozenSet[int]:
    """First connected spanning even subgraph in mod-2 search order"""
    if odd_vertex(g, g.edge_ids) is None and is_connected(g):
        return frozenset(g.edge_ids)
    budget = budget if budget is not None else get_search_settings().budget_nodes
    domains = {e: (1, 0) for e in g.edge_ids}
    search = FlowSearch(g, domains, default_orientation(g), modulus=2, budget=budget)
    for solution in search.solutions():
        ids = frozenset(e for e, x in solution.items() if x)
        if _is_spanning_eulerian(g, ids):
            return ids
    raise NotSupereulerian()


def _is_spanning_eulerian(g: SignedGraph, ids: FrozenSet[int]) -> bool:
    if len(g.vertices) > 1 and len(vertex_set(g, ids)) != len(g.vertices):
        return False
    return odd_vertex(g, ids) is None and is_connected(g, ids)


def _path_within(g: SignedGraph, allowed: FrozenSet[int], a: int, b: int) -> List[int]:
    """Shortest a-b path inside allowed, scanning edges by id"""
    prev: Dict[int, Tuple[int, int]] = {}
    seen = {a}
    queue = deque([a])
    while queue:
        v = queue.popleft()
        if v == b:
            break
        for eid in g.incident(v):
            if eid not in allowed:
                continue
            w = g.edge(eid).other(v)
            if w not in seen:
                seen.add(w)
                prev[w] = (v, eid)
                queue.append(w)
    if b not in seen:
        raise InvalidPair(f"vertices {a} and {b} are not joined inside H1")
    path = []
    at = b
    while at != a:
        at, eid = prev[at]
        path.append(eid)
    return path[::-1]


def covering_pair_supereulerian(
    g: SignedGraph, h1: Optional[SubgraphLike] = None, budget: Optional[int] = None
) -> CoveringPair:
    """
    H1 a spanning Eulerian subgraph; H2 the symmetric difference of the
    fundamental circuits of the edges outside H1.
    """
    if h1 is None:
        h1_ids = spanning_eulerian_subgraph(g, budget)
    else:
        h1_ids = edge_set(g, h1)
        if not _is_spanning_eulerian(g, h1_ids):
            raise InvalidPair("witness is not a connected spanning even subgraph")

    fundamental: Dict[int, FrozenSet[int]] = {}
    for eid in g.edge_ids:
        if eid in h1_ids:
            continue
        e = g.edge(eid)
        fundamental[eid] = frozenset(_path_within(g, h1_ids, e.u, e.v)) | {eid}
    h2_ids = xor_edges(fundamental.values())
    logger.debug(f"Covering pair: |H1|={len(h1_ids)}, |H2|={len(h2_ids)}")
    return CoveringPair(
        h1=g.ref(h1_ids, spanning=True),
        h2=g.ref(h2_ids),
        f1=z2_nzf_on_even(g, h1_ids),
        f2=z2_nzf_on_even(g, h2_ids),
        fundamental=fundamental,
    )


# =============================================================================
# Three-Regularization
# =============================================================================


class _Builder:
    """Mutable edge table used while the reduction rewires vertices"""

    def __init__(self, g: SignedGraph):
        self.vertices: Set[int] = set(g.vertices)
        self.ends: Dict[int, List[int]] = {eid: [e.u, e.v] for eid, e in g.edges.items()}
        self.sign: Dict[int, int] = {eid: e.sign for eid, e in g.edges.items()}
        self.inc: Dict[int, Set[int]] = {v: set(g.incident(v)) for v in g.vertices}
        self.origin: Dict[int, int] = {v: v for v in g.vertices}
        self.next_vertex = g.next_vertex_id
        self.next_edge = g.next_edge_id

    def new_vertex(self, origin: int) -> int:
        v = self.next_vertex
        self.next_vertex += 1
        self.vertices.add(v)
        self.inc[v] = set()
        self.origin[v] = origin
        return v

    def new_edge(self, u: int, v: int, sign: int = 1) -> int:
        eid = self.next_edge
        self.next_edge += 1
        self.ends[eid] = [u, v]
        self.sign[eid] = sign
        self.inc[u].add(eid)
        self.inc[v].add(eid)
        return eid

    def move(self, eid: int, old: int, new: int) -> None:
        ends = self.ends[eid]
        ends[ends.index(old)] = new
        self.inc[old].discard(eid)
        self.inc[new].add(eid)

    def remove_vertex(self, v: int) -> None:
        self.vertices.discard(v)
        del self.inc[v]
        del self.origin[v]

    def build(self) -> SignedGraph:
        return SignedGraph(
            self.vertices,
            (Edge(eid, u, v, self.sign[eid]) for eid, (u, v) in self.ends.items()),
        )


def _validate_pair(g: SignedGraph, pair: CoveringPair) -> Tuple[FrozenSet[int], FrozenSet[int]]:
    try:
        h1 = edge_set(g, pair.h1)
        h2 = edge_set(g, pair.h2)
    except GraphError as e:
        raise InvalidPair(str(e)) from e
    if odd_vertex(g, h1) is not None or odd_vertex(g, h2) is not None:
        raise InvalidPair("H1 and H2 must be even")
    if h1 | h2 != set(g.edge_ids):
        raise InvalidPair("H1 and H2 do not cover every edge")
    if any(g.degree(v) == 0 for v in g.vertices) and len(g.vertices) > 1:
        raise InvalidPair("graph has an isolated vertex")
    return h1, h2


def three_regularize(g: SignedGraph, pair: CoveringPair) -> ReductionResult:
    """
    Rebuild g as a cubic graph whose 2-factor J mirrors the components of H1.

    Vertices of I-degree above 2 are split along the Euler tour of their
    component, split clusters are rejoined by positive digons or cliques,
    and every vertex of degree other than 3 is blown up into a positive
    circuit. All added edges form S.
    """
    h1, _ = _validate_pair(g, pair)
    trace = ConstructionTrace()
    b = _Builder(g)
    clusters: Dict[int, List[int]] = {}
    splits: List[Dict[str, int]] = []

    h1_components = components(g, h1)
    i_degree = dict(degrees_in(g, h1))
    for _, comp_edges in h1_components:
        if not comp_edges:
            continue
        tour = euler_tour(g, comp_edges)
        for x in range(1, len(tour)):
            v = tour[x].tail
            in_edge, out_edge = tour[x - 1].edge, tour[x].edge
            if i_degree.get(v, 0) <= 2:
                continue
            clone = b.new_vertex(b.origin[v])
            b.move(in_edge, v, clone)
            b.move(out_edge, v, clone)
            i_degree[v] -= 2
            i_degree[clone] = 2
            clusters.setdefault(v, []).append(clone)
            splits.append({"vertex": v, "clone": clone, "e_in": in_edge, "e_out": out_edge})
    if splits:
        trace.case("split-tour-pairs")
    trace.record("splits", splits)

    added: Set[int] = set()
    cliques: Dict[int, List[int]] = {}
    for v, clones in sorted(clusters.items()):
        members = [v] + clones
        if len(clones) == 1:
            new = [b.new_edge(v, clones[0]), b.new_edge(v, clones[0])]
        else:
            new = [
                b.new_edge(members[i], members[j])
                for i in range(len(members))
                for j in range(i + 1, len(members))
            ]
        cliques[v] = new
        added.update(new)
    trace.record("clusters", {v: [v] + c for v, c in clusters.items()})
    trace.record("clique_edges", cliques)

    j_edges: Set[int] = set(h1)
    blowups: Dict[int, List[int]] = {}
    whole_circuits: Dict[int, FrozenSet[int]] = {}
    for w in sorted(b.vertices):
        incident = sorted(b.inc[w])
        d = len(incident)
        on_j = [eid for eid in incident if eid in h1]
        rest = [eid for eid in incident if eid not in h1]
        if d == 0 or (d == 3 and on_j):
            continue
        ring = [b.new_vertex(b.origin[w]) for _ in range(d)]
        path_edges = [b.new_edge(ring[i], ring[i + 1]) for i in range(d - 1)]
        closing = b.new_edge(ring[-1], ring[0])
        added.update(path_edges)
        added.add(closing)
        if on_j:
            b.move(on_j[0], w, ring[0])
            b.move(on_j[1], w, ring[-1])
            for slot, eid in zip(ring[1:-1], rest):
                b.move(eid, w, slot)
            j_edges.update(path_edges)
        else:
            for slot, eid in zip(ring, rest):
                b.move(eid, w, slot)
            circuit = frozenset(path_edges) | {closing}
            j_edges.update(circuit)
            whole_circuits[w] = circuit
        b.remove_vertex(w)
        blowups[w] = ring
    if blowups:
        trace.case("blow-up")
    trace.record("blowups", blowups)

    g_prime = b.build()
    J = frozenset(j_edges)
    bijection = []
    j_parts = [ids for _, ids in components(g_prime, J) if ids]
    for comp_vertices, comp_edges in h1_components:
        if comp_edges:
            image = next(ids for ids in j_parts if min(comp_edges) in ids)
        else:
            (w,) = tuple(comp_vertices)
            image = whole_circuits.get(w, frozenset())
        bijection.append(ComponentMatch(comp_vertices, comp_edges, image))

    S = frozenset(added)
    trace.record("S", S)
    trace.record("J", J)
    logger.info(
        f"Reduced |V|={len(g.vertices)} |E|={len(g.edges)} to cubic |V'|={len(g_prime.vertices)} "
        f"|E'|={len(g_prime.edges)} with |S|={len(S)}"
    )
    return ReductionResult(g_prime, S, J, tuple(bijection), dict(b.origin), trace)


def verify_reduction(g: SignedGraph, r: ReductionResult) -> VerificationReport:
    """Re-check every structural claim of a reduction result"""
    failures: List[str] = []
    gp = r.g_prime

    if not gp.is_cubic():
        failures.append("not-cubic")

    deg = degrees_in(gp, r.J)
    if any(deg.get(v, 0) != 2 for v in gp.vertices):
        failures.append("J-not-2-factor")
    elif any(len(ids) % 2 for _, ids in components(gp, r.J) if ids):
        failures.append("J-odd-circuit")

    images = [m.j_edges for m in r.bijection]
    j_parts = {ids for _, ids in components(gp, r.J) if ids}
    if set(images) != j_parts or len(images) != len(j_parts):
        failures.append("bijection-not-onto")
    if any(sign_of(g, m.h1_edges) != sign_of(gp, m.j_edges) for m in r.bijection):
        failures.append("sign-mismatch")

    if any(gp.sign(eid) < 0 for eid in r.S):
        failures.append("negative-S-edge")
    else:
        try:
            contracted = contract_edges(gp, r.S)
            rep_origin = {rep: r.vertex_origin[rep] for rep in contracted.graph.vertices}
            if not same_up_to_relabel(contracted.graph, g, rep_origin):
                failures.append("contraction-mismatch")
        except NegativeEdgeInContractionSet:
            failures.append("negative-S-edge")

    if is_flow_admissible(g, certify=False) and not is_flow_admissible(gp, certify=False):
        failures.append("admissibility-lost")

    if failures:
        return VerificationReport(False, reason=failures[0], failures=tuple(failures))
    return VerificationReport(True)


# =============================================================================
# Z4 Flows
# =============================================================================


def check_even_eulerian(g: SignedGraph, h: SubgraphLike) -> FrozenSet[int]:
    ids = edge_set(g, h)
    if len(g.vertices) > 1 and len(vertex_set(g, ids)) != len(g.vertices):
        raise NotEvenEulerian("not spanning")
    if odd_vertex(g, ids) is not None:
        raise NotEvenEulerian("odd degree")
    if not is_connected(g, ids):
        raise NotEvenEulerian("disconnected")
    if sum(1 for e in ids if g.sign(e) < 0) % 2:
        raise NotEvenEulerian("odd number of negative edges")
    return ids


def z4_nzf_from_even_eulerian(g: SignedGraph, h: SubgraphLike) -> FlowAssignment:
    """
    Z4-NZF from a spanning even Eulerian subgraph.

    On the cubic reduction the 2-factor J is one balanced even circuit:
    after switching it all-positive, J alternates +1/-1 and the perfect
    matching carries 2.
    """
    ids = check_even_eulerian(g, h)
    if ids == frozenset(g.edge_ids):
        logger.info("Spanning subgraph is the whole graph; using its 2-flow")
        flow = two_nzf_even_eulerian(g)
        return require_verified(g, flow.with_mode(FlowMode.modular(4)), "z4 direct")

    r = three_regularize(g, covering_pair_supereulerian(g, ids))
    gp = r.g_prime
    balanced, U = is_balanced(gp, r.J)
    if not balanced:
        raise NotEvenEulerian("reduced 2-factor is unbalanced")
    gs = switch_at(gp, U)  # type: ignore[arg-type]

    tau = default_orientation(gs)
    values = {eid: 2 for eid in gs.edge_ids}
    parity = 1
    for step in euler_tour(gs, r.J):
        e = gs.edge(step.edge)
        tau[step.edge] = (1, -1) if step.tail == e.u else (-1, 1)
        values[step.edge] = parity
        parity = -parity
    on_switched = require_verified(
        gs, FlowAssignment(tau, values, FlowMode.modular(4)), "z4 on cubic reduction"
    )
    on_reduced = switch_flow(gp, on_switched, U)  # type: ignore[arg-type]
    pulled = restrict_flow(on_reduced, gp, g, r.vertex_origin)
    return require_verified(g, pulled, "z4 pull-back")
