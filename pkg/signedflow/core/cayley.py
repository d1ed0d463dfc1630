"""
Signed Abelian Cayley Graphs
Generation, ladder recognition, 6-flows and flow numbers of odd-order groups
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import reduce
from itertools import product
from operator import mul
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple

from ..config import get_search_settings
from ..exceptions import (
    BudgetExceeded,
    Disconnected,
    EvenNegativeCount,
    EvenOrder,
    IdentityInS,
    InputError,
    NotBalancedHamiltonian,
    NotDecomposition,
    NotFlowAdmissible,
    NotInverseClosed,
    PreconditionViolated,
    SignedFlowError,
)
from .admissibility import is_flow_admissible
from .certificates import Certificate, CertificateKind, certify_flow, flow_payload
from .flows import (
    FlowAssignment,
    FlowMode,
    require_verified,
    restrict_flow,
    three_nzf_from_decomposition,
    two_nzf_even_eulerian,
)
from .ladders import LadderKind, LadderSpec, gen_ladder, six_nzf_ladder
from .oracle import exists_nzf
from .sgraph import (
    SignedGraph,
    build_graph,
    components,
    degrees_in,
    euler_tour,
    hamiltonian_circuits,
    is_balanced,
    is_connected,
    relabel,
    switch_at,
)
from .six_flow import HamiltonianFrame, check_hamiltonian
from .trace import ConstructionTrace

logger = logging.getLogger("signedflow.cayley")

Element = Tuple[int, ...]


@dataclass(frozen=True)
class CayleySpec:
    """
    Abelian group Z_n1 x ... x Z_nk with a connection set S.

    Signs are keyed by the edge ids gen_cayley assigns; absent edges are positive.
    """

    group: Tuple[int, ...]
    connection: Tuple[Element, ...]
    signature: Mapping[int, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        group = tuple(int(n) for n in self.group)
        if not group or any(n < 1 for n in group):
            raise InputError("Cyclic orders must be positive", {"group": group})
        connection = []
        for s in self.connection:
            if len(s) != len(group):
                raise InputError(
                    "Element has the wrong number of coordinates", {"element": tuple(s)}
                )
            element = tuple(int(x) % n for x, n in zip(s, group))
            if element not in connection:
                connection.append(element)
        object.__setattr__(self, "group", group)
        object.__setattr__(self, "connection", tuple(connection))
        negatives = {e: s for e, s in sorted(self.signature.items()) if s < 0}
        object.__setattr__(self, "signature", negatives)

    @property
    def order(self) -> int:
        return reduce(mul, self.group, 1)

    def add(self, a: Element, b: Element) -> Element:
        return tuple((x + y) % n for x, y, n in zip(a, b, self.group))

    def inverse(self, a: Element) -> Element:
        return tuple((-x) % n for x, n in zip(a, self.group))

    def elements(self) -> List[Element]:
        """Group elements in lexicographic coordinate order; index = vertex id"""
        return list(product(*(range(n) for n in self.group)))

    def with_signature(self, signature: Mapping[int, int]) -> "CayleySpec":
        return CayleySpec(self.group, self.connection, signature)


@dataclass(frozen=True)
class CayleyEdge:
    id: int
    u: int
    v: int
    generator: Element  # min(s, -s) of the inverse pair


def cayley_edges(spec: CayleySpec) -> List[CayleyEdge]:
    """
    One edge {g, g+s} per inverse pair {s, -s}, pairs in order of first
    appearance in S and vertices in element order; involutions once per pair.
    """
    identity = tuple(0 for _ in spec.group)
    if identity in spec.connection:
        raise IdentityInS()
    members = set(spec.connection)
    for s in spec.connection:
        if spec.inverse(s) not in members:
            raise NotInverseClosed(s)

    elements = spec.elements()
    index = {g: i for i, g in enumerate(elements)}
    edges: List[CayleyEdge] = []
    seen = set()
    for s in spec.connection:
        rep = min(s, spec.inverse(s))
        if rep in seen:
            continue
        seen.add(rep)
        involution = rep == spec.inverse(rep)
        for g in elements:
            u, v = index[g], index[spec.add(g, rep)]
            if involution and u > v:
                continue
            edges.append(CayleyEdge(len(edges), u, v, rep))
    return edges


def gen_cayley(spec: CayleySpec) -> SignedGraph:
    entries = [(e.u, e.v, spec.signature.get(e.id, 1)) for e in cayley_edges(spec)]
    return build_graph(spec.order, entries)


def signature_from_pairs(
    spec: CayleySpec, negative: Iterable[Tuple[Element, Element]]
) -> Dict[int, int]:
    """Edge-id signature from negative edges given by their endpoint elements"""
    index = {g: i for i, g in enumerate(spec.elements())}
    by_ends = {frozenset((e.u, e.v)): e.id for e in cayley_edges(spec)}
    signature: Dict[int, int] = {}
    for a, b in negative:
        try:
            ends = frozenset(
                (index[tuple(int(x) % n for x, n in zip(a, spec.group))],
                 index[tuple(int(x) % n for x, n in zip(b, spec.group))])
            )
            signature[by_ends[ends]] = -1
        except KeyError:
            pair = {"pair": (tuple(a), tuple(b))}
            raise InputError("Negative pair is not an edge", pair) from None
    return signature


# =============================================================================
# Ladder Layout
# =============================================================================


@dataclass(frozen=True)
class LadderLayout:
    """A cubic Cayley graph read as a ladder: vertex and edge maps into canonical labels"""

    spec: LadderSpec
    vertex_map: Mapping[int, int]
    edge_map: Mapping[int, int]


def _edge_between(
    g: SignedGraph, allowed: FrozenSet[int], a: int, b: int, used: set
) -> Optional[int]:
    for eid in g.incident(a):
        if eid in allowed and eid not in used and g.edge(eid).other(a) == b:
            return eid
    return None


def _layout_with_rungs(g: SignedGraph, rungs: FrozenSet[int]) -> Optional[LadderLayout]:
    rest = frozenset(g.edge_ids) - rungs
    if any(d != 1 for d in (degrees_in(g, rungs).get(v, 0) for v in g.vertices)):
        return None
    if any(d != 2 for d in (degrees_in(g, rest).get(v, 0) for v in g.vertices)):
        return None
    partner = {}
    for eid in rungs:
        e = g.edge(eid)
        partner[e.u] = (e.v, eid)
        partner[e.v] = (e.u, eid)

    cycles = [c for c in components(g, rest) if c[1]]
    count = len(g.vertices)
    n = count // 2
    if len(cycles) == 1:
        tour = euler_tour(g, rest, start=min(g.vertices))
        walk = [step.tail for step in tour]
        if any(partner[walk[j]][0] != walk[j + n] for j in range(n)):
            return None
        vertex_map = {w: j for j, w in enumerate(walk)}
        edge_map = {step.edge: n + j for j, step in enumerate(tour)}
        edge_map.update({partner[walk[j]][1]: j for j in range(n)})
        kind = LadderKind.MOEBIUS
    elif len(cycles) == 2 and len(cycles[0][0]) == n:
        first = cycles[0][1]
        tour = euler_tour(g, first, start=min(cycles[0][0]))
        a = [step.tail for step in tour]
        b = [partner[x][0] for x in a]
        used: set = set()
        b_edges = []
        for j in range(n):
            eid = _edge_between(g, rest - first, b[j], b[(j + 1) % n], used)
            if eid is None:
                return None
            used.add(eid)
            b_edges.append(eid)
        vertex_map = {x: j for j, x in enumerate(a)}
        vertex_map.update({x: n + j for j, x in enumerate(b)})
        edge_map = {partner[x][1]: j for j, x in enumerate(a)}
        edge_map.update({step.edge: n + j for j, step in enumerate(tour)})
        edge_map.update({eid: 2 * n + j for j, eid in enumerate(b_edges)})
        kind = LadderKind.CIRCULAR
    else:
        return None
    spec = LadderSpec(kind, n, {edge_map[eid]: g.sign(eid) for eid in g.edge_ids})
    return LadderLayout(spec, vertex_map, edge_map)


def ladder_layout(g: SignedGraph, spec: CayleySpec) -> Optional[LadderLayout]:
    """Read a cubic Cayley graph as a circular or Moebius ladder, trying each class as rungs"""
    if not g.is_cubic() or len(g.vertices) < 4:
        return None
    classes: Dict[Element, List[int]] = {}
    for e in cayley_edges(spec):
        classes.setdefault(e.generator, []).append(e.id)
    for generator, ids in classes.items():
        layout = _layout_with_rungs(g, frozenset(ids))
        if layout is not None:
            logger.debug(
                f"Ladder layout with rung generator {generator}: "
                f"{layout.spec.kind.value} n={layout.spec.n}"
            )
            return layout
    return None


def flow_through_layout(
    g: SignedGraph, layout: LadderLayout, flow: FlowAssignment
) -> FlowAssignment:
    """Carry a flow on the canonical ladder back to the Cayley labels"""
    labelled = relabel(g, layout.vertex_map, layout.edge_map)
    on_labelled = restrict_flow(flow, gen_ladder(layout.spec), labelled, {})
    tau = {eid: on_labelled.tau[layout.edge_map[eid]] for eid in g.edge_ids}
    values = {eid: on_labelled.values[layout.edge_map[eid]] for eid in g.edge_ids}
    return FlowAssignment(tau, values, flow.mode)


# =============================================================================
# 6-Flows
# =============================================================================


def _check_admissible(g: SignedGraph) -> None:
    admissible = is_flow_admissible(g, certify=False)
    if not admissible:
        raise NotFlowAdmissible(admissible.edge)


def six_nzf_abelian_cayley(spec: CayleySpec) -> Tuple[FlowAssignment, ConstructionTrace]:
    """
    Nowhere-zero 6-flow of a flow-admissible signed abelian Cayley graph.

    |S| >= 4 is settled by a 4-flow search, |S| = 3 by the ladder
    constructions and |S| = 2 by a tour flow on the single circuit.
    """
    g = gen_cayley(spec)
    trace = ConstructionTrace()
    trace.record("group", list(spec.group))
    trace.record("connection", [list(s) for s in spec.connection])
    degree = len(spec.connection)

    if not g.edges:
        trace.case("edgeless")
        return FlowAssignment({}, {}, FlowMode.integer(6)), trace
    _check_admissible(g)

    if degree >= 4:
        trace.case("four-flow-search")
        report = exists_nzf(g, 4)
        if report.witness is None:
            raise PreconditionViolated(f"no 4-flow found on a {degree}-regular Cayley graph")
        return require_verified(g, report.witness, "Cayley 4-flow"), trace

    if degree == 3:
        layout = ladder_layout(g, spec)
        if layout is None:
            raise PreconditionViolated("cubic Cayley graph is not a ladder")
        trace.case(f"ladder-{layout.spec.kind.value}")
        trace.record("ladder", layout.spec.to_dict())
        flow, inner = six_nzf_ladder(layout.spec)
        trace.record("construction", inner)
        pulled = flow_through_layout(g, layout, flow)
        return require_verified(g, pulled, "Cayley ladder 6-flow"), trace

    if degree == 2:
        trace.case("circuit")
        flow = two_nzf_even_eulerian(g)
        return require_verified(g, flow, "Cayley circuit flow"), trace

    raise NotFlowAdmissible()


# =============================================================================
# Odd-Order Flow Numbers
# =============================================================================


def _is_hamiltonian_class(g: SignedGraph, ids: Sequence[int]) -> bool:
    try:
        check_hamiltonian(g, ids, balanced=False)
    except NotBalancedHamiltonian:
        return False
    return True


def hamilton_decomposition(
    g: SignedGraph, spec: Optional[CayleySpec] = None, budget: Optional[int] = None
) -> Optional[List[FrozenSet[int]]]:
    """
    Three edge-disjoint Hamiltonian circuits covering a 6-regular graph.

    Generator classes are used directly when each generates the group;
    otherwise a backtracking search fixes the circuit through the smallest
    remaining edge at each level. None when no decomposition exists.
    """
    if not g.is_regular(6):
        raise PreconditionViolated("Hamilton decompositions need a 6-regular graph")
    if spec is not None:
        classes: Dict[Element, List[int]] = {}
        for e in cayley_edges(spec):
            classes.setdefault(e.generator, []).append(e.id)
        if len(classes) == 3 and all(_is_hamiltonian_class(g, ids) for ids in classes.values()):
            logger.debug("Generator classes form a Hamilton decomposition")
            return [frozenset(ids) for ids in classes.values()]

    budget = budget if budget is not None else get_search_settings().hamiltonian_budget
    everything = frozenset(g.edge_ids)
    first_edge = min(everything)
    for c1 in hamiltonian_circuits(g, budget=budget):
        first = frozenset(c1.edges)
        if first_edge not in first:
            continue
        rest = everything - first
        second_edge = min(rest)
        for c2 in hamiltonian_circuits(g.subgraph(rest, g.vertices), budget=budget):
            second = frozenset(c2.edges)
            if second_edge not in second:
                continue
            third = rest - second
            if _is_hamiltonian_class(g, sorted(third)):
                return [first, second, third]
    return None


def decomposition_parts(g: SignedGraph, circuits: Sequence[Iterable[int]]) -> List[FrozenSet[int]]:
    """
    Three connected Eulerian parts with odd negatives and a common vertex,
    built from three Hamiltonian circuits partitioning E with |E_N| odd.
    """
    hs = [frozenset(c) for c in circuits]
    if len(hs) != 3:
        raise NotDecomposition(f"expected 3 circuits, got {len(hs)}")
    for h in hs:
        try:
            check_hamiltonian(g, h, balanced=False)
        except NotBalancedHamiltonian as e:
            raise NotDecomposition(e.reason) from e
    overlapping = hs[0] & hs[1] or hs[0] & hs[2] or hs[1] & hs[2]
    if overlapping or hs[0] | hs[1] | hs[2] != frozenset(g.edge_ids):
        raise NotDecomposition("circuits do not partition the edges")
    total = len(g.negative_edges())
    if total % 2 == 0:
        raise EvenNegativeCount(total)

    parity = [sum(1 for e in h if g.sign(e) < 0) % 2 for h in hs]
    if all(parity):
        return hs

    odd = parity.index(1)
    c1 = hs[odd]
    c2, c3 = (h for i, h in enumerate(hs) if i != odd)
    _, U = is_balanced(g, c2)
    gs = switch_at(g, U)  # type: ignore[arg-type]
    frame2 = HamiltonianFrame.of(gs, c2)

    negative3 = sorted(e for e in c3 if gs.sign(e) < 0)
    if negative3:
        e = negative3[0]
        a, b = gs.edge(e).ends
        path_a = frozenset(s.edge for s in frame2.walk(a, b, 1))
        path_b = c2 - path_a
        return [c1, path_a | {e}, path_b | (c3 - {e})]

    negative1 = sorted(e for e in c1 if gs.sign(e) < 0)
    if len(negative1) < 3:
        raise NotFlowAdmissible(negative1[0] if negative1 else None)
    e, f = negative1[0], negative1[1]
    a, b = gs.edge(e).ends
    c, d = gs.edge(f).ends
    frame3 = HamiltonianFrame.of(gs, c3)
    hub = min(gs.vertices)
    around_e = frozenset(s.edge for s in frame2.walk(a, b, 1))
    if hub not in {x for eid in around_e for x in gs.edge(eid).ends}:
        around_e = c2 - around_e
    around_f = frozenset(s.edge for s in frame3.walk(c, d, 1))
    if hub not in {x for eid in around_f for x in gs.edge(eid).ends}:
        around_f = c3 - around_f
    return [
        around_e | {e},
        around_f | {f},
        (c1 - {e, f}) | (c2 - around_e) | (c3 - around_f),
    ]


def hamilton_decomposable_3flow(
    g: SignedGraph, circuits: Sequence[Iterable[int]]
) -> FlowAssignment:
    """Nowhere-zero 3-flow from a Hamilton decomposition with an odd number of negative edges"""
    parts = decomposition_parts(g, circuits)
    flow = three_nzf_from_decomposition(g, parts)
    return require_verified(g, flow, "Hamilton decomposition 3-flow")


def flow_number_odd_cayley(
    spec: CayleySpec, producer: str = "signedflow"
) -> Tuple[int, Certificate]:
    """
    Flow number of a flow-admissible signed Cayley graph on an odd-order abelian group.

    2 when |E_N| is even, 4 when |S| = 4, and 3 otherwise. The certificate
    holds the witness flow, plus the exhaustion record where the value is
    above the lower bound.
    """
    if spec.order % 2 == 0:
        raise EvenOrder(spec.order)
    g = gen_cayley(spec)
    if not is_connected(g):
        raise Disconnected("connection set does not generate the group")
    _check_admissible(g)
    half = len(spec.connection) // 2
    negatives = len(g.negative_edges())

    if negatives % 2 == 0:
        flow = require_verified(g, two_nzf_even_eulerian(g), "Cayley 2-flow")
        logger.info(f"Odd Cayley graph {spec.group} S={len(spec.connection)}: phi=2")
        return 2, certify_flow(g, flow, producer)

    if half == 2:
        report = exists_nzf(g, 4)
        if report.witness is None:
            raise PreconditionViolated("no 4-flow found on a 4-regular odd Cayley graph")
        below = exists_nzf(g, 3)
        if below.exists:
            raise SignedFlowError("4-regular odd Cayley graph with odd |E_N| has a 3-flow")
        cert = certify_flow(g, report.witness, producer)
        extra = {"exhaustion": {"k": 3, "mode": "int", "nodes": below.nodes}}
        logger.info(f"Odd Cayley graph {spec.group} S=4: phi=4")
        return 4, Certificate(cert.kind, cert.payload, producer, cert.graph_sha, extra)

    if half == 3:
        try:
            circuits = hamilton_decomposition(g, spec)
        except BudgetExceeded:
            circuits = None
            logger.warning("Hamilton decomposition search hit its budget; using 3-flow search")
        if circuits is not None:
            parts = decomposition_parts(g, circuits)
            flow = require_verified(g, three_nzf_from_decomposition(g, parts), "Cayley 3-flow")
            cert = Certificate(
                CertificateKind.EULERIAN_DECOMPOSITION,
                {"parts": [sorted(p) for p in parts]},
                producer,
                g.fingerprint,
                {"flow": flow_payload(flow), "circuits": [sorted(c) for c in circuits]},
            )
            logger.info(f"Odd Cayley graph {spec.group} S=6: phi=3 by Hamilton decomposition")
            return 3, cert

    report = exists_nzf(g, 3)
    if report.witness is None:
        raise PreconditionViolated("no 3-flow found on an odd Cayley graph of degree at least 6")
    logger.info(f"Odd Cayley graph {spec.group} S={len(spec.connection)}: phi=3 by search")
    return 3, certify_flow(g, report.witness, producer)
