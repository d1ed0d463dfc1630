"""
Six-Flow Constructions
Nowhere-zero 6-flows from balanced Hamiltonian circuits, spanning even Eulerian subgraphs
and Kotzig frames
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from itertools import combinations, product
from typing import Dict, FrozenSet, List, Mapping, Optional, Sequence, Tuple

from ..config import get_search_settings
from ..exceptions import (
    Disconnected,
    NegativeEdgePresent,
    NotBalancedHamiltonian,
    NotEven,
    NotFlowAdmissible,
    NotIntersecting,
    NotKotzig,
    OddNegativeCount,
    OddNegativeSupport,
    PreconditionViolated,
    SearchExhausted,
    TemplatePreconditionViolated,
)
from .admissibility import is_flow_admissible
from .flows import (
    FlowAssignment,
    FlowMode,
    combine,
    default_orientation,
    lift_z2_to_3flow,
    require_verified,
    restrict_flow,
    switch_flow,
    two_flow_on_positive_even,
    verify_flow,
    z2_nzf_on_even,
)
from .reduction import check_even_eulerian, covering_pair_supereulerian, three_regularize
from .sgraph import (
    SignedGraph,
    SubgraphLike,
    SubgraphRef,
    TourStep,
    components,
    degrees_in,
    edge_set,
    euler_tour,
    find_hamiltonian_circuit,
    is_balanced,
    is_connected,
    odd_vertex,
    sign_of,
    switch_at,
    xor_edges,
)
from .templates import hamiltonian_template
from .trace import ConstructionTrace

logger = logging.getLogger("signedflow.six_flow")

SIX = FlowMode.integer(6)


# =============================================================================
# Hamiltonian Frames
# =============================================================================


@dataclass(frozen=True)
class HamiltonianFrame:
    """A Hamiltonian circuit as a cyclic vertex order; arcs[i] joins order[i] and order[i+1]"""

    order: Tuple[int, ...]
    arcs: Tuple[int, ...]

    @classmethod
    def of(cls, g: SignedGraph, ids: FrozenSet[int]) -> "HamiltonianFrame":
        tour = euler_tour(g, ids)
        return cls(tuple(s.tail for s in tour), tuple(s.edge for s in tour))

    @property
    def position(self) -> Dict[int, int]:
        return {v: i for i, v in enumerate(self.order)}

    def walk(self, start: int, stop: int, step: int = 1) -> List[TourStep]:
        """Arc steps from start to stop, forward (step=1) or backward (step=-1)"""
        n = len(self.order)
        i = self.position[start]
        out: List[TourStep] = []
        while True:
            if step == 1:
                j = (i + 1) % n
                edge = self.arcs[i]
            else:
                j = (i - 1) % n
                edge = self.arcs[j]
            out.append(TourStep(edge, self.order[i], self.order[j]))
            i = j
            if self.order[i] == stop or len(out) >= n:
                return out

    def crosses(self, g: SignedGraph, e1: int, e2: int) -> bool:
        """True when the chords' endpoints interleave along the circuit"""
        a, b = g.edge(e1).ends
        c, d = g.edge(e2).ends
        if {a, b} & {c, d}:
            return False
        pos = self.position
        lo, hi = sorted((pos[a], pos[b]))
        return (lo < pos[c] < hi) != (lo < pos[d] < hi)


def check_hamiltonian(g: SignedGraph, h: SubgraphLike, balanced: bool = True) -> FrozenSet[int]:
    ids = edge_set(g, h)
    deg = degrees_in(g, ids)
    if len(g.vertices) < 2 or len(ids) != len(g.vertices):
        raise NotBalancedHamiltonian("edge count differs from vertex count")
    odd = [v for v in g.vertices if deg.get(v, 0) != 2]
    if odd:
        raise NotBalancedHamiltonian(f"vertex {odd[0]} does not have degree 2 on the circuit")
    if not is_connected(g, ids):
        raise NotBalancedHamiltonian("circuit is disconnected")
    if balanced and sign_of(g, ids) < 0:
        raise NotBalancedHamiltonian("circuit is unbalanced")
    return ids


def _require_positive_hamiltonian(g: SignedGraph, h: SubgraphLike) -> FrozenSet[int]:
    ids = check_hamiltonian(g, h)
    negative = sorted(e for e in ids if g.sign(e) < 0)
    if negative:
        raise PreconditionViolated(f"Hamiltonian circuit edge {negative[0]} is negative")
    return ids


def find_balanced_hamiltonian(
    g: SignedGraph, budget: Optional[int] = None
) -> Optional[SubgraphRef]:
    """First balanced Hamiltonian circuit in backtracking order, or None"""
    budget = budget if budget is not None else get_search_settings().hamiltonian_budget
    circuit = find_hamiltonian_circuit(g, balanced=True, budget=budget)
    if circuit is None:
        return None
    return g.ref(circuit.edges)


# =============================================================================
# Hamiltonian Templates
# =============================================================================


def _cyclic_matches(sequence: Sequence[str], order: Sequence[str]) -> bool:
    n = len(order)
    target = tuple(sequence)
    for ring in (list(order), list(reversed(order))):
        if any(tuple(ring[i:] + ring[:i]) == target for i in range(n)):
            return True
    return False


def apply_hamiltonian_template(
    g: SignedGraph,
    h: SubgraphLike,
    name: str,
    chord1: int,
    chord2: int,
    fixed: Optional[Mapping[str, int]] = None,
) -> FlowAssignment:
    """
    Place a Hamiltonian template on an all-positive circuit plus two chords.

    Labels are matched to chord endpoints so that their cyclic order along
    the circuit is the template's; `fixed` pins labels to vertices. Every
    other edge carries 0.
    """
    template = hamiltonian_template(name)
    ids = _require_positive_hamiltonian(g, h)
    frame = HamiltonianFrame.of(g, ids)
    pos = frame.position
    rows = template.chords
    chords = (g.edge(chord1), g.edge(chord2))
    if chord1 in ids or chord2 in ids:
        raise TemplatePreconditionViolated("template chords must lie off the circuit")

    labels: Optional[Dict[str, int]] = None
    for flip1, flip2 in product((False, True), repeat=2):
        candidate: Dict[str, int] = {}
        for row, edge, flip in zip(rows, chords, (flip1, flip2)):
            a, b = (edge.v, edge.u) if flip else (edge.u, edge.v)
            candidate[row.ends[0]], candidate[row.ends[1]] = a, b
        if len(set(candidate.values())) != 4:
            break
        if fixed and any(candidate.get(k) != v for k, v in fixed.items()):
            continue
        sequence = sorted(candidate, key=lambda label: pos[candidate[label]])
        if _cyclic_matches(sequence, template.cyclic_order):
            labels = candidate
            break
    if labels is None:
        raise TemplatePreconditionViolated(f"chords {chord1}, {chord2} do not fit template {name}")

    tau = default_orientation(g)
    values = {e: 0 for e in g.edge_ids}
    labelled = set(labels.values())
    assigned: set = set()
    for arc in template.arcs:
        start, stop = labels[arc.tail], labels[arc.head]
        steps = next(
            (
                walk
                for walk in (frame.walk(start, stop, 1), frame.walk(start, stop, -1))
                if walk[-1].head == stop and not any(s.head in labelled for s in walk[:-1])
            ),
            None,
        )
        if steps is None:
            raise TemplatePreconditionViolated(f"no arc from {arc.tail} to {arc.head}")
        for s in steps:
            if s.edge in assigned:
                raise TemplatePreconditionViolated(f"arc edge {s.edge} covered twice")
            assigned.add(s.edge)
            e = g.edge(s.edge)
            tau[s.edge] = (1, -1) if s.tail == e.u else (-1, 1)
            values[s.edge] = arc.value

    for row, edge in zip(rows, chords):
        at = {labels[row.ends[0]]: row.tau[0], labels[row.ends[1]]: row.tau[1]}
        pair = (at[edge.u], at[edge.v])
        if pair[0] * pair[1] != -edge.sign:
            raise TemplatePreconditionViolated(f"chord {edge.id} sign does not fit template {name}")
        tau[edge.id] = pair
        values[edge.id] = row.value

    flow = FlowAssignment(tau, values, FlowMode.integer(template.k))
    report = verify_flow(g, flow, require_nowhere_zero=False)
    if not report:
        raise TemplatePreconditionViolated(f"template {name} does not close: {report.reason}")
    logger.debug(f"Applied template {name} with labels {labels}")
    return flow


# =============================================================================
# Building Blocks
# =============================================================================


def _extend_by_zero(g: SignedGraph, fa: FlowAssignment) -> FlowAssignment:
    tau = default_orientation(g)
    tau.update(fa.tau)
    values = {e: 0 for e in g.edge_ids}
    values.update(fa.values)
    return FlowAssignment(tau, values, fa.mode)


def chord_three_flow(g: SignedGraph, ids: FrozenSet[int]) -> FlowAssignment:
    """
    3-flow whose chords all carry ±1.

    H' is the symmetric difference of the fundamental circuits of the
    Hamiltonian path H - e over every edge off that path; its mod-2 flow is
    lifted with ±1 on H' and {0, ±2} elsewhere.
    """
    frame = HamiltonianFrame.of(g, ids)
    cut = frame.arcs.index(min(ids))
    n = len(frame.order)
    path_order = [frame.order[(cut + 1 + i) % n] for i in range(n)]
    path_edges = [frame.arcs[(cut + 1 + i) % n] for i in range(n - 1)]
    index = {v: i for i, v in enumerate(path_order)}
    on_path = set(path_edges)

    circuits = []
    for eid in g.edge_ids:
        if eid in on_path:
            continue
        e = g.edge(eid)
        lo, hi = sorted((index[e.u], index[e.v]))
        circuits.append(set(path_edges[lo:hi]) | {eid})
    h_prime = xor_edges(circuits)
    return lift_z2_to_3flow(g, z2_nzf_on_even(g, h_prime))


# =============================================================================
# Case Constructions
# =============================================================================


def even_case(g: SignedGraph, h: SubgraphLike) -> FlowAssignment:
    """f1 + 3 f2 with f1 the chord 3-flow and f2 the 2-flow on the circuit"""
    ids = _require_positive_hamiltonian(g, h)
    negatives = len(g.negative_edges())
    if negatives % 2:
        raise OddNegativeCount(negatives)
    f1 = chord_three_flow(g, ids)
    f2 = two_flow_on_positive_even(g, ids)
    return require_verified(g, combine(1, f1, 3, f2).with_mode(SIX), "even case")


def intersect_case(g: SignedGraph, h: SubgraphLike, e1: int, e2: int) -> FlowAssignment:
    """2 f1 ± f2: f1 the chord 3-flow of g - e1, f2 the crossing template"""
    ids = _require_positive_hamiltonian(g, h)
    negatives = len(g.negative_edges())
    if negatives % 2 == 0:
        raise PreconditionViolated("number of negative edges must be odd")
    for e in (e1, e2):
        if e in ids or g.sign(e) > 0:
            raise PreconditionViolated(f"edge {e} is not a negative chord")
    if not HamiltonianFrame.of(g, ids).crosses(g, e1, e2):
        raise NotIntersecting(e1, e2)

    f1 = _extend_by_zero(g, chord_three_flow(g.delete_edges([e1]), ids))
    f2 = apply_hamiltonian_template(g, ids, "crossing", e1, e2)
    for sign in (1, -1):
        candidate = combine(2, f1, sign, f2).with_mode(SIX)
        if verify_flow(g, candidate):
            logger.debug(f"Intersect case combined with sign {sign:+d}")
            return candidate
    raise PreconditionViolated("neither 2f1 + f2 nor 2f1 - f2 is nowhere-zero")


@dataclass(frozen=True)
class _ParallelLayout:
    e1: int
    e2: int
    u1: int
    v1: int
    u2: int
    v2: int
    step: int
    path: Tuple[TourStep, ...]

    @property
    def path_edges(self) -> List[int]:
        return [s.edge for s in self.path]

    @property
    def interior(self) -> List[int]:
        return [s.head for s in self.path[:-1]]


def _parallel_layout(
    g: SignedGraph, frame: HamiltonianFrame, ids: FrozenSet[int], e1: int, e2: int
) -> _ParallelLayout:
    """Shortest arc v1 -> v2 avoiding u1, u2, then cleared of negative chords at its interior"""
    best: Optional[_ParallelLayout] = None
    for v1, v2, step in product(g.edge(e1).ends, g.edge(e2).ends, (1, -1)):
        u1, u2 = g.edge(e1).other(v1), g.edge(e2).other(v2)
        walk = frame.walk(v1, v2, step)
        if walk[-1].head != v2 or {u1, u2} & {s.head for s in walk}:
            continue
        if best is None or len(walk) < len(best.path):
            best = _ParallelLayout(e1, e2, u1, v1, u2, v2, step, tuple(walk))
    if best is None:
        raise PreconditionViolated(f"negative edges {e1} and {e2} admit no connecting arc")

    layout = best
    while True:
        hit = None
        for w in layout.interior:
            chord = next(eid for eid in g.incident(w) if eid not in ids)
            if g.sign(chord) < 0:
                hit = (w, chord)
                break
        if hit is None:
            return layout
        w, chord = hit
        x = g.edge(chord).other(w)
        vertices = [layout.v1] + [s.head for s in layout.path]
        if x in vertices and vertices.index(x) > vertices.index(w):
            v1, u1 = x, w
        else:
            v1, u1 = w, x
        cut = vertices.index(v1)
        logger.debug(f"Replacing negative edge {layout.e1} by {chord} at vertex {w}")
        layout = _ParallelLayout(
            chord, layout.e2, u1, v1, layout.u2, layout.v2, layout.step, layout.path[cut:]
        )


def _parallel_attempt(
    g: SignedGraph,
    ids: FrozenSet[int],
    frame: HamiltonianFrame,
    e1: int,
    e2: int,
    trace: ConstructionTrace,
) -> FlowAssignment:
    layout = _parallel_layout(g, frame, ids, e1, e2)
    path_edges = layout.path_edges
    trace.record(
        "negative_pair",
        {
            "e1": layout.e1,
            "e2": layout.e2,
            "u1": layout.u1,
            "v1": layout.v1,
            "u2": layout.u2,
            "v2": layout.v2,
        },
    )
    trace.record("P", path_edges)

    f1 = apply_hamiltonian_template(
        g, ids, "parallel", layout.e1, layout.e2, fixed={"v1": layout.v1, "v2": layout.v2}
    )

    if len(path_edges) % 2:
        trace.case("parallel-odd-path")
        removed = {layout.e2} | set(path_edges[0::2])
        p_end = layout.v1
        p_prime_edges = ids - set(path_edges)
    else:
        trace.case("parallel-even-path")
        e_star = next(e for e in g.incident(layout.v1) if e in ids and e != path_edges[0])
        removed = {e_star, layout.e2} | set(path_edges[1::2])
        p_end = g.edge(e_star).other(layout.v1)
        p_prime_edges = ids - set(path_edges) - {e_star}
        trace.record("e_star", e_star)
    trace.record("removed", removed)

    kept = frozenset(g.edge_ids) - removed
    parts = [c for c in components(g, kept) if c[1]]
    g3_vertices, g3_edges = next(c for c in parts if min(p_prime_edges) in c[1])
    K = g3_edges - p_prime_edges

    p_prime = frame.walk(layout.v2, p_end, layout.step)
    if {s.edge for s in p_prime} != p_prime_edges:
        raise PreconditionViolated("remaining circuit edges do not form the expected path")
    k_deg = degrees_in(g, K)
    g4 = set(K)
    parity = k_deg.get(layout.v2, 0) % 2
    for s in p_prime:
        if parity:
            g4.add(s.edge)
        parity = (parity + k_deg.get(s.head, 0)) % 2
    if odd_vertex(g, g4) is not None:
        raise PreconditionViolated("parity completion of the path left an odd vertex")
    trace.record("G3", g3_edges)
    trace.record("G4", g4)

    g3 = g.subgraph(g3_edges, g3_vertices)
    try:
        f3 = lift_z2_to_3flow(g3, z2_nzf_on_even(g3, g4))
    except (SearchExhausted, OddNegativeSupport, Disconnected) as e:
        raise PreconditionViolated(f"no 3-flow lifts the parity subgraph: {e}") from e

    f2 = _extend_by_zero(g, f3)
    for _, comp_edges in parts:
        if comp_edges == g3_edges:
            continue
        try:
            circuit_flow = two_flow_on_positive_even(g, comp_edges)
        except (NegativeEdgePresent, NotEven) as e:
            raise PreconditionViolated(f"side component is not an all-positive circuit: {e}") from e
        f2 = combine(1, f2, 1, circuit_flow).with_mode(FlowMode.integer(3))
    trace.record("f1", f1)
    trace.record("f2", f2)

    for sign in (1, -1):
        candidate = combine(1, f1, 2 * sign, f2).with_mode(SIX)
        if verify_flow(g, candidate):
            trace.record("sign", sign)
            return candidate
    raise PreconditionViolated("neither f1 + 2f2 nor f1 - 2f2 is nowhere-zero")


def parallel_case(g: SignedGraph, h: SubgraphLike) -> Tuple[FlowAssignment, ConstructionTrace]:
    """
    f1 ± 2 f2 for cubic graphs whose negative chords pairwise run parallel.

    f1 is the parallel template on H plus two negative chords joined by a
    clean arc P. Alternate edges of P are removed according to the parity of
    |P|; on the component holding the rest of H a 3-flow is lifted from an
    even subgraph containing every edge off that path, and the remaining
    components are all-positive circuits carrying 2-flows.
    """
    ids = _require_positive_hamiltonian(g, h)
    if not g.is_cubic():
        raise PreconditionViolated("graph is not cubic")
    negatives = sorted(g.negative_edges())
    if len(negatives) % 2 == 0 or len(negatives) < 3:
        raise PreconditionViolated("needs an odd number of negative edges, at least three")
    frame = HamiltonianFrame.of(g, ids)
    for a, b in combinations(negatives, 2):
        if frame.crosses(g, a, b):
            raise PreconditionViolated(f"negative edges {a} and {b} intersect along the circuit")

    trace = ConstructionTrace()
    trace.case("parallel")
    failures: List[str] = []
    for e1, e2 in combinations(negatives, 2):
        for first, second in ((e1, e2), (e2, e1)):
            attempt = ConstructionTrace()
            try:
                flow = _parallel_attempt(g, ids, frame, first, second, attempt)
            except (PreconditionViolated, TemplatePreconditionViolated) as e:
                failures.append(f"{first},{second}: {e}")
                logger.debug(f"Parallel layout ({first}, {second}) failed: {e}")
                continue
            trace.cases.extend(attempt.cases)
            trace.objects.update(attempt.objects)
            if failures:
                trace.record("skipped_layouts", failures)
            return require_verified(g, flow, "parallel case"), trace
    raise PreconditionViolated("; ".join(failures) or "no negative pair")


# =============================================================================
# Entry Points
# =============================================================================


def _search_fallback(g: SignedGraph, trace: ConstructionTrace, error: Exception) -> FlowAssignment:
    from .oracle import exists_nzf

    logger.warning(f"Construction failed ({error}); falling back to exhaustive 6-flow search")
    trace.case("search-fallback")
    trace.record("fallback_reason", str(error))
    report = exists_nzf(g, 6)
    if report.witness is None:
        raise error
    return report.witness


def six_nzf_balanced_hamiltonian(
    g: SignedGraph, h: Optional[SubgraphLike] = None
) -> Tuple[FlowAssignment, ConstructionTrace]:
    """
    Nowhere-zero 6-flow of a flow-admissible graph with a balanced Hamiltonian circuit.

    The circuit is switched all-positive; an even number of negative edges
    goes to the even case, otherwise non-cubic graphs are reduced to cubic
    ones first and the negative chords are checked for an intersecting pair.
    """
    admissible = is_flow_admissible(g, certify=False)
    if not admissible:
        raise NotFlowAdmissible(admissible.edge)
    if h is None:
        found = find_balanced_hamiltonian(g)
        if found is None:
            raise NotBalancedHamiltonian("no balanced Hamiltonian circuit found")
        h = found
    ids = check_hamiltonian(g, h)

    trace = ConstructionTrace()
    trace.record("H", ids)
    _, U = is_balanced(g, ids)
    U = frozenset(U)  # type: ignore[arg-type]
    gs = switch_at(g, U)
    trace.record("switching", U)

    try:
        flow = _dispatch(gs, ids, trace)
    except (PreconditionViolated, TemplatePreconditionViolated, SearchExhausted) as e:
        if not get_search_settings().allow_search_fallback:
            raise
        return require_verified(g, _search_fallback(g, trace, e), "search fallback"), trace

    result = switch_flow(gs, flow, U)
    return require_verified(g, result, "balanced Hamiltonian 6-flow"), trace


def _dispatch(gs: SignedGraph, ids: FrozenSet[int], trace: ConstructionTrace) -> FlowAssignment:
    negatives = sorted(gs.negative_edges())
    trace.record("negatives", negatives)
    if len(negatives) % 2 == 0:
        trace.case("even-negatives")
        return even_case(gs, ids)

    if not gs.is_cubic():
        trace.case("cubic-reduction")
        pair = covering_pair_supereulerian(gs, ids)
        reduced = three_regularize(gs, pair)
        inner, inner_trace = six_nzf_balanced_hamiltonian(reduced.g_prime, reduced.J)
        trace.record("reduction", reduced.trace)
        trace.record("reduced_construction", inner_trace)
        return restrict_flow(inner, reduced.g_prime, gs, reduced.vertex_origin)

    frame = HamiltonianFrame.of(gs, ids)
    for e1, e2 in combinations(negatives, 2):
        if frame.crosses(gs, e1, e2):
            trace.case("intersecting")
            trace.record("negative_pair", [e1, e2])
            return intersect_case(gs, ids, e1, e2)

    flow, parallel_trace = parallel_case(gs, ids)
    trace.cases.extend(parallel_trace.cases)
    trace.objects.update(parallel_trace.objects)
    return flow


def six_nzf_spanning_even_eulerian(g: SignedGraph, h: SubgraphLike) -> FlowAssignment:
    """6-flow through the cubic reduction whose 2-factor is one balanced circuit"""
    ids = check_even_eulerian(g, h)
    admissible = is_flow_admissible(g, certify=False)
    if not admissible:
        raise NotFlowAdmissible(admissible.edge)
    reduced = three_regularize(g, covering_pair_supereulerian(g, ids))
    flow, _ = six_nzf_balanced_hamiltonian(reduced.g_prime, reduced.J)
    pulled = restrict_flow(flow, reduced.g_prime, g, reduced.vertex_origin)
    return require_verified(g, pulled, "spanning even Eulerian 6-flow")


def six_nzf_kotzig(
    g: SignedGraph, f1: SubgraphLike, f2: SubgraphLike, f3: SubgraphLike
) -> FlowAssignment:
    """
    Two of three Kotzig matchings share negative-count parity; their union
    is a balanced Hamiltonian circuit.
    """
    factors = [edge_set(g, f) for f in (f1, f2, f3)]
    for i, factor in enumerate(factors):
        deg = degrees_in(g, factor)
        if any(deg.get(v, 0) != 1 for v in g.vertices):
            raise NotKotzig(f"factor {i + 1} is not a perfect matching")
    for i, j in combinations(range(3), 2):
        try:
            check_hamiltonian(g, factors[i] | factors[j], balanced=False)
        except NotBalancedHamiltonian as e:
            raise NotKotzig(f"factors {i + 1} and {j + 1}: {e.reason}") from e

    parity = [sum(1 for e in factor if g.sign(e) < 0) % 2 for factor in factors]
    i, j = next((i, j) for i, j in combinations(range(3), 2) if parity[i] == parity[j])
    logger.info(f"Kotzig factors {i + 1} and {j + 1} form a balanced Hamiltonian circuit")
    flow, _ = six_nzf_balanced_hamiltonian(g, factors[i] | factors[j])
    return flow
