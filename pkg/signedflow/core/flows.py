"""
Flow Engine
Bidirected orientations, boundaries, verification and flow arithmetic
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Iterable, Mapping, Optional, Sequence, Tuple

from ..exceptions import (
    Disconnected,
    FlowError,
    GraphMismatch,
    MissingValue,
    ModeMismatch,
    NegativeEdgePresent,
    NotDecomposition,
    NotEven,
    OddNegativeSupport,
    SearchExhausted,
)
from .search import FlowSearch
from .sgraph import (
    SignedGraph,
    SubgraphLike,
    components,
    edge_set,
    euler_tour,
    is_balanced,
    is_connected,
    odd_vertex,
    vertex_set,
)

logger = logging.getLogger("signedflow.flows")

Orientation = Dict[int, Tuple[int, int]]  # edge id -> (tau at u, tau at v)


# =============================================================================
# Modes and Assignments
# =============================================================================


class FlowKind(str, Enum):
    INTEGER = "int"
    MODULAR = "mod"


@dataclass(frozen=True)
class FlowMode:
    """Integer(k): |f(e)| < k. Modular(k): values in Z_k."""

    kind: FlowKind
    k: int

    @classmethod
    def integer(cls, k: int) -> "FlowMode":
        return cls(FlowKind.INTEGER, k)

    @classmethod
    def modular(cls, k: int) -> "FlowMode":
        return cls(FlowKind.MODULAR, k)

    @property
    def is_modular(self) -> bool:
        return self.kind == FlowKind.MODULAR

    def normalize(self, value: int) -> int:
        return value % self.k if self.is_modular else value

    def __str__(self) -> str:
        return f"{'Modular' if self.is_modular else 'Integer'}({self.k})"


@dataclass(frozen=True)
class FlowAssignment:
    """Orientation plus per-edge values, checked against its own mode"""

    tau: Mapping[int, Tuple[int, int]]
    values: Mapping[int, int]
    mode: FlowMode

    def __post_init__(self) -> None:
        object.__setattr__(self, "tau", dict(sorted(self.tau.items())))
        object.__setattr__(
            self, "values", {e: self.mode.normalize(x) for e, x in sorted(self.values.items())}
        )

    def support(self) -> frozenset:
        return frozenset(e for e, x in self.values.items() if x != 0)

    def tau_at(self, g: SignedGraph, eid: int, vertex: int) -> int:
        try:
            pair = self.tau[eid]
        except KeyError:
            raise MissingValue(eid) from None
        return pair[g.edge(eid).end_index(vertex)]

    def with_mode(self, mode: FlowMode) -> "FlowAssignment":
        return FlowAssignment(self.tau, self.values, mode)

    def max_abs(self) -> int:
        return max((abs(x) for x in self.values.values()), default=0)


@dataclass(frozen=True)
class VerificationReport:
    """Outcome of a flow or certificate check; rejections name the first offender"""

    accepted: bool
    mode: Optional[str] = None
    reason: Optional[str] = None
    vertex: Optional[int] = None
    edge: Optional[int] = None
    failures: Tuple[str, ...] = field(default_factory=tuple)

    def __bool__(self) -> bool:
        return self.accepted

    def to_dict(self) -> Dict[str, object]:
        out: Dict[str, object] = {"accepted": self.accepted}
        for key in ("mode", "reason", "vertex", "edge"):
            if getattr(self, key) is not None:
                out[key] = getattr(self, key)
        if self.failures:
            out["failures"] = list(self.failures)
        return out

    @classmethod
    def reject(cls, reason: str, **kwargs: object) -> "VerificationReport":
        return cls(False, reason=reason, **kwargs)  # type: ignore[arg-type]


# =============================================================================
# Orientation and Verification
# =============================================================================


def default_orientation(g: SignedGraph) -> Orientation:
    """Positive edges point from the smaller endpoint; negative edges are extroverted"""
    tau: Orientation = {}
    for eid, e in g.edges.items():
        if e.sign < 0:
            tau[eid] = (1, 1)
        elif e.u < e.v:
            tau[eid] = (1, -1)
        else:
            tau[eid] = (-1, 1)
    return tau


def zero_flow(g: SignedGraph, mode: FlowMode) -> FlowAssignment:
    return FlowAssignment(default_orientation(g), {e: 0 for e in g.edge_ids}, mode)


def boundary(g: SignedGraph, fa: FlowAssignment, v: int) -> int:
    total = 0
    for eid in g.incident(v):
        if eid not in fa.values:
            raise MissingValue(eid)
        total += fa.tau_at(g, eid, v) * fa.values[eid]
    return fa.mode.normalize(total)


def verify_flow(
    g: SignedGraph, fa: FlowAssignment, require_nowhere_zero: bool = True
) -> VerificationReport:
    mode = str(fa.mode)
    extra = sorted(set(fa.values) - set(g.edge_ids))
    if extra:
        return VerificationReport.reject("unknown-edge", mode=mode, edge=extra[0])
    for eid, e in g.edges.items():
        if eid not in fa.values or eid not in fa.tau:
            return VerificationReport.reject("missing-value", mode=mode, edge=eid)
        tu, tv = fa.tau[eid]
        if tu not in (1, -1) or tv not in (1, -1) or tu * tv != -e.sign:
            return VerificationReport.reject("orientation-law", mode=mode, edge=eid)
        x = fa.values[eid]
        if not fa.mode.is_modular and abs(x) >= fa.mode.k:
            return VerificationReport.reject("bound", mode=mode, edge=eid)
        if require_nowhere_zero and x == 0:
            return VerificationReport.reject("zero-value", mode=mode, edge=eid)
    for v in g.vertices:
        if boundary(g, fa, v) != 0:
            return VerificationReport.reject("boundary", mode=mode, vertex=v)
    return VerificationReport(True, mode=mode)


def achieved_k(fa: FlowAssignment) -> int:
    """Least k at which the flow satisfies the integer bound"""
    if fa.mode.is_modular:
        return fa.mode.k
    return fa.max_abs() + 1


# =============================================================================
# Flow Arithmetic
# =============================================================================


def _relation(a: Tuple[int, int], b: Tuple[int, int], eid: int) -> int:
    if a == b:
        return 1
    if a == (-b[0], -b[1]):
        return -1
    raise GraphMismatch(f"Orientations of edge {eid} violate a common consistency law")


def reexpress(fa: FlowAssignment, orientation: Mapping[int, Tuple[int, int]]) -> FlowAssignment:
    """Same flow under another consistent orientation"""
    values = {}
    for eid, x in fa.values.items():
        values[eid] = x * _relation(orientation[eid], fa.tau[eid], eid)
    return FlowAssignment({e: orientation[e] for e in fa.values}, values, fa.mode)


def combine(a: int, f1: FlowAssignment, b: int, f2: FlowAssignment) -> FlowAssignment:
    """a*f1 + b*f2 under f1's orientation"""
    if f1.mode.kind != f2.mode.kind or (f1.mode.is_modular and f1.mode.k != f2.mode.k):
        raise ModeMismatch(str(f1.mode), str(f2.mode))
    if set(f1.values) != set(f2.values):
        raise GraphMismatch()
    values = {}
    for eid, x in f1.values.items():
        values[eid] = a * x + b * f2.values[eid] * _relation(f1.tau[eid], f2.tau[eid], eid)
    if f1.mode.is_modular:
        mode = f1.mode
    else:
        mode = FlowMode.integer(abs(a) * (f1.mode.k - 1) + abs(b) * (f2.mode.k - 1) + 1)
    return FlowAssignment(f1.tau, values, mode)


def switch_flow(g: SignedGraph, fa: FlowAssignment, U: Iterable[int]) -> FlowAssignment:
    """Flow on switch_at(g, U): tau negated at every half edge at U"""
    switched = set(U)
    tau = {}
    for eid, (tu, tv) in fa.tau.items():
        e = g.edge(eid)
        tau[eid] = (-tu if e.u in switched else tu, -tv if e.v in switched else tv)
    return FlowAssignment(tau, fa.values, fa.mode)


def restrict_flow(
    fa: FlowAssignment,
    source: SignedGraph,
    target: SignedGraph,
    vertex_map: Mapping[int, int],
) -> FlowAssignment:
    """
    Transport a flow on `source` to the edges of `target`.

    Each target edge keeps its id; its half-edge orientation is carried over
    by mapping the source endpoints through vertex_map.
    """
    tau: Orientation = {}
    values: Dict[int, int] = {}
    for eid, e in target.edges.items():
        src = source.edge(eid)
        if eid not in fa.values:
            raise MissingValue(eid)
        su, sv = fa.tau[eid]
        mu, mv = vertex_map.get(src.u, src.u), vertex_map.get(src.v, src.v)
        if (mu, mv) == (e.u, e.v):
            tau[eid] = (su, sv)
        elif (mu, mv) == (e.v, e.u):
            tau[eid] = (sv, su)
        else:
            raise GraphMismatch(f"Edge {eid} endpoints do not map onto the target edge")
        values[eid] = fa.values[eid]
    return FlowAssignment(tau, values, fa.mode)


# =============================================================================
# Flows from Even Subgraphs
# =============================================================================


def tour_flow(g: SignedGraph, h: SubgraphLike, start: Optional[int] = None) -> FlowAssignment:
    """
    Unit flow along an Euler tour of h.

    Boundary is 0 away from the start vertex, and 0 or 2 there according to
    whether h carries an even or odd number of negative edges.
    """
    ids = edge_set(g, h)
    tau = default_orientation(g)
    values = {e: 0 for e in g.edge_ids}
    state = 1
    for step in euler_tour(g, ids, start):
        e = g.edge(step.edge)
        at_tail, at_head = state, -e.sign * state
        tau[step.edge] = (at_tail, at_head) if step.tail == e.u else (at_head, at_tail)
        values[step.edge] = 1
        state *= e.sign
    return FlowAssignment(tau, values, FlowMode.integer(2))


def _merge_disjoint(
    g: SignedGraph, parts: Sequence[FlowAssignment], mode: FlowMode
) -> FlowAssignment:
    tau = default_orientation(g)
    values = {e: 0 for e in g.edge_ids}
    for part in parts:
        for eid, x in part.values.items():
            if x:
                tau[eid] = part.tau[eid]
                values[eid] = x
    return FlowAssignment(tau, values, mode)


def two_flow_on_positive_even(g: SignedGraph, h: SubgraphLike) -> FlowAssignment:
    ids = edge_set(g, h)
    negative = sorted(e for e in ids if g.sign(e) < 0)
    if negative:
        raise NegativeEdgePresent(negative[0])
    odd = odd_vertex(g, ids)
    if odd is not None:
        raise NotEven(odd)
    tours = [tour_flow(g, comp_edges) for _, comp_edges in components(g, ids) if comp_edges]
    return _merge_disjoint(g, tours, FlowMode.integer(2))


def two_nzf_even_eulerian(g: SignedGraph, h: Optional[SubgraphLike] = None) -> FlowAssignment:
    """±1 flow on an even subgraph whose every component has evenly many negatives"""
    ids = edge_set(g, g.edge_ids if h is None else h)
    odd = odd_vertex(g, ids)
    if odd is not None:
        raise NotEven(odd)
    tours = []
    for _, comp_edges in components(g, ids):
        if not comp_edges:
            continue
        negatives = sum(1 for e in comp_edges if g.sign(e) < 0)
        if negatives % 2:
            raise OddNegativeSupport(negatives)
        tours.append(tour_flow(g, comp_edges))
    return _merge_disjoint(g, tours, FlowMode.integer(2))


def z2_nzf_on_even(g: SignedGraph, h: SubgraphLike) -> FlowAssignment:
    ids = edge_set(g, h)
    odd = odd_vertex(g, ids)
    if odd is not None:
        raise NotEven(odd)
    values = {e: (1 if e in ids else 0) for e in g.edge_ids}
    return FlowAssignment(default_orientation(g), values, FlowMode.modular(2))


def lift_z2_to_3flow(
    g: SignedGraph, f1: FlowAssignment, budget: Optional[int] = None
) -> FlowAssignment:
    """
    Integer 3-flow whose ±1 edges are exactly supp(f1).

    Domains are {1,-1} on the support and {0,2,-2} elsewhere; the first
    solution in search order is returned.
    """
    if not is_connected(g):
        raise Disconnected()
    support = {e for e, x in f1.values.items() if x % 2}
    negatives = sum(1 for e in support if g.sign(e) < 0)
    if negatives % 2:
        raise OddNegativeSupport(negatives)
    domains = {e: ((1, -1) if e in support else (0, 2, -2)) for e in g.edge_ids}
    tau = default_orientation(g)
    solution = FlowSearch(g, domains, tau, budget=budget).first()
    if solution is None:
        raise SearchExhausted("No 3-flow lifts the given Z2-flow")
    return FlowAssignment(tau, solution, FlowMode.integer(3))


def three_nzf_from_decomposition(g: SignedGraph, parts: Sequence[SubgraphLike]) -> FlowAssignment:
    """
    3-NZF from three Eulerian parts with odd negatives and a shared vertex.

    Tour flows started at the shared vertex each leave boundary 2 there;
    weights 1, 1, -2 cancel it.
    """
    if len(parts) != 3:
        raise NotDecomposition(f"expected 3 parts, got {len(parts)}")
    edge_parts = [edge_set(g, p) for p in parts]
    seen: set = set()
    for ids in edge_parts:
        if not ids:
            raise NotDecomposition("empty part")
        if seen & ids:
            raise NotDecomposition("parts overlap")
        seen |= ids
        if odd_vertex(g, ids) is not None or not is_connected(g.subgraph(ids)):
            raise NotDecomposition("part is not Eulerian")
        if sum(1 for e in ids if g.sign(e) < 0) % 2 == 0:
            raise NotDecomposition("part has an even number of negative edges")
    if seen != set(g.edge_ids):
        raise NotDecomposition("parts do not cover every edge")
    common = set.intersection(*(set(vertex_set(g, ids)) for ids in edge_parts))
    if not common:
        raise NotDecomposition("parts share no vertex")
    w = min(common)

    t1, t2, t3 = (tour_flow(g, ids, start=w) for ids in edge_parts)
    result = combine(1, combine(1, t1, 1, t2), -2, t3)
    return result.with_mode(FlowMode.integer(3))


def eulerian_nzf_obstruction(g: SignedGraph) -> Optional[int]:
    """
    For a connected even g: an edge e with g unbalanced and g - e balanced,
    which rules out every nowhere-zero flow; None when no such edge exists.
    """
    odd = odd_vertex(g, g.edge_ids)
    if odd is not None:
        raise NotEven(odd)
    if not is_connected(g):
        raise Disconnected()
    balanced, _ = is_balanced(g)
    if balanced:
        return None
    for eid in g.edge_ids:
        rest = [e for e in g.edge_ids if e != eid]
        if is_balanced(g, rest)[0]:
            return eid
    return None


def flow_from_values(
    g: SignedGraph, values: Mapping[int, int], mode: FlowMode, tau: Optional[Orientation] = None
) -> FlowAssignment:
    return FlowAssignment(tau or default_orientation(g), dict(values), mode)


def require_verified(
    g: SignedGraph, fa: FlowAssignment, what: str
) -> FlowAssignment:
    """Verify a constructed flow; failure is an internal-consistency error"""
    report = verify_flow(g, fa, require_nowhere_zero=True)
    if not report:
        logger.error(f"{what} produced an invalid flow: {report.to_dict()}")
        raise FlowError(f"{what} produced an invalid flow", report.to_dict())
    return fa
