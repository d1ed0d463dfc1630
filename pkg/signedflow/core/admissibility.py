"""
Flow Admissibility
Signed-circuit classification, admissibility decisions and signed-circuit covers
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, FrozenSet, Iterator, List, Optional, Sequence, Set, Tuple

import networkx as nx

from ..config import get_search_settings
from ..exceptions import BudgetExceeded
from .certificates import Certificate, CertificateKind
from .sgraph import (
    Circuit,
    SignedGraph,
    SubgraphLike,
    components,
    degrees_in,
    edge_set,
    enumerate_circuits,
    is_balanced,
    is_connected,
    sign_of,
)

logger = logging.getLogger("signedflow.admissibility")


class CircuitTag(str, Enum):
    BALANCED_CIRCUIT = "balanced-circuit"
    SHORT_BARBELL = "short-barbell"
    LONG_BARBELL = "long-barbell"


@dataclass(frozen=True)
class SignedCircuitKind:
    tag: CircuitTag
    circuits: Tuple[FrozenSet[int], ...]
    path: Tuple[int, ...] = ()

    @property
    def edges(self) -> FrozenSet[int]:
        out: Set[int] = set(self.path)
        for c in self.circuits:
            out |= c
        return frozenset(out)

    def to_dict(self) -> Dict[str, object]:
        return {
            "kind": self.tag.value,
            "edges": sorted(self.edges),
            "circuits": [sorted(c) for c in self.circuits],
            "path": list(self.path),
        }


@dataclass(frozen=True)
class CircuitClassification:
    accepted: bool
    kind: Optional[SignedCircuitKind] = None
    reason: Optional[str] = None


@dataclass(frozen=True)
class AdmissibilityResult:
    admissible: bool
    edge: Optional[int] = None
    cover: Tuple[SignedCircuitKind, ...] = field(default_factory=tuple)
    certificate: Optional[Certificate] = None

    def __bool__(self) -> bool:
        return self.admissible


# =============================================================================
# Classification
# =============================================================================


def classify_signed_circuit(g: SignedGraph, h: SubgraphLike) -> CircuitClassification:
    ids = edge_set(g, h)
    if not ids:
        return CircuitClassification(False, reason="empty edge set")
    if not is_connected(g.subgraph(ids)):
        return CircuitClassification(False, reason="disconnected")
    deg = degrees_in(g, ids)
    pattern = sorted(d for d in deg.values() if d != 2)

    if not pattern:
        if sign_of(g, ids) > 0:
            return CircuitClassification(
                True, SignedCircuitKind(CircuitTag.BALANCED_CIRCUIT, (ids,))
            )
        return CircuitClassification(False, reason="unbalanced circuit")

    if pattern == [4]:
        hub = next(v for v, d in deg.items() if d == 4)
        first = _closed_walk(g, ids, hub, min(eid for eid in ids if hub in g.edge(eid).ends))
        second = ids - first
        return _barbell(g, CircuitTag.SHORT_BARBELL, (first, second), ())

    if pattern == [3, 3]:
        a, b = sorted(v for v, d in deg.items() if d == 3)
        loops: List[FrozenSet[int]] = []
        path: Tuple[int, ...] = ()
        seen: Set[int] = set()
        for start in sorted(eid for eid in ids if a in g.edge(eid).ends):
            if start in seen:
                continue
            walk, end = _walk_until(g, ids, a, start, {a, b})
            seen.update(walk)
            if end == a:
                loops.append(frozenset(walk))
            elif not path:
                path = tuple(walk)
            else:
                return CircuitClassification(False, reason="two paths join the branch vertices")
        if len(loops) != 1 or not path:
            return CircuitClassification(False, reason="branch vertex lacks a circuit")
        other = ids - loops[0] - set(path)
        return _barbell(g, CircuitTag.LONG_BARBELL, (loops[0], frozenset(other)), path)

    return CircuitClassification(False, reason=f"degree pattern {pattern} fits no signed circuit")


def _barbell(
    g: SignedGraph,
    tag: CircuitTag,
    circuits: Tuple[FrozenSet[int], FrozenSet[int]],
    path: Tuple[int, ...],
) -> CircuitClassification:
    for c in circuits:
        deg = degrees_in(g, c)
        if not c or any(d != 2 for d in deg.values()) or not is_connected(g.subgraph(c)):
            return CircuitClassification(False, reason="barbell part is not a circuit")
        if sign_of(g, c) > 0:
            return CircuitClassification(False, reason="barbell circuit is balanced")
    return CircuitClassification(True, SignedCircuitKind(tag, circuits, path))


def _walk_until(
    g: SignedGraph, ids: FrozenSet[int], origin: int, first: int, stops: Set[int]
) -> Tuple[List[int], int]:
    walk = [first]
    at = g.edge(first).other(origin)
    while at not in stops:
        nxt = next(e for e in g.incident(at) if e in ids and e != walk[-1])
        walk.append(nxt)
        at = g.edge(nxt).other(at)
    return walk, at


def _closed_walk(g: SignedGraph, ids: FrozenSet[int], hub: int, first: int) -> FrozenSet[int]:
    walk, _ = _walk_until(g, ids, hub, first, {hub})
    return frozenset(walk)


# =============================================================================
# Admissibility
# =============================================================================


def edge_blocks_flows(g: SignedGraph, eid: int) -> bool:
    """True when deleting eid leaves a balanced piece of its component"""
    e = g.edge(eid)
    comp_vertices, comp_edges = next(c for c in components(g) if e.u in c[0])
    if is_balanced(g, comp_edges)[0]:
        mg = nx.MultiGraph(g.to_networkx(comp_edges).subgraph(comp_vertices))
        return any(set(mg[u][v]) == {eid} for u, v in nx.bridges(mg))
    rest = comp_edges - {eid}
    sub = g.subgraph(rest, comp_vertices)
    return any(is_balanced(g, piece)[0] for _, piece in components(sub))


def is_flow_admissible(g: SignedGraph, certify: bool = True) -> AdmissibilityResult:
    """
    Decide whether g admits some nowhere-zero flow.

    Balanced components must be bridgeless; in an unbalanced component no
    edge deletion may leave a balanced piece. With certify=True an
    admissible graph also gets a signed-circuit cover.
    """
    for comp_vertices, comp_edges in components(g):
        if not comp_edges:
            continue
        if is_balanced(g, comp_edges)[0]:
            mg = nx.MultiGraph(g.to_networkx(comp_edges).subgraph(comp_vertices))
            for u, v in sorted(nx.bridges(mg)):
                bridge = min(mg[u][v])
                return _inadmissible(g, bridge, certify)
            continue
        for eid in sorted(comp_edges):
            sub = g.subgraph(comp_edges - {eid}, comp_vertices)
            if any(is_balanced(g, piece)[0] for _, piece in components(sub)):
                return _inadmissible(g, eid, certify)

    if not certify:
        return AdmissibilityResult(True)
    try:
        cover = signed_circuit_cover(g)
    except BudgetExceeded as e:
        logger.warning(f"Admissible graph left uncertified: {e}")
        return AdmissibilityResult(True)
    if cover is None:
        logger.warning("Admissible graph but some edge has no signed circuit")
        return AdmissibilityResult(True)
    payload = {"circuits": [c.to_dict() for c in cover]}
    cert = Certificate(
        CertificateKind.SIGNED_CIRCUIT_COVER, payload, "admissibility.cover", g.fingerprint
    )
    return AdmissibilityResult(True, cover=tuple(cover), certificate=cert)


def _inadmissible(g: SignedGraph, eid: int, certify: bool) -> AdmissibilityResult:
    logger.debug(f"Edge {eid} blocks every nowhere-zero flow")
    cert = None
    if certify:
        cert = Certificate(
            CertificateKind.INADMISSIBILITY_EDGE, {"edge": eid}, "admissibility.edge", g.fingerprint
        )
    return AdmissibilityResult(False, edge=eid, certificate=cert)


def signed_circuit_cover(g: SignedGraph) -> Optional[List[SignedCircuitKind]]:
    """Greedy cover: a signed circuit through each still-uncovered edge"""
    covered: Set[int] = set()
    cover: List[SignedCircuitKind] = []
    for eid in g.edge_ids:
        if eid in covered:
            continue
        found = signed_circuit_through(g, eid)
        if found is None:
            return None
        cover.append(found)
        covered |= found.edges
    return cover


# =============================================================================
# Signed Circuit Search
# =============================================================================


def signed_circuit_through(
    g: SignedGraph, e: int, budget: Optional[int] = None
) -> Optional[SignedCircuitKind]:
    """
    Smallest signed circuit containing e.

    Balanced circuits are preferred; otherwise the smallest barbell built
    from a pair of unbalanced circuits, joined at a vertex or by a path.
    """
    budget = budget if budget is not None else get_search_settings().circuit_budget
    target = g.edge(e)
    _, comp_edges = next(c for c in components(g) if target.u in c[0])
    circuits = list(enumerate_circuits(g, comp_edges, budget=budget))

    balanced = [c for c in circuits if e in c.edges and sign_of(g, c.edges) > 0]
    if balanced:
        best = min(balanced, key=lambda c: (len(c.edges), sorted(c.edges)))
        return SignedCircuitKind(CircuitTag.BALANCED_CIRCUIT, (frozenset(best.edges),))

    unbalanced = [c for c in circuits if sign_of(g, c.edges) < 0]
    best_kind: Optional[SignedCircuitKind] = None
    best_key: Optional[Tuple[int, List[int]]] = None
    for i, c1 in enumerate(unbalanced):
        for c2 in unbalanced[i + 1 :]:
            kind = _barbell_through(g, comp_edges, c1, c2, e, budget)
            if kind is None:
                continue
            key = (len(kind.edges), sorted(kind.edges))
            if best_key is None or key < best_key:
                best_kind, best_key = kind, key
    return best_kind


def _barbell_through(
    g: SignedGraph,
    allowed: FrozenSet[int],
    c1: Circuit,
    c2: Circuit,
    e: int,
    budget: int,
) -> Optional[SignedCircuitKind]:
    e1, e2 = frozenset(c1.edges), frozenset(c2.edges)
    if e1 & e2:
        return None
    v1, v2 = set(c1.vertices), set(c2.vertices)
    shared = v1 & v2
    if len(shared) == 1:
        if e in e1 or e in e2:
            return SignedCircuitKind(CircuitTag.SHORT_BARBELL, (e1, e2))
        return None
    if shared:
        return None

    free = allowed - e1 - e2
    best: Optional[Tuple[int, ...]] = None
    for start in sorted(v1):
        for path in _simple_paths(g, free, start, v2, v1 | v2, budget):
            if e not in e1 and e not in e2 and e not in path:
                continue
            if best is None or (len(path), sorted(path)) < (len(best), sorted(best)):
                best = path
    if best is None:
        return None
    return SignedCircuitKind(CircuitTag.LONG_BARBELL, (e1, e2), best)


def _simple_paths(
    g: SignedGraph,
    allowed: FrozenSet[int],
    source: int,
    targets: Set[int],
    blocked: Set[int],
    budget: int,
) -> Iterator[Tuple[int, ...]]:
    """Edge sequences from source to a target whose interior avoids blocked"""
    nodes = 0
    path: List[int] = []
    visited = {source}

    def extend(v: int) -> Iterator[Tuple[int, ...]]:
        nonlocal nodes
        for eid in g.incident(v):
            if eid not in allowed:
                continue
            w = g.edge(eid).other(v)
            if w in visited:
                continue
            nodes += 1
            if nodes > budget:
                return
            if w in targets:
                yield tuple(path) + (eid,)
                continue
            if w in blocked:
                continue
            visited.add(w)
            path.append(eid)
            yield from extend(w)
            path.pop()
            visited.discard(w)

    yield from extend(source)


def cover_is_complete(g: SignedGraph, cover: Sequence[SignedCircuitKind]) -> bool:
    covered: Set[int] = set()
    for kind in cover:
        covered |= kind.edges
    return covered == set(g.edge_ids)
