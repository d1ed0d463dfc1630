"""
Signed Multigraph Model
Immutable loopless multigraphs with signed edges, and the structural edits built on them
"""

from __future__ import annotations

import hashlib
import json
import logging
from collections import Counter, deque
from dataclasses import dataclass
from types import MappingProxyType
from typing import (
    Dict,
    FrozenSet,
    Iterable,
    Iterator,
    List,
    Mapping,
    NamedTuple,
    Optional,
    Sequence,
    Set,
    Tuple,
    Union,
)

import networkx as nx

from ..exceptions import (
    BadEndpoint,
    BudgetExceeded,
    GraphError,
    LoopRejected,
    MixedParents,
    NegativeEdgeInContractionSet,
    NotEulerian,
    NotIncident,
    UnknownEdge,
    UnknownVertex,
)

logger = logging.getLogger("signedflow.sgraph")

SwitchingSet = FrozenSet[int]


# =============================================================================
# Data Model
# =============================================================================


@dataclass(frozen=True)
class Edge:
    """A signed edge with a stable id"""

    id: int
    u: int
    v: int
    sign: int  # +1 or -1

    @property
    def ends(self) -> Tuple[int, int]:
        return (self.u, self.v)

    def other(self, vertex: int) -> int:
        if vertex == self.u:
            return self.v
        if vertex == self.v:
            return self.u
        raise NotIncident(self.id, vertex)

    def end_index(self, vertex: int) -> int:
        """0 for the u half edge, 1 for the v half edge"""
        if vertex == self.u:
            return 0
        if vertex == self.v:
            return 1
        raise NotIncident(self.id, vertex)


@dataclass(frozen=True)
class SubgraphRef:
    """Edge subset of a parent graph, optionally widened to a larger vertex set"""

    parent: str
    edges: FrozenSet[int]
    vertices: Optional[FrozenSet[int]] = None

    def vertex_set(self, g: "SignedGraph") -> FrozenSet[int]:
        ends = {x for eid in self.edges for x in g.edge(eid).ends}
        if self.vertices is not None:
            ends |= self.vertices
        return frozenset(ends)

    def __len__(self) -> int:
        return len(self.edges)


SubgraphLike = Union[SubgraphRef, Iterable[int]]


class TourStep(NamedTuple):
    edge: int
    tail: int
    head: int


class Circuit(NamedTuple):
    """A circuit given as a closed walk: vertices[i] -edges[i]-> vertices[i+1]"""

    vertices: Tuple[int, ...]
    edges: Tuple[int, ...]


class SignedGraph:
    """
    Loopless signed multigraph.

    Values are immutable; every edit returns a new graph. Edge ids are
    stable across splitting, switching and deletion.
    """

    __slots__ = ("_vertices", "_edges", "_incidence", "_fingerprint", "_graph_id")

    def __init__(self, vertices: Iterable[int], edges: Iterable[Edge]):
        vertex_set = set(vertices)
        edge_map: Dict[int, Edge] = {}
        incidence: Dict[int, List[int]] = {v: [] for v in vertex_set}
        for e in sorted(edges, key=lambda x: x.id):
            if e.id in edge_map:
                raise GraphError("Duplicate edge id", {"edge": e.id})
            if e.sign not in (1, -1):
                raise GraphError("Edge sign must be +1 or -1", {"edge": e.id, "sign": e.sign})
            if e.u == e.v:
                raise LoopRejected(e.u)
            for x in e.ends:
                if x not in vertex_set:
                    raise BadEndpoint(e.id, x)
            edge_map[e.id] = e
            incidence[e.u].append(e.id)
            incidence[e.v].append(e.id)
        self._vertices: Tuple[int, ...] = tuple(sorted(vertex_set))
        self._edges: Mapping[int, Edge] = MappingProxyType(edge_map)
        self._incidence: Dict[int, Tuple[int, ...]] = {
            v: tuple(ids) for v, ids in incidence.items()
        }
        self._fingerprint: Optional[str] = None
        self._graph_id: Optional[str] = None

    # -------------------------------------------------------------------------
    # Accessors
    # -------------------------------------------------------------------------

    @property
    def vertices(self) -> Tuple[int, ...]:
        return self._vertices

    @property
    def edges(self) -> Mapping[int, Edge]:
        return self._edges

    @property
    def edge_ids(self) -> Tuple[int, ...]:
        return tuple(self._edges)

    def edge(self, eid: int) -> Edge:
        try:
            return self._edges[eid]
        except KeyError:
            raise UnknownEdge(eid) from None

    def sign(self, eid: int) -> int:
        return self.edge(eid).sign

    def has_vertex(self, v: int) -> bool:
        return v in self._incidence

    def incident(self, v: int) -> Tuple[int, ...]:
        """Incident edge ids at v, smallest id first"""
        try:
            return self._incidence[v]
        except KeyError:
            raise UnknownVertex(v) from None

    def half_edges(self, v: int) -> Tuple[Tuple[int, int], ...]:
        return tuple((eid, self._edges[eid].end_index(v)) for eid in self.incident(v))

    def degree(self, v: int) -> int:
        return len(self.incident(v))

    def negative_edges(self) -> Tuple[int, ...]:
        return tuple(eid for eid, e in self._edges.items() if e.sign < 0)

    def is_regular(self, d: int) -> bool:
        return all(len(ids) == d for ids in self._incidence.values())

    def is_cubic(self) -> bool:
        return bool(self._vertices) and self.is_regular(3)

    @property
    def next_vertex_id(self) -> int:
        return self._vertices[-1] + 1 if self._vertices else 0

    @property
    def next_edge_id(self) -> int:
        return max(self._edges) + 1 if self._edges else 0

    def __len__(self) -> int:
        return len(self._vertices)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SignedGraph):
            return NotImplemented
        return self._vertices == other._vertices and dict(self._edges) == dict(other._edges)

    def __hash__(self) -> int:
        return hash(self.fingerprint)

    def __repr__(self) -> str:
        return (
            f"SignedGraph(|V|={len(self._vertices)}, |E|={len(self._edges)}, "
            f"|E_N|={len(self.negative_edges())})"
        )

    # -------------------------------------------------------------------------
    # Derived graphs
    # -------------------------------------------------------------------------

    def subgraph(self, edges: Iterable[int], vertices: Iterable[int] = ()) -> "SignedGraph":
        """Graph on the given edges, their endpoints and any extra vertices"""
        chosen = [self.edge(eid) for eid in edges]
        keep = {x for e in chosen for x in e.ends} | set(vertices)
        return SignedGraph(keep, chosen)

    def delete_edges(self, edges: Iterable[int]) -> "SignedGraph":
        drop = set(edges)
        for eid in drop:
            self.edge(eid)
        return SignedGraph(self._vertices, (e for eid, e in self._edges.items() if eid not in drop))

    def add_edges(self, entries: Sequence[Tuple[int, int, int]]) -> Tuple["SignedGraph", List[int]]:
        """Append edges with fresh ids; returns the graph and the new ids"""
        start = self.next_edge_id
        new = [Edge(start + i, u, v, s) for i, (u, v, s) in enumerate(entries)]
        return SignedGraph(self._vertices, list(self._edges.values()) + new), [e.id for e in new]

    def with_signs(self, signs: Mapping[int, int]) -> "SignedGraph":
        edges = []
        for eid, e in self._edges.items():
            edges.append(Edge(eid, e.u, e.v, signs.get(eid, e.sign)))
        return SignedGraph(self._vertices, edges)

    def ref(self, edges: Iterable[int], spanning: bool = False) -> SubgraphRef:
        ids = frozenset(edges)
        for eid in ids:
            self.edge(eid)
        return SubgraphRef(self.graph_id, ids, frozenset(self._vertices) if spanning else None)

    def to_networkx(self, edges: Optional[Iterable[int]] = None) -> nx.MultiGraph:
        """MultiGraph keyed by edge id, all vertices included"""
        mg = nx.MultiGraph()
        mg.add_nodes_from(self._vertices)
        ids = self._edges if edges is None else edges
        for eid in ids:
            e = self.edge(eid)
            mg.add_edge(e.u, e.v, key=eid, sign=e.sign)
        return mg

    # -------------------------------------------------------------------------
    # Serialization
    # -------------------------------------------------------------------------

    def is_compact(self) -> bool:
        return self._vertices == tuple(range(len(self._vertices))) and tuple(self._edges) == tuple(
            range(len(self._edges))
        )

    def canonical_dict(self) -> Dict[str, object]:
        edges = [{"id": e.id, "u": e.u, "v": e.v, "sign": e.sign} for e in self._edges.values()]
        if self._vertices == tuple(range(len(self._vertices))):
            return {"vertices": len(self._vertices), "edges": edges}
        return {"vertices": list(self._vertices), "edges": edges}

    def canonical_json(self) -> str:
        return json.dumps(self.canonical_dict(), sort_keys=True, separators=(",", ":"))

    @property
    def fingerprint(self) -> str:
        """sha256 of the canonical graph file"""
        if self._fingerprint is None:
            self._fingerprint = hashlib.sha256(self.canonical_json().encode("utf-8")).hexdigest()
        return self._fingerprint

    @property
    def graph_id(self) -> str:
        """Sign-independent identity used by subgraph references"""
        if self._graph_id is None:
            payload = json.dumps(
                [list(self._vertices), [[e.id, e.u, e.v] for e in self._edges.values()]],
                separators=(",", ":"),
            )
            self._graph_id = hashlib.sha256(payload.encode("utf-8")).hexdigest()[:16]
        return self._graph_id

    def compact(self) -> Tuple["SignedGraph", Dict[int, int]]:
        """Relabel vertices to 0..N-1 in sorted order; edge ids are kept"""
        vmap = {v: i for i, v in enumerate(self._vertices)}
        return relabel(self, vmap), vmap

    def to_dict(self) -> Dict[str, object]:
        """Graph file form; vertices are compacted, edge ids must be 0..|E|-1"""
        if tuple(self._edges) != tuple(range(len(self._edges))):
            raise GraphError("Edge ids must be 0..|E|-1 to emit a graph file")
        g, _ = self.compact()
        return g.canonical_dict()

    @classmethod
    def from_dict(cls, data: Mapping[str, object]) -> "SignedGraph":
        count = data["vertices"]
        records = sorted(data["edges"], key=lambda r: r["id"])  # type: ignore[arg-type,index]
        if [r["id"] for r in records] != list(range(len(records))):
            raise GraphError("Edge ids must be 0..|E|-1")
        entries = [(r["u"], r["v"], r["sign"]) for r in records]
        return build_graph(count, entries)  # type: ignore[arg-type]


# =============================================================================
# Construction and Structural Edits
# =============================================================================


def build_graph(vertex_count: int, edges: Sequence[Tuple[int, int, int]]) -> SignedGraph:
    """Build a graph on 0..vertex_count-1 with edge ids in input order"""
    built = []
    for idx, (u, v, s) in enumerate(edges):
        if u == v:
            raise LoopRejected(u)
        for x in (u, v):
            if not 0 <= x < vertex_count:
                raise BadEndpoint(idx, x)
        built.append(Edge(idx, u, v, s))
    return SignedGraph(range(vertex_count), built)


def edge_set(g: SignedGraph, h: SubgraphLike) -> FrozenSet[int]:
    """Resolve a subgraph reference or edge-id iterable against g"""
    if isinstance(h, SubgraphRef):
        if h.parent != g.graph_id:
            raise MixedParents([h.parent, g.graph_id])
        ids = h.edges
    else:
        ids = frozenset(h)
    for eid in ids:
        g.edge(eid)
    return ids


def vertex_set(g: SignedGraph, h: SubgraphLike) -> FrozenSet[int]:
    if isinstance(h, SubgraphRef):
        edge_set(g, h)
        return h.vertex_set(g)
    return frozenset(x for eid in edge_set(g, h) for x in g.edge(eid).ends)


def switch_at(g: SignedGraph, U: Iterable[int]) -> SignedGraph:
    """Negate every edge with exactly one endpoint in U"""
    switched = set(U)
    for v in switched:
        if not g.has_vertex(v):
            raise UnknownVertex(v)
    edges = []
    for e in g.edges.values():
        flip = (e.u in switched) != (e.v in switched)
        edges.append(Edge(e.id, e.u, e.v, -e.sign if flip else e.sign))
    return SignedGraph(g.vertices, edges)


def sign_of(g: SignedGraph, h: SubgraphLike) -> int:
    result = 1
    for eid in edge_set(g, h):
        result *= g.sign(eid)
    return result


def negatives_in(g: SignedGraph, h: SubgraphLike) -> List[int]:
    return sorted(eid for eid in edge_set(g, h) if g.sign(eid) < 0)


def is_balanced(
    g: SignedGraph, h: Optional[SubgraphLike] = None
) -> Tuple[bool, Union[SwitchingSet, SubgraphRef]]:
    """
    Balance test by spanning-forest potentials.

    Returns (True, U) where switching at U makes the edges considered all
    positive, or (False, circuit) with an unbalanced circuit.
    """
    allowed = set(g.edge_ids) if h is None else set(edge_set(g, h))
    potential: Dict[int, int] = {}
    parent: Dict[int, Tuple[int, int]] = {}
    tree: Set[int] = set()
    for root in g.vertices:
        if root in potential:
            continue
        potential[root] = 1
        queue = deque([root])
        while queue:
            v = queue.popleft()
            for eid in g.incident(v):
                if eid not in allowed:
                    continue
                w = g.edge(eid).other(v)
                if w not in potential:
                    potential[w] = potential[v] * g.sign(eid)
                    parent[w] = (v, eid)
                    tree.add(eid)
                    queue.append(w)

    for eid in sorted(allowed - tree):
        e = g.edge(eid)
        if e.sign != potential[e.u] * potential[e.v]:
            return False, g.ref(_tree_path(parent, e.u, e.v) | {eid})

    return True, frozenset(v for v, p in potential.items() if p < 0)


def _tree_path(parent: Mapping[int, Tuple[int, int]], a: int, b: int) -> Set[int]:
    """Edge ids on the forest path between a and b"""

    def chain(x: int) -> List[Tuple[int, Optional[int]]]:
        out: List[Tuple[int, Optional[int]]] = [(x, None)]
        while x in parent:
            x, eid = parent[x]
            out[-1] = (out[-1][0], eid)
            out.append((x, None))
        return out

    up_a, up_b = chain(a), chain(b)
    on_b = {v for v, _ in up_b}
    edges: Set[int] = set()
    lca = a
    for v, eid in up_a:
        if v in on_b:
            lca = v
            break
        edges.add(eid)  # type: ignore[arg-type]
    for v, eid in up_b:
        if v == lca:
            break
        edges.add(eid)  # type: ignore[arg-type]
    return edges


@dataclass(frozen=True)
class SplitResult:
    graph: SignedGraph
    new_vertex: int


def split_vertex(
    g: SignedGraph, v: int, F: Iterable[int], new_vertex: Optional[int] = None
) -> SplitResult:
    """Re-attach the edges of F at a fresh vertex v'"""
    moving = set(F)
    if not g.has_vertex(v):
        raise UnknownVertex(v)
    for eid in moving:
        if v not in g.edge(eid).ends:
            raise NotIncident(eid, v)
    fresh = g.next_vertex_id if new_vertex is None else new_vertex
    if g.has_vertex(fresh):
        raise GraphError("Split vertex id already in use", {"vertex": fresh})
    edges = []
    for e in g.edges.values():
        if e.id in moving:
            u, w = (fresh, e.v) if e.u == v else (e.u, fresh)
            edges.append(Edge(e.id, u, w, e.sign))
        else:
            edges.append(e)
    return SplitResult(SignedGraph(list(g.vertices) + [fresh], edges), fresh)


@dataclass(frozen=True)
class ContractionResult:
    graph: SignedGraph
    vertex_map: Mapping[int, int]
    loops_removed: int


def contract_edges(g: SignedGraph, S: Iterable[int]) -> ContractionResult:
    """
    Contract a set of positive edges.

    Each merged class is represented by its smallest vertex id. Loops that
    the contraction would create are removed and counted.
    """
    contract = sorted(set(S))
    for eid in contract:
        if g.sign(eid) < 0:
            raise NegativeEdgeInContractionSet(eid)

    vertex_map: Dict[int, int] = {}
    for comp in nx.connected_components(g.to_networkx(contract)):
        rep = min(comp)
        for x in comp:
            vertex_map[x] = rep

    dropped = set(contract)
    edges = []
    loops = 0
    for e in g.edges.values():
        if e.id in dropped:
            continue
        u, v = vertex_map[e.u], vertex_map[e.v]
        if u == v:
            loops += 1
            continue
        edges.append(Edge(e.id, u, v, e.sign))
    if loops:
        logger.warning(f"Contraction removed {loops} loop(s)")
    return ContractionResult(SignedGraph(set(vertex_map.values()), edges), vertex_map, loops)


def symmetric_difference(parts: Sequence[SubgraphRef]) -> SubgraphRef:
    if not parts:
        raise GraphError("symmetric_difference needs at least one part")
    parents = [p.parent for p in parts]
    if len(set(parents)) > 1:
        raise MixedParents(parents)
    return SubgraphRef(parents[0], xor_edges(p.edges for p in parts))


def xor_edges(parts: Iterable[Iterable[int]]) -> FrozenSet[int]:
    counts: Counter = Counter()
    for part in parts:
        counts.update(set(part))
    return frozenset(eid for eid, c in counts.items() if c % 2 == 1)


def degrees_in(g: SignedGraph, edges: Iterable[int]) -> Counter:
    deg: Counter = Counter()
    for eid in edges:
        e = g.edge(eid)
        deg[e.u] += 1
        deg[e.v] += 1
    return deg


def odd_vertex(g: SignedGraph, edges: Iterable[int]) -> Optional[int]:
    """Smallest vertex of odd degree in the edge set, if any"""
    odd = [v for v, d in degrees_in(g, edges).items() if d % 2]
    return min(odd) if odd else None


def components(
    g: SignedGraph, edges: Optional[Iterable[int]] = None
) -> List[Tuple[FrozenSet[int], FrozenSet[int]]]:
    """(vertices, edges) per component, isolated vertices included, by smallest vertex"""
    mg = g.to_networkx(edges)
    out = []
    for comp in nx.connected_components(mg):
        ids = frozenset(k for _, _, k in mg.subgraph(comp).edges(keys=True))
        out.append((frozenset(comp), ids))
    return sorted(out, key=lambda c: min(c[0]))


def is_connected(g: SignedGraph, edges: Optional[Iterable[int]] = None) -> bool:
    """Connectivity over all vertices of g using the given edges"""
    if not g.vertices:
        return True
    return nx.is_connected(g.to_networkx(edges))


def euler_tour(g: SignedGraph, comp: SubgraphLike, start: Optional[int] = None) -> List[TourStep]:
    """
    Closed walk through every edge of comp exactly once.

    Hierholzer's method, always leaving along the smallest unused edge id,
    starting at the smallest vertex unless a start is given.
    """
    ids = edge_set(g, comp)
    if not ids:
        return []
    odd = odd_vertex(g, ids)
    if odd is not None:
        raise NotEulerian(f"vertex {odd} has odd degree")
    touched = {x for eid in ids for x in g.edge(eid).ends}
    if not nx.is_connected(g.subgraph(ids).to_networkx()):
        raise NotEulerian("edge set is disconnected")
    origin = min(touched) if start is None else start
    if origin not in touched:
        raise NotEulerian(f"start vertex {origin} is not on the subgraph")

    used: Set[int] = set()
    pointer: Dict[int, int] = {}
    stack: List[Tuple[int, Optional[int]]] = [(origin, None)]
    walk: List[Tuple[int, Optional[int]]] = []
    while stack:
        v, arrived_by = stack[-1]
        incident = g.incident(v)
        i = pointer.get(v, 0)
        while i < len(incident) and (incident[i] not in ids or incident[i] in used):
            i += 1
        pointer[v] = i
        if i < len(incident):
            eid = incident[i]
            used.add(eid)
            stack.append((g.edge(eid).other(v), eid))
        else:
            walk.append(stack.pop())
    walk.reverse()
    steps = [TourStep(walk[i][1], walk[i - 1][0], walk[i][0]) for i in range(1, len(walk))]
    return steps  # type: ignore[arg-type]


def boundary_cut(g: SignedGraph, h: SubgraphLike) -> FrozenSet[int]:
    inside = vertex_set(g, h)
    return frozenset(eid for eid, e in g.edges.items() if (e.u in inside) != (e.v in inside))


def relabel(
    g: SignedGraph, vertex_map: Mapping[int, int], edge_map: Optional[Mapping[int, int]] = None
) -> SignedGraph:
    emap = edge_map or {}
    edges = [
        Edge(emap.get(e.id, e.id), vertex_map[e.u], vertex_map[e.v], e.sign)
        for e in g.edges.values()
    ]
    return SignedGraph((vertex_map[v] for v in g.vertices), edges)


def same_up_to_relabel(g1: SignedGraph, g2: SignedGraph, vertex_map: Mapping[int, int]) -> bool:
    """Edge-id preserving equality after mapping the vertices of g1"""
    if set(g1.edge_ids) != set(g2.edge_ids):
        return False
    if {vertex_map.get(v, v) for v in g1.vertices} != set(g2.vertices):
        return False
    for eid, e in g1.edges.items():
        other = g2.edge(eid)
        if other.sign != e.sign:
            return False
        mapped = {vertex_map.get(e.u, e.u), vertex_map.get(e.v, e.v)}
        if mapped != {other.u, other.v} or len(mapped) != 2:
            return False
    return True


# =============================================================================
# Circuit Enumeration
# =============================================================================


def enumerate_circuits(
    g: SignedGraph,
    edges: Optional[Iterable[int]] = None,
    max_length: Optional[int] = None,
    budget: Optional[int] = None,
) -> Iterator[Circuit]:
    """Every circuit once, rooted at its smallest vertex"""
    allowed = set(g.edge_ids if edges is None else edges)
    return _circuit_walks(g, allowed, spanning=False, max_length=max_length, budget=budget)


def hamiltonian_circuits(
    g: SignedGraph, budget: Optional[int] = None
) -> Iterator[Circuit]:
    if len(g.vertices) < 2:
        return iter(())
    return _circuit_walks(g, set(g.edge_ids), spanning=True, max_length=None, budget=budget)


def find_hamiltonian_circuit(
    g: SignedGraph, balanced: bool = True, budget: Optional[int] = None
) -> Optional[Circuit]:
    """First Hamiltonian circuit (balanced ones only by default)"""
    for circuit in hamiltonian_circuits(g, budget=budget):
        if not balanced or sign_of(g, circuit.edges) > 0:
            return circuit
    return None


def _circuit_walks(
    g: SignedGraph,
    allowed: Set[int],
    spanning: bool,
    max_length: Optional[int],
    budget: Optional[int],
) -> Iterator[Circuit]:
    n = len(g.vertices)
    nodes = 0
    roots = g.vertices[:1] if spanning else g.vertices
    for root in roots:
        path_v = [root]
        path_e: List[int] = []
        on_path = {root}

        def extend(v: int) -> Iterator[Circuit]:
            nonlocal nodes
            for eid in g.incident(v):
                if eid not in allowed or (path_e and eid == path_e[-1]):
                    continue
                w = g.edge(eid).other(v)
                nodes += 1
                if budget is not None and nodes > budget:
                    raise BudgetExceeded("Circuit enumeration budget exceeded", nodes, budget)
                if w == root:
                    if path_e and path_e[0] < eid and (not spanning or len(path_v) == n):
                        yield Circuit(tuple(path_v) + (root,), tuple(path_e) + (eid,))
                    continue
                if w in on_path or w < root:
                    continue
                if max_length is not None and len(path_e) + 2 > max_length:
                    continue
                if spanning and len(path_v) == n:
                    continue
                path_v.append(w)
                path_e.append(eid)
                on_path.add(w)
                yield from extend(w)
                on_path.discard(w)
                path_e.pop()
                path_v.pop()

        yield from extend(root)
