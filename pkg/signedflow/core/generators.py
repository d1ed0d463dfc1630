"""
Graph Families
Named signed graphs and signature-class enumeration used by the CLI, sweeps and tests
"""

from __future__ import annotations

import logging
import random
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import networkx as nx

from ..exceptions import InputError
from .cayley import CayleySpec, gen_cayley
from .ladders import LadderKind, LadderSpec, gen_ladder, ladder_edge
from .sgraph import SignedGraph, build_graph

logger = logging.getLogger("signedflow.generators")

Z4Z2_SPEC = CayleySpec(
    group=(4, 2),
    connection=((1, 0), (3, 0), (0, 1)),
    signature={1: -1, 2: -1, 11: -1},
)


def gen_gn(n: int) -> SignedGraph:
    """
    C_2n with every other edge doubled into a positive and a negative parallel edge.

    Cubic, with n negative edges and a balanced Hamiltonian circuit through
    the positive edges; n must be odd and at least 3.
    """
    if n < 3 or n % 2 == 0:
        raise InputError("G_n needs an odd n >= 3", {"n": n})
    entries: List[Tuple[int, int, int]] = []
    for i in range(2 * n):
        j = (i + 1) % (2 * n)
        entries.append((i, j, 1))
        if i % 2 == 0:
            entries.append((i, j, -1))
    return build_graph(2 * n, entries)


def gn_hamiltonian(n: int) -> List[int]:
    """Edge ids of the all-positive Hamiltonian circuit of G_n"""
    g = gen_gn(n)
    return [eid for eid, e in g.edges.items() if e.sign > 0]


def gen_z4z2() -> SignedGraph:
    """Signed Cayley graph on Z4 x Z2 whose flow number is 6"""
    return gen_cayley(Z4Z2_SPEC)


def gen_k4(negative: Sequence[int] = ()) -> SignedGraph:
    """K4 on 0..3 with edges in lexicographic pair order"""
    entries = []
    for u in range(4):
        for v in range(u + 1, 4):
            entries.append((u, v, 1))
    signs = {eid: -1 for eid in negative}
    return build_graph(4, [(u, v, signs.get(i, s)) for i, (u, v, s) in enumerate(entries)])


def k4_factors() -> Tuple[List[int], List[int], List[int]]:
    """The three perfect matchings of gen_k4"""
    return [0, 5], [1, 4], [2, 3]


def gen_prism_factors(
    negative: Sequence[int] = (),
) -> Tuple[SignedGraph, Tuple[List[int], List[int], List[int]]]:
    """CL_3 with a Kotzig decomposition into three perfect matchings"""
    kind = LadderKind.CIRCULAR
    spec = LadderSpec(kind, 3, {eid: -1 for eid in negative})

    def edge(part: str, i: int) -> int:
        return ladder_edge(kind, 3, part, i)

    factors = (
        [edge("rung", 0), edge("x", 1), edge("y", 1)],
        [edge("rung", 1), edge("x", 2), edge("y", 2)],
        [edge("rung", 2), edge("x", 0), edge("y", 0)],
    )
    return gen_ladder(spec), factors


def gen_random_cubic(vertices: int, negatives: int, seed: int = 0) -> SignedGraph:
    """Random simple cubic graph with a random set of negative edges"""
    if vertices < 4 or vertices % 2:
        raise InputError(
            "Cubic graphs need an even number of vertices >= 4", {"vertices": vertices}
        )
    rng = random.Random(seed)
    base = nx.random_regular_graph(3, vertices, seed=rng.randrange(2**31))
    pairs = sorted(tuple(sorted(e)) for e in base.edges())
    chosen = set(rng.sample(range(len(pairs)), min(negatives, len(pairs))))
    entries = [(u, v, -1 if i in chosen else 1) for i, (u, v) in enumerate(pairs)]
    return build_graph(vertices, entries)


# =============================================================================
# Signature Classes
# =============================================================================


def _cotree(g: SignedGraph) -> Tuple[List[int], List[int]]:
    """Spanning forest edges and the remaining edges, both sorted"""
    edges = nx.minimum_spanning_edges(g.to_networkx(), algorithm="kruskal", keys=True, data=False)
    forest = sorted(k for _, _, k in edges)
    rest = sorted(set(g.edge_ids) - set(forest))
    return forest, rest


def signature_count(g: SignedGraph) -> int:
    """Number of switching classes of signatures on g's underlying graph"""
    _, rest = _cotree(g)
    return 2 ** len(rest)


def _with_mask(g: SignedGraph, forest: List[int], rest: List[int], mask: int) -> SignedGraph:
    signs: Dict[int, int] = {e: 1 for e in forest}
    for bit, eid in enumerate(rest):
        signs[eid] = -1 if mask >> bit & 1 else 1
    return g.with_signs(signs)


def signature_classes(g: SignedGraph) -> Iterator[SignedGraph]:
    """
    One representative per switching class: positive spanning forest,
    every sign pattern on the remaining edges in binary-counter order.
    """
    forest, rest = _cotree(g)
    for mask in range(2 ** len(rest)):
        yield _with_mask(g, forest, rest, mask)


def sample_signature_classes(
    g: SignedGraph, count: int, seed: Optional[int] = None
) -> Iterator[SignedGraph]:
    """Representatives of `count` distinct switching classes drawn at random"""
    forest, rest = _cotree(g)
    total = 2 ** len(rest)
    rng = random.Random(seed)
    masks = range(total) if count >= total else sorted(rng.sample(range(total), count))
    for mask in masks:
        yield _with_mask(g, forest, rest, mask)
