"""
Constrained Flow Search
Backtracking over per-edge value domains with vertex-boundary propagation
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Dict, Iterator, List, Mapping, Optional, Sequence, Tuple

from ..exceptions import BudgetExceeded, MissingValue
from .sgraph import SignedGraph

logger = logging.getLogger("signedflow.search")


@dataclass
class SearchStats:
    """Counters kept by a search run"""

    nodes: int = 0  # value trials
    max_depth: int = 0
    solutions: int = 0


class FlowSearch:
    """
    Enumerate edge values with zero boundary at every vertex.

    Only edges listed in `domains` are variables; every other edge counts
    as 0. Boundaries are taken with the supplied half-edge orientation, in
    the integers or modulo `modulus`.

    The next variable is always taken at the vertex with the fewest open
    edges, so a vertex with one open edge forces its last value. Integer
    searches also prune when a residual exceeds what the open edges at that
    vertex can still absorb.
    """

    def __init__(
        self,
        g: SignedGraph,
        domains: Mapping[int, Sequence[int]],
        tau: Mapping[int, Tuple[int, int]],
        modulus: Optional[int] = None,
        budget: Optional[int] = None,
        symmetry_break: bool = False,
    ):
        self.g = g
        self.modulus = modulus
        self.budget = budget
        self.symmetry_break = symmetry_break
        self.stats = SearchStats()

        self._domains: Dict[int, Tuple[int, ...]] = {}
        for eid in sorted(domains):
            values = [self._norm(x) for x in domains[eid]]
            self._domains[eid] = tuple(dict.fromkeys(values))
        self._coeff: Dict[int, Dict[int, int]] = {v: {} for v in g.vertices}
        for eid in self._domains:
            e = g.edge(eid)
            if eid not in tau:
                raise MissingValue(eid)
            tu, tv = tau[eid]
            self._coeff[e.u][eid] = tu
            self._coeff[e.v][eid] = tv

        self._value: Dict[int, int] = {}
        self._residual: Dict[int, int] = {v: 0 for v in g.vertices}
        self._open: Dict[int, int] = {v: len(c) for v, c in self._coeff.items()}
        self._reach: Dict[int, int] = {
            v: sum(self._span(eid) for eid in c) for v, c in self._coeff.items()
        }

    # -------------------------------------------------------------------------
    # Public API
    # -------------------------------------------------------------------------

    def solutions(self) -> Iterator[Dict[int, int]]:
        """All solutions in search order"""
        if any(not d for d in self._domains.values()):
            return
        yield from self._descend(0, self.symmetry_break)

    def first(self) -> Optional[Dict[int, int]]:
        result = next(self.solutions(), None)
        logger.debug(
            f"Flow search: {len(self._domains)} variables, {self.stats.nodes} nodes, "
            f"depth {self.stats.max_depth}, {'found' if result is not None else 'none'}"
        )
        return result

    # -------------------------------------------------------------------------
    # Internals
    # -------------------------------------------------------------------------

    def _norm(self, x: int) -> int:
        return x % self.modulus if self.modulus else x

    def _span(self, eid: int) -> int:
        if self.modulus:
            return 0
        return max(abs(x) for x in self._domains[eid]) if self._domains[eid] else 0

    def _pick(self) -> Optional[Tuple[int, int]]:
        best: Optional[Tuple[int, int]] = None
        for v, count in self._open.items():
            if count and (best is None or count < best[0]):
                best = (count, v)
                if count == 1:
                    break
        if best is None:
            return None
        vertex = best[1]
        eid = min(e for e in self._coeff[vertex] if e not in self._value)
        return eid, vertex

    def _candidates(self, eid: int, vertex: int, break_sign: bool) -> Sequence[int]:
        domain = self._domains[eid]
        if self._open[vertex] == 1:
            forced = self._norm(-self._coeff[vertex][eid] * self._residual[vertex])
            return (forced,) if forced in domain else ()
        if break_sign:
            if self.modulus:
                return tuple(x for x in domain if x <= self.modulus - x)
            return tuple(x for x in domain if x >= 0)
        return domain

    def _descend(self, depth: int, break_sign: bool) -> Iterator[Dict[int, int]]:
        pick = self._pick()
        if pick is None:
            self.stats.solutions += 1
            yield dict(self._value)
            return
        eid, vertex = pick
        forced = self._open[vertex] == 1
        self.stats.max_depth = max(self.stats.max_depth, depth)
        for x in self._candidates(eid, vertex, break_sign):
            self.stats.nodes += 1
            if self.budget is not None and self.stats.nodes > self.budget:
                logger.warning(f"Flow search budget of {self.budget} nodes exceeded")
                raise BudgetExceeded(nodes=self.stats.nodes, budget=self.budget)
            if self._assign(eid, x):
                yield from self._descend(depth + 1, break_sign and forced)
            self._unassign(eid, x)

    def _assign(self, eid: int, x: int) -> bool:
        self._value[eid] = x
        e = self.g.edge(eid)
        span = self._span(eid)
        ok = True
        for v in e.ends:
            c = self._coeff[v][eid]
            self._residual[v] = self._norm(self._residual[v] + c * x)
            self._open[v] -= 1
            self._reach[v] -= span
        for v in e.ends:
            r = self._residual[v]
            if self._open[v] == 0:
                ok = ok and r == 0
            elif not self.modulus:
                ok = ok and abs(r) <= self._reach[v]
        return ok

    def _unassign(self, eid: int, x: int) -> None:
        del self._value[eid]
        e = self.g.edge(eid)
        span = self._span(eid)
        for v in e.ends:
            c = self._coeff[v][eid]
            self._residual[v] = self._norm(self._residual[v] - c * x)
            self._open[v] += 1
            self._reach[v] += span


def symmetric_domain(k: int, modulus: bool = False) -> List[int]:
    """Nonzero values below k: 1, -1, 2, -2, ... or 1..k-1 modulo k"""
    if modulus:
        return list(range(1, k))
    out: List[int] = []
    for x in range(1, k):
        out.extend((x, -x))
    return out
