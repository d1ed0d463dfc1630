"""
Flow Oracle
Exact decision procedures: k-NZF existence, flow number, antibalanced 2-factors
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Mapping, Optional, Set, Union

from ..config import get_search_settings
from ..exceptions import InputError, NotCubic, SignedFlowError
from .flows import (
    FlowAssignment,
    FlowKind,
    FlowMode,
    default_orientation,
    verify_flow,
)
from .search import FlowSearch, symmetric_domain
from .sgraph import SignedGraph, components, sign_of

logger = logging.getLogger("signedflow.oracle")


@dataclass
class SearchReport:
    """Outcome of one exhaustive k-NZF search"""

    exists: bool
    k: int
    mode: FlowMode
    witness: Optional[FlowAssignment] = None
    nodes: int = 0
    max_depth: int = 0
    wall_time: float = 0.0

    @property
    def decision(self) -> str:
        return "exists" if self.exists else "not-exists"

    def to_dict(self) -> Dict[str, object]:
        from .certificates import flow_payload

        out: Dict[str, object] = {
            "decision": self.decision,
            "k": self.k,
            "mode": self.mode.kind.value,
            "nodes": self.nodes,
            "max_depth": self.max_depth,
        }
        if self.witness is not None:
            out["witness"] = flow_payload(self.witness)
        return out


@dataclass
class FlowNumberReport:
    phi: Optional[int]
    admissible: bool
    k_max: int
    reports: List[SearchReport] = field(default_factory=list)

    @property
    def unbounded(self) -> bool:
        return not self.admissible

    def to_dict(self) -> Dict[str, object]:
        return {
            "phi": "inf" if self.unbounded else self.phi,
            "admissible": self.admissible,
            "k_max": self.k_max,
            "searches": [
                {"k": r.k, "decision": r.decision, "nodes": r.nodes} for r in self.reports
            ],
        }


MODE_NAMES = {"integer": FlowKind.INTEGER, "modular": FlowKind.MODULAR}


def _parse_mode(mode: Union[str, FlowKind]) -> FlowKind:
    """Accepts the short forms int/mod and the long forms integer/modular"""
    if isinstance(mode, str) and not isinstance(mode, FlowKind):
        mode = MODE_NAMES.get(mode.lower(), mode.lower())
    try:
        return FlowKind(mode)
    except ValueError:
        raise InputError(f"Unknown flow mode: {mode}") from None


def exists_nzf(
    g: SignedGraph,
    k: int,
    mode: Union[str, FlowKind] = FlowKind.INTEGER,
    budget: Optional[int] = None,
    forced: Optional[Mapping[int, int]] = None,
) -> SearchReport:
    """
    Decide whether g has a nowhere-zero k-flow (integer) or Z_k-flow.

    Values carry direction under the default orientation, so a negative
    value on a negative edge stands for the introverted orientation.
    Exceeding the budget raises BudgetExceeded, never a negative verdict.
    """
    if k < 2:
        raise InputError("k must be at least 2", {"k": k})
    kind = _parse_mode(mode)
    flow_mode = FlowMode(kind, k)
    modular = kind == FlowKind.MODULAR
    budget = budget if budget is not None else get_search_settings().budget_nodes

    values = symmetric_domain(k, modular)
    domains = {e: list(values) for e in g.edge_ids}
    for eid, x in (forced or {}).items():
        domains[g.edge(eid).id] = [x % k if modular else x]
    tau = default_orientation(g)

    started = time.perf_counter()
    search = FlowSearch(
        g, domains, tau, modulus=k if modular else None, budget=budget, symmetry_break=not forced
    )
    solution = search.first()
    elapsed = time.perf_counter() - started

    witness = None
    if solution is not None:
        witness = FlowAssignment(tau, solution, flow_mode)
        if not verify_flow(g, witness):
            raise SignedFlowError("Oracle witness failed verification", {"k": k})
    logger.debug(
        f"exists_nzf k={k} mode={kind.value}: {'exists' if witness is not None else 'not-exists'} "
        f"({search.stats.nodes} nodes, {elapsed:.3f}s)"
    )
    return SearchReport(
        exists=witness is not None,
        k=k,
        mode=flow_mode,
        witness=witness,
        nodes=search.stats.nodes,
        max_depth=search.stats.max_depth,
        wall_time=elapsed,
    )


def flow_number(
    g: SignedGraph, k_max: Optional[int] = None, budget: Optional[int] = None
) -> FlowNumberReport:
    """Least k with a nowhere-zero k-flow; inadmissible graphs report no bound"""
    from .admissibility import is_flow_admissible

    k_max = k_max if k_max is not None else get_search_settings().kmax
    if not is_flow_admissible(g, certify=False):
        return FlowNumberReport(phi=None, admissible=False, k_max=k_max)
    report = FlowNumberReport(phi=None, admissible=True, k_max=k_max)
    for k in range(2, k_max + 1):
        result = exists_nzf(g, k, FlowKind.INTEGER, budget=budget)
        report.reports.append(result)
        if result.exists:
            report.phi = k
            break
    if report.phi is None:
        logger.warning(f"No nowhere-zero flow found up to k_max={k_max}")
    return report


# =============================================================================
# Antibalanced 2-Factors
# =============================================================================


def perfect_matchings(g: SignedGraph) -> Iterator[List[int]]:
    """Perfect matchings as sorted edge-id lists, smallest uncovered vertex first"""
    covered: Set[int] = set()
    chosen: List[int] = []

    def extend() -> Iterator[List[int]]:
        free = next((v for v in g.vertices if v not in covered), None)
        if free is None:
            yield sorted(chosen)
            return
        covered.add(free)
        for eid in g.incident(free):
            w = g.edge(eid).other(free)
            if w in covered:
                continue
            covered.add(w)
            chosen.append(eid)
            yield from extend()
            chosen.pop()
            covered.discard(w)
        covered.discard(free)

    yield from extend()


def is_antibalanced_factor(g: SignedGraph, factor: List[int]) -> bool:
    for _, comp_edges in components(g, factor):
        if comp_edges and sign_of(g, comp_edges) * (-1) ** len(comp_edges) != 1:
            return False
    return True


def antibalanced_2factor(g: SignedGraph) -> Optional[List[int]]:
    """A 2-factor whose even circuits are balanced and odd circuits unbalanced"""
    for v in g.vertices:
        if g.degree(v) != 3:
            raise NotCubic(v)
    for matching in perfect_matchings(g):
        in_matching = set(matching)
        factor = [e for e in g.edge_ids if e not in in_matching]
        if is_antibalanced_factor(g, factor):
            return factor
    return None
