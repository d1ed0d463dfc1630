"""
Sweep Runner
Runs the constructions and the oracle over graph families and signature classes
"""

from __future__ import annotations

import concurrent.futures
import logging
from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Iterator, List, Optional, Sequence, Tuple

from ..config import get_run_settings, get_search_settings
from ..exceptions import BudgetExceeded, InputError, SignedFlowError
from ..models.schemas import SweepRow
from ..core.admissibility import is_flow_admissible
from ..core.cayley import CayleySpec, flow_number_odd_cayley, gen_cayley, six_nzf_abelian_cayley
from ..core.flows import achieved_k
from ..core.generators import (
    gen_gn,
    gn_hamiltonian,
    sample_signature_classes,
    signature_classes,
    signature_count,
)
from ..core.ladders import LadderKind, LadderSpec, gen_ladder, recognize_ladder, six_nzf_ladder
from ..core.oracle import flow_number
from ..core.sgraph import SignedGraph, is_connected
from ..core.six_flow import six_nzf_balanced_hamiltonian

logger = logging.getLogger("signedflow.sweep")

FAMILIES = ("gn", "cl", "ml", "cayley")

# constructed k (or the classifier's phi) for an admissible instance
Constructor = Callable[[SignedGraph], int]


@dataclass
class SweepRequest:
    """One sweep: a family, an index range and how many signature classes per graph"""

    family: str
    start: int
    stop: int
    group: Optional[Tuple[int, ...]] = None
    connection: Optional[List[Tuple[int, ...]]] = None
    sample: Optional[int] = None
    oracle: bool = True
    kmax: Optional[int] = None
    threads: Optional[int] = None
    seed: Optional[int] = None

    def __post_init__(self) -> None:
        if self.family not in FAMILIES:
            raise InputError(f"Unknown sweep family: {self.family}", {"known": list(FAMILIES)})
        if self.start > self.stop:
            raise InputError("Sweep range is empty", {"start": self.start, "stop": self.stop})


@dataclass
class SweepTask:
    instance_id: str
    family: str
    graph: SignedGraph
    construct: Constructor
    exact: bool = False  # the constructor claims the exact flow number


@dataclass
class SweepReport:
    request: SweepRequest
    rows: List[SweepRow] = field(default_factory=list)

    @property
    def disagreements(self) -> List[SweepRow]:
        return [r for r in self.rows if r.agreement is False]

    @property
    def budget_rows(self) -> List[SweepRow]:
        return [r for r in self.rows if r.status == "budget"]


# =============================================================================
# Task Generation
# =============================================================================


def _classes(g: SignedGraph, request: SweepRequest) -> Iterator[Tuple[int, SignedGraph]]:
    total = signature_count(g)
    if request.sample is None or request.sample >= total:
        yield from enumerate(signature_classes(g))
        return
    seed = request.seed if request.seed is not None else get_run_settings().seed
    logger.info(f"Sampling {request.sample} of {total} signature classes (seed {seed})")
    yield from enumerate(sample_signature_classes(g, request.sample, seed))


def _ladder_constructor(g: SignedGraph) -> int:
    spec = recognize_ladder(g)
    if spec is None:
        raise InputError("Sweep instance is not a canonical ladder")
    flow, _ = six_nzf_ladder(spec)
    return achieved_k(flow)


def _gn_tasks(request: SweepRequest) -> Iterator[SweepTask]:
    for n in range(request.start, request.stop + 1):
        if n < 3 or n % 2 == 0:
            continue
        circuit = gn_hamiltonian(n)

        def construct(g: SignedGraph, circuit: List[int] = circuit) -> int:
            flow, _ = six_nzf_balanced_hamiltonian(g, circuit)
            return achieved_k(flow)

        yield SweepTask(f"gn-n{n:03d}", "gn", gen_gn(n), construct)


def _ladder_tasks(request: SweepRequest) -> Iterator[SweepTask]:
    kind = LadderKind.CIRCULAR if request.family == "cl" else LadderKind.MOEBIUS
    for n in range(max(request.start, 1), request.stop + 1):
        base = gen_ladder(LadderSpec(kind, n))
        for index, g in _classes(base, request):
            instance_id = f"{request.family}-n{n:03d}-s{index:05d}"
            yield SweepTask(instance_id, request.family, g, _ladder_constructor)


def _cayley_specs(request: SweepRequest) -> Iterator[Tuple[str, CayleySpec]]:
    if request.group is not None:
        group = tuple(request.group)
        if request.connection is None:
            raise InputError("A Cayley sweep over a fixed group needs --connection")
        label = "x".join(str(n) for n in group)
        yield f"z{label}", CayleySpec(group, tuple(request.connection))
        return
    for n in range(max(request.start, 2), request.stop + 1):
        if request.connection is not None:
            yield f"z{n:02d}", CayleySpec((n,), tuple(request.connection))
            continue
        reps = range(1, (n + 1) // 2)
        for size in range(1, 4):
            for chosen in combinations(reps, size):
                connection = tuple((s,) for r in chosen for s in sorted({r, n - r}))
                label = "-".join(str(r) for r in chosen)
                yield f"z{n:02d}-g{label}", CayleySpec((n,), connection)


def _cayley_tasks(request: SweepRequest) -> Iterator[SweepTask]:
    for label, spec in _cayley_specs(request):
        base = gen_cayley(spec)
        if not is_connected(base):
            logger.debug(f"Skipping disconnected Cayley graph {label}")
            continue
        odd = spec.order % 2 == 1
        for index, g in _classes(base, request):
            signed = spec.with_signature({e: g.sign(e) for e in g.edge_ids})

            def construct(_: SignedGraph, signed: CayleySpec = signed) -> int:
                if signed.order % 2:
                    phi, _ = flow_number_odd_cayley(signed)
                    return phi
                flow, _ = six_nzf_abelian_cayley(signed)
                return achieved_k(flow)

            yield SweepTask(f"cayley-{label}-s{index:05d}", "cayley", g, construct, exact=odd)


def build_tasks(request: SweepRequest) -> List[SweepTask]:
    if request.family == "gn":
        return list(_gn_tasks(request))
    if request.family in ("cl", "ml"):
        return list(_ladder_tasks(request))
    return list(_cayley_tasks(request))


# =============================================================================
# Execution
# =============================================================================


def run_task(task: SweepTask, oracle: bool, kmax: Optional[int] = None) -> SweepRow:
    """Construct, then check against the oracle; budget overruns become marked rows"""
    g = task.graph
    negatives = len(g.negative_edges())
    row = SweepRow(
        instance_id=task.instance_id,
        family=task.family,
        negatives=negatives,
        negative_parity="even" if negatives % 2 == 0 else "odd",
        admissible=bool(is_flow_admissible(g, certify=False)),
    )
    try:
        if row.admissible:
            row.constructed_k = task.construct(g)
        if oracle:
            report = flow_number(g, kmax)
            if not report.admissible:
                row.oracle_phi = "inf"
                row.agreement = not row.admissible
            elif report.phi is None:
                row.oracle_phi = f">{report.k_max}"
            else:
                row.oracle_phi = str(report.phi)
                if row.constructed_k is not None:
                    if task.exact:
                        row.agreement = report.phi == row.constructed_k
                    else:
                        row.agreement = report.phi <= row.constructed_k <= 6
    except BudgetExceeded as e:
        logger.warning(f"{task.instance_id}: budget exceeded after {e.nodes} nodes")
        row.status = "budget"
        row.detail = str(e)
    except SignedFlowError as e:
        logger.error(f"{task.instance_id}: {e}")
        row.status = "error"
        row.detail = str(e)
    return row


def run_sweep(request: SweepRequest) -> SweepReport:
    """
    Run every task of a sweep.

    Rows are independent, so they run in a thread pool; the report is
    sorted by instance id whatever the completion order.
    """
    tasks = build_tasks(request)
    threads = request.threads or get_run_settings().threads
    kmax = request.kmax or get_search_settings().kmax
    logger.info(
        f"Sweep {request.family} {request.start}..{request.stop}: "
        f"{len(tasks)} instances, {threads} threads"
    )

    if threads <= 1:
        rows = [run_task(task, request.oracle, kmax) for task in tasks]
    else:
        with concurrent.futures.ThreadPoolExecutor(max_workers=threads) as executor:
            futures = [executor.submit(run_task, task, request.oracle, kmax) for task in tasks]
            rows = [f.result() for f in concurrent.futures.as_completed(futures)]

    report = SweepReport(request, sorted(rows, key=lambda r: r.instance_id))
    if report.disagreements:
        logger.error(f"{len(report.disagreements)} rows disagree with the oracle")
    if report.budget_rows:
        logger.warning(f"{len(report.budget_rows)} rows hit the search budget")
    return report


def summarize(rows: Sequence[SweepRow]) -> dict:
    return {
        "rows": len(rows),
        "admissible": sum(1 for r in rows if r.admissible),
        "disagreements": sum(1 for r in rows if r.agreement is False),
        "budget": sum(1 for r in rows if r.status == "budget"),
        "errors": sum(1 for r in rows if r.status == "error"),
    }
