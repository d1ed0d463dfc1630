"""
Signed Ladders
Circular and Moebius ladders, extenders, template flows and their 6-flow constructions
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from ..exceptions import (
    BasePairNotPositive,
    InputError,
    NotFlowAdmissible,
    PreconditionViolated,
    TemplatePreconditionViolated,
)
from .admissibility import is_flow_admissible
from .flows import (
    FlowAssignment,
    FlowMode,
    Orientation,
    reexpress,
    require_verified,
    switch_flow,
    verify_flow,
)
from .oracle import exists_nzf
from .sgraph import SignedGraph, build_graph, is_balanced, sign_of, switch_at
from .six_flow import find_balanced_hamiltonian, six_nzf_balanced_hamiltonian
from .templates import ladder_template
from .trace import ConstructionTrace

logger = logging.getLogger("signedflow.ladders")

PARTS = ("rung", "x", "y")
# second edges of the x0 and y0 digons in CL_1
CL1_DIGON_EDGES = (3, 4)


class LadderKind(str, Enum):
    CIRCULAR = "circular"
    MOEBIUS = "moebius"


@dataclass(frozen=True)
class LadderSpec:
    """
    CL_n or ML_n under canonical labels: x_i = i, y_i = n + i.

    Edge ids: rungs 0..n-1, x-edges n..2n-1 (x_i x_{i+1}), y-edges 2n..3n-1.
    In ML_n the last x-edge is x_{n-1} y_0 and the last y-edge y_{n-1} x_0.
    CL_1 replaces its loops by the digons x_0 x_0' (edges 1, 3) and y_0 y_0' (edges 2, 4).
    Signs are keyed by edge id; absent edges are positive.
    """

    kind: LadderKind
    n: int
    signs: Mapping[int, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.n < 1:
            raise InputError("Ladders need at least one rung", {"n": self.n})
        object.__setattr__(self, "kind", LadderKind(self.kind))
        object.__setattr__(self, "signs", {e: s for e, s in sorted(self.signs.items()) if s < 0})

    @classmethod
    def from_parts(
        cls,
        kind: LadderKind,
        n: int,
        rung: Optional[Sequence[int]] = None,
        x: Optional[Sequence[int]] = None,
        y: Optional[Sequence[int]] = None,
    ) -> "LadderSpec":
        signs: Dict[int, int] = {}
        for part, values in zip(PARTS, (rung, x, y)):
            for i, s in enumerate(values or ()):
                signs[ladder_edge(kind, n, part, i)] = s
        return cls(kind, n, signs)

    def sign(self, part: str, i: int) -> int:
        return self.signs.get(ladder_edge(self.kind, self.n, part, i % self.n), 1)

    def square_sign(self, i: int) -> int:
        """Sign of the 4-circuit x_i x_{i+1} y_{i+1} y_i"""
        rungs = self.sign("rung", i) * self.sign("rung", i + 1)
        return self.sign("x", i) * self.sign("y", i) * rungs

    def to_dict(self) -> Dict[str, object]:
        out: Dict[str, object] = {
            "kind": self.kind.value,
            "n": self.n,
            **{part: [self.sign(part, i) for i in range(self.n)] for part in PARTS},
        }
        if self.kind == LadderKind.CIRCULAR and self.n == 1:
            out["digon"] = [self.signs.get(e, 1) for e in CL1_DIGON_EDGES]
        return out


@dataclass(frozen=True)
class ExtenderSpec:
    """Insert `length` rung columns between columns `position` and `position + 1`"""

    base: LadderSpec
    position: int
    length: int


def ladder_edge(kind: LadderKind, n: int, part: str, i: int) -> int:
    offsets = {"rung": 0, "x": n, "y": 2 * n}
    if part not in offsets or not 0 <= i < n:
        raise InputError("No such ladder edge", {"part": part, "index": i, "n": n})
    return offsets[part] + i


# =============================================================================
# Generation
# =============================================================================


def gen_ladder(spec: LadderSpec) -> SignedGraph:
    n = spec.n
    entries: List[Tuple[int, int, int]] = []
    for i in range(n):
        entries.append((i, n + i, spec.sign("rung", i)))
    if n == 1:
        if spec.kind == LadderKind.MOEBIUS:
            entries += [(0, 1, spec.sign("x", 0)), (1, 0, spec.sign("y", 0))]
            return build_graph(2, entries)
        # the two loops of CL_1 become digons through x0' = 2 and y0' = 3
        back_x, back_y = (spec.signs.get(e, 1) for e in CL1_DIGON_EDGES)
        entries += [(0, 2, spec.sign("x", 0)), (1, 3, spec.sign("y", 0))]
        entries += [(2, 0, back_x), (3, 1, back_y)]
        return build_graph(4, entries)
    for i in range(n):
        if spec.kind == LadderKind.MOEBIUS and i == n - 1:
            entries.append((n - 1, n, spec.sign("x", i)))
        else:
            entries.append((i, (i + 1) % n, spec.sign("x", i)))
    for i in range(n):
        if spec.kind == LadderKind.MOEBIUS and i == n - 1:
            entries.append((2 * n - 1, 0, spec.sign("y", i)))
        else:
            entries.append((n + i, n + (i + 1) % n, spec.sign("y", i)))
    return build_graph(2 * n, entries)


def ladder_orientation(g: SignedGraph) -> Orientation:
    """Positive edges leave their stored u end; negative edges are extroverted"""
    return {eid: ((1, -1) if e.sign > 0 else (1, 1)) for eid, e in g.edges.items()}


def recognize_ladder(g: SignedGraph) -> Optional[LadderSpec]:
    """The ladder spec whose canonical graph has g's labelled structure, if any"""
    count = len(g.vertices)
    candidates = [(LadderKind.CIRCULAR, 1)] if count == 4 else []
    if count % 2 == 0 and count >= 2:
        candidates += [(LadderKind.CIRCULAR, count // 2), (LadderKind.MOEBIUS, count // 2)]
    for kind, n in candidates:
        reference = gen_ladder(LadderSpec(kind, n))
        if reference.vertices != g.vertices or reference.edge_ids != g.edge_ids:
            continue
        if all({e.u, e.v} == {g.edge(eid).u, g.edge(eid).v} for eid, e in reference.edges.items()):
            return LadderSpec(kind, n, {eid: e.sign for eid, e in g.edges.items()})
    return None


# =============================================================================
# Template Flows
# =============================================================================


def template_flow(name: str) -> Tuple[LadderSpec, FlowAssignment]:
    """Ladder flow from the template table on its base ladder, verified at the stated k"""
    template = ladder_template(name)
    kind = LadderKind(template.kind.value)
    spec = LadderSpec.from_parts(
        kind, template.n, template.signs.rung, template.signs.x, template.signs.y
    )
    g = gen_ladder(spec)
    values: Dict[int, int] = {}
    for part in PARTS:
        for i, x in enumerate(getattr(template.values, part)):
            values[ladder_edge(kind, template.n, part, i)] = x
    flow = FlowAssignment(ladder_orientation(g), values, FlowMode.integer(template.k))
    return spec, require_verified(g, flow, f"template {name}")


# =============================================================================
# Extenders
# =============================================================================


def _index_map(position: int, length: int, old: int) -> int:
    return old if old <= position else old + length


def extended_spec(spec: ExtenderSpec) -> LadderSpec:
    """Signature of the extender as a ladder with n + length rungs"""
    base = spec.base
    if base.kind != LadderKind.CIRCULAR or base.n < 2:
        raise InputError("Extenders apply to circular ladders with at least two rungs")
    i, m, n = spec.position, spec.length, base.n
    if not 0 <= i < n or m < 0:
        raise InputError("Extender position or length out of range", {"position": i, "length": m})
    if base.sign("x", i) < 0 or base.sign("y", i) < 0:
        raise BasePairNotPositive(i)

    size = n + m
    parts: Dict[str, List[int]] = {part: [1] * size for part in PARTS}
    for a in range(n):
        target = _index_map(i, m, a)
        parts["rung"][target] = base.sign("rung", a)
        if a != i:
            parts["x"][target] = base.sign("x", a)
            parts["y"][target] = base.sign("y", a)
    for j in range(1, m + 1):
        parts["rung"][i + j] = -1 if j % 2 else 1
    return LadderSpec.from_parts(LadderKind.CIRCULAR, size, parts["rung"], parts["x"], parts["y"])


def extend_ladder(spec: ExtenderSpec) -> SignedGraph:
    """The (m, i)-extender; m = 0 gives the base ladder"""
    if spec.length == 0:
        return gen_ladder(spec.base)
    return gen_ladder(extended_spec(spec))


def _block_values(t: int, c: int) -> Dict[Tuple[str, int], int]:
    """One period of the extender flow, keyed by (part, offset within the block)"""
    return {
        ("x", 1): -t * c,
        ("x", 2): -2 * t * c,
        ("x", 3): -t * c,
        ("rung", 1): t * c,
        ("rung", 2): t * c,
        ("rung", 3): -t * c,
        ("rung", 4): -t * c,
        ("y", 1): -t * c,
        ("y", 3): t * c,
    }


def extend_flow(base_flow: FlowAssignment, spec: ExtenderSpec, variant: int) -> FlowAssignment:
    """
    Extend a template flow across a (4q, i)-extender.

    The base values are carried along the inserted paths with 0 on the new
    rungs; each block of four inserted columns then adds ±1 (variant 1) or
    ±2 (variant 2) times a periodic flow, with the block sign chosen so the
    result stays nowhere-zero below the base k.
    """
    if variant not in (1, 2):
        raise InputError("Extender variant must be 1 or 2", {"variant": variant})
    base_graph = gen_ladder(spec.base)
    report = verify_flow(base_graph, base_flow)
    if not report:
        raise TemplatePreconditionViolated(f"base flow does not verify: {report.reason}")
    if spec.length % 4:
        raise TemplatePreconditionViolated("extender length must be a multiple of 4")
    if spec.length == 0:
        return base_flow

    base = reexpress(base_flow, ladder_orientation(base_graph))
    n, i, m = spec.base.n, spec.position, spec.length
    x_i = base.values[ladder_edge(LadderKind.CIRCULAR, n, "x", i)]
    y_i = base.values[ladder_edge(LadderKind.CIRCULAR, n, "y", i)]
    wanted_y = 2 if variant == 1 else 1
    if abs(x_i) != 1 or abs(y_i) != wanted_y:
        raise TemplatePreconditionViolated(
            f"variant {variant} needs |f(x_i x_i+1)| = 1 and |f(y_i y_i+1)| = {wanted_y}"
        )

    target = extended_spec(spec)
    g = gen_ladder(target)
    size = target.n
    values: Dict[int, int] = {}
    for a in range(n):
        mapped = _index_map(i, m, a)
        values[ladder_edge(LadderKind.CIRCULAR, size, "rung", mapped)] = base.values[
            ladder_edge(LadderKind.CIRCULAR, n, "rung", a)
        ]
        for part in ("x", "y"):
            values[ladder_edge(LadderKind.CIRCULAR, size, part, mapped)] = base.values[
                ladder_edge(LadderKind.CIRCULAR, n, part, a)
            ]
    for j in range(1, m + 1):
        values[ladder_edge(LadderKind.CIRCULAR, size, "rung", i + j)] = 0
        values[ladder_edge(LadderKind.CIRCULAR, size, "x", i + j)] = x_i
        values[ladder_edge(LadderKind.CIRCULAR, size, "y", i + j)] = y_i

    k = base_flow.mode.k
    c = variant
    for block in range(m // 4):
        start = i + 4 * block
        chosen = None
        for t in (1, -1):
            trial = {
                ladder_edge(LadderKind.CIRCULAR, size, part, start + offset): values[
                    ladder_edge(LadderKind.CIRCULAR, size, part, start + offset)
                ]
                + delta
                for (part, offset), delta in _block_values(t, c).items()
            }
            if all(0 < abs(x) < k for x in trial.values()):
                chosen = trial
                break
        if chosen is None:
            raise TemplatePreconditionViolated(f"no block sign keeps block {block} below k={k}")
        values.update(chosen)

    flow = FlowAssignment(ladder_orientation(g), values, FlowMode.integer(k))
    return require_verified(g, flow, f"({m},{i})-extender")


# =============================================================================
# 6-Flows on Ladders
# =============================================================================


def _check_admissible(g: SignedGraph) -> None:
    admissible = is_flow_admissible(g, certify=False)
    if not admissible:
        raise NotFlowAdmissible(admissible.edge)


def _hamiltonian_by_squares(spec: LadderSpec) -> Optional[List[int]]:
    """C_x ∪ C_y ∪ {r_i, r_i+1} minus x_i x_i+1 and y_i y_i+1, for the first balanced i"""
    n = spec.n
    cycles = [ladder_edge(spec.kind, n, part, j) for part in ("x", "y") for j in range(n)]
    for i in range(n):
        dropped = {ladder_edge(spec.kind, n, "x", i), ladder_edge(spec.kind, n, "y", i)}
        circuit = [e for e in cycles if e not in dropped]
        circuit += [
            ladder_edge(spec.kind, n, "rung", i),
            ladder_edge(spec.kind, n, "rung", (i + 1) % n),
        ]
        sign = 1
        for e in circuit:
            sign *= spec.signs.get(e, 1)
        if sign > 0:
            return circuit
    return None


def _template_route(spec: LadderSpec) -> Tuple[str, Optional[int]]:
    """Template and extender length for a circular ladder with every square unbalanced"""
    n = spec.n
    cx = 1
    cy = 1
    for i in range(n):
        cx *= spec.sign("x", i)
        cy *= spec.sign("y", i)
    if cx > 0 and cy > 0:
        if n % 4 == 0:
            return "positive-cycles-n4", n - 4
        if n % 4 == 2 and n >= 6:
            return "positive-cycles-n6", n - 6
    if cx < 0 and cy < 0:
        if n == 2:
            return "negative-cycles-n2", None
        if n % 4 == 0:
            return "negative-cycles-n4", n - 4
        if n % 4 == 2 and n >= 6:
            return "negative-cycles-n6", n - 6
    raise PreconditionViolated(f"no template covers n={n} with cycle signs ({cx:+d}, {cy:+d})")


def _pull_back(g: SignedGraph, model: SignedGraph, flow: FlowAssignment) -> FlowAssignment:
    """Carry a flow on a switching-equivalent signature of g back to g"""
    product = g.with_signs({eid: e.sign * model.sign(eid) for eid, e in g.edges.items()})
    balanced, U = is_balanced(product)
    if not balanced:
        raise PreconditionViolated("template signature is not switching equivalent to the input")
    if switch_at(g, U).negative_edges() != model.negative_edges():  # type: ignore[arg-type]
        raise PreconditionViolated("switching did not reproduce the template signature")
    return switch_flow(model, flow, U)  # type: ignore[arg-type]


def six_nzf_circular(spec: LadderSpec) -> Tuple[FlowAssignment, ConstructionTrace]:
    """
    Nowhere-zero 6-flow of a flow-admissible signed circular ladder.

    A square with the right sign yields a balanced Hamiltonian circuit; when
    every square is unbalanced the ladder is switched onto a template flow,
    stretched by an extender to n rungs.
    """
    if spec.kind != LadderKind.CIRCULAR:
        raise InputError("Expected a circular ladder spec")
    g = gen_ladder(spec)
    _check_admissible(g)
    trace = ConstructionTrace()
    trace.record("ladder", spec.to_dict())

    if spec.n == 1:
        trace.case("long-barbell")
        for k in range(3, 7):
            report = exists_nzf(g, k)
            if report.witness is not None:
                trace.record("k", k)
                return require_verified(g, report.witness, "long barbell"), trace
        raise PreconditionViolated("long barbell search found no flow below 7")

    circuit = _hamiltonian_by_squares(spec)
    if circuit is not None:
        trace.case("balanced-hamiltonian")
        trace.record("H", circuit)
        flow, inner = six_nzf_balanced_hamiltonian(g, circuit)
        trace.record("construction", inner)
        return flow, trace

    name, length = _template_route(spec)
    trace.case(f"template-{name}")
    base_spec, base_flow = template_flow(name)
    template = ladder_template(name)
    flow, model = base_flow, gen_ladder(base_spec)
    if length:
        assert template.extender is not None
        extender = ExtenderSpec(base_spec, template.extender.position, length)
        trace.case("extender")
        trace.record("extender", {"position": extender.position, "length": length})
        flow = extend_flow(base_flow, extender, template.extender.variant)
        model = extend_ladder(extender)
    result = _pull_back(g, model, flow)
    return require_verified(g, result, f"circular ladder via {name}"), trace


def six_nzf_moebius(spec: LadderSpec) -> Tuple[FlowAssignment, ConstructionTrace]:
    """
    Nowhere-zero 6-flow of a flow-admissible signed Moebius ladder.

    The rim is balanced, or it is unbalanced and some square is too, and the
    rim rerouted through that square's rungs is balanced.
    """
    if spec.kind != LadderKind.MOEBIUS:
        raise InputError("Expected a Moebius ladder spec")
    g = gen_ladder(spec)
    _check_admissible(g)
    trace = ConstructionTrace()
    trace.record("ladder", spec.to_dict())
    n = spec.n

    if n == 1:
        found = find_balanced_hamiltonian(g)
        if found is None:
            raise PreconditionViolated("theta graph has no balanced digon")
        circuit = sorted(found.edges)
        trace.case("theta")
    else:
        rim = [ladder_edge(spec.kind, n, part, j) for part in ("x", "y") for j in range(n)]
        circuit = rim
        if sign_of(g, rim) > 0:
            trace.case("balanced-rim")
        else:
            j = next(j for j in range(n) if spec.square_sign(j) < 0)
            dropped = {ladder_edge(spec.kind, n, "x", j), ladder_edge(spec.kind, n, "y", j)}
            circuit = [e for e in rim if e not in dropped]
            circuit += [
                ladder_edge(spec.kind, n, "rung", j),
                ladder_edge(spec.kind, n, "rung", (j + 1) % n),
            ]
            trace.case("rerouted-rim")
            trace.record("square", j)
    trace.record("H", circuit)
    flow, inner = six_nzf_balanced_hamiltonian(g, circuit)
    trace.record("construction", inner)
    return flow, trace


def six_nzf_ladder(spec: LadderSpec) -> Tuple[FlowAssignment, ConstructionTrace]:
    if spec.kind == LadderKind.MOEBIUS:
        return six_nzf_moebius(spec)
    return six_nzf_circular(spec)
