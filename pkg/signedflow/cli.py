#!/usr/bin/env python3
"""
SignedFlow - Command Line
Generate signed graphs, construct and check flow certificates, run the oracle and sweeps

Usage:
    signedflow gen gn --n 3 --out g3.json
    signedflow construct6 --graph g3.json --cert-out g3.cert.json --trace-out g3.trace.json
    signedflow check --graph g3.json --cert g3.cert.json
    signedflow oracle --k 5 g3.json
    signedflow reduce --graph g.json --witness h1.json
    signedflow classify-cayley --spec z9.json
    signedflow sweep --family cl --start 2 --stop 5 --format csv --out cl.csv
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Tuple

from pydantic import ValidationError

from .config import Settings, get_settings, load_settings, use_settings, validate_settings
from .core.admissibility import is_flow_admissible
from .core.cayley import (
    CayleySpec,
    flow_number_odd_cayley,
    gen_cayley,
    signature_from_pairs,
    six_nzf_abelian_cayley,
)
from .core.certificates import (
    Certificate,
    CertificateKind,
    certify_flow,
    flow_certificate_dict,
    validate_certificate,
)
from .core.flows import FlowAssignment, achieved_k, require_verified
from .core.generators import gen_gn, gen_k4, gen_random_cubic, gen_z4z2
from .core.ladders import LadderKind, LadderSpec, gen_ladder, recognize_ladder, six_nzf_ladder
from .core.oracle import exists_nzf, flow_number
from .core.reduction import (
    check_even_eulerian,
    covering_pair_supereulerian,
    spanning_eulerian_subgraph,
    three_regularize,
    verify_reduction,
)
from .core.sgraph import SignedGraph
from .core.six_flow import (
    six_nzf_balanced_hamiltonian,
    six_nzf_kotzig,
    six_nzf_spanning_even_eulerian,
)
from .core.trace import ConstructionTrace
from .exceptions import (
    BudgetExceeded,
    InputError,
    NoStrategySucceeded,
    NotFlowAdmissible,
    ParseError,
    SignedFlowError,
)
from .exports import SweepExporter
from .models.schemas import (
    CayleySpecFile,
    CertificateFile,
    FlowCertificateFile,
    GraphFile,
    LadderSpecFile,
    WitnessFile,
)
from .services.sweep import FAMILIES, SweepRequest, run_sweep, summarize

logger = logging.getLogger("signedflow.cli")

Built = Tuple[FlowAssignment, ConstructionTrace]

STRATEGIES = ("auto", "even-eulerian", "bal-ham", "ladder", "cayley", "kotzig")
GEN_FAMILIES = ("gn", "fig2", "z4z2", "ladder", "cayley", "k4", "random-cubic")

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_INPUT = 2
EXIT_BUDGET = 3


# =============================================================================
# File I/O
# =============================================================================


def _read_json(path: str) -> Any:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise ParseError(path, "file not found") from None
    except json.JSONDecodeError as e:
        raise ParseError(path, str(e)) from e


def _parse(path: str, model: Any, data: Any = None) -> Any:
    try:
        return model.model_validate(_read_json(path) if data is None else data)
    except ValidationError as e:
        raise ParseError(path, str(e)) from e


def load_graph(path: str) -> SignedGraph:
    parsed: GraphFile = _parse(path, GraphFile)
    edges = [e.model_dump() for e in parsed.edges]
    return SignedGraph.from_dict({"vertices": parsed.vertex_count, "edges": edges})


def load_witness(path: Optional[str]) -> Optional[WitnessFile]:
    return _parse(path, WitnessFile) if path else None


def load_cayley_spec(path: str) -> CayleySpec:
    parsed: CayleySpecFile = _parse(path, CayleySpecFile)
    spec = CayleySpec(tuple(parsed.group), tuple(tuple(s) for s in parsed.connection))
    pairs = [(tuple(a), tuple(b)) for a, b in parsed.negative]
    return spec.with_signature(signature_from_pairs(spec, pairs))


def load_certificate(path: str) -> Certificate:
    """An enveloped certificate, or a bare flow certificate file"""
    data = _read_json(path)
    if isinstance(data, dict) and "kind" not in data:
        flow: FlowCertificateFile = _parse(path, FlowCertificateFile, data)
        payload = flow.model_dump(exclude={"graph_sha"})
        return Certificate(CertificateKind.FLOW, payload, "unknown", flow.graph_sha)
    parsed: CertificateFile = _parse(path, CertificateFile, data)
    try:
        return Certificate.from_dict(parsed.model_dump())
    except ValueError as e:
        raise ParseError(path, str(e)) from e


def load_ladder_spec(path: str) -> LadderSpec:
    parsed: LadderSpecFile = _parse(path, LadderSpecFile)
    kind = LadderKind(parsed.kind.value)
    return LadderSpec.from_parts(kind, parsed.n, parsed.rung, parsed.x, parsed.y)


def dump_json(data: Any, path: Optional[str] = None) -> None:
    """Deterministic JSON to a file, or to stdout"""
    text = json.dumps(data, indent=2, sort_keys=True) + "\n"
    if path:
        Path(path).write_text(text, encoding="utf-8")
        logger.info(f"Wrote {path}")
    else:
        sys.stdout.write(text)


def _int_list(text: Optional[str]) -> List[int]:
    if not text:
        return []
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise InputError(f"Expected comma-separated integers: {text}") from None


def _element_list(text: Optional[str]) -> Optional[List[Tuple[int, ...]]]:
    """'1,0;3,0;0,1' -> [(1, 0), (3, 0), (0, 1)]"""
    if not text:
        return None
    return [tuple(_int_list(part)) for part in text.split(";") if part.strip()]


# =============================================================================
# check
# =============================================================================


def cmd_check(args: argparse.Namespace) -> int:
    g = load_graph(args.graph)
    cert = load_certificate(args.cert)
    report = validate_certificate(cert, g)
    dump_json({"accepted": report.accepted, "report": report.to_dict()})
    if not report:
        logger.error(f"Certificate rejected: {report.reason}")
        return EXIT_INVALID
    return EXIT_OK


# =============================================================================
# construct6
# =============================================================================


def _strategy_ladder(g: SignedGraph, args: argparse.Namespace) -> Built:
    spec = recognize_ladder(g)
    if spec is None:
        raise InputError("graph is not a canonical circular or Moebius ladder")
    return six_nzf_ladder(spec)


def _strategy_cayley(g: SignedGraph, args: argparse.Namespace) -> Built:
    if not args.spec:
        raise InputError("the cayley strategy needs --spec")
    spec = load_cayley_spec(args.spec)
    if gen_cayley(spec).fingerprint != g.fingerprint:
        raise InputError("Cayley spec does not generate the given graph")
    return six_nzf_abelian_cayley(spec)


def _strategy_bal_ham(g: SignedGraph, args: argparse.Namespace) -> Built:
    witness = load_witness(args.witness)
    return six_nzf_balanced_hamiltonian(g, witness.edges if witness else None)


def _strategy_even_eulerian(g: SignedGraph, args: argparse.Namespace) -> Built:
    witness = load_witness(args.witness)
    h = frozenset(witness.edges) if witness else spanning_eulerian_subgraph(g)
    check_even_eulerian(g, h)
    trace = ConstructionTrace()
    trace.case("spanning-even-eulerian")
    trace.record("H", h)
    return six_nzf_spanning_even_eulerian(g, h), trace


def _strategy_kotzig(g: SignedGraph, args: argparse.Namespace) -> Built:
    witness = load_witness(args.witness)
    if witness is None or not witness.parts or len(witness.parts) != 3:
        raise InputError("the kotzig strategy needs a witness with three parts")
    trace = ConstructionTrace()
    trace.case("kotzig")
    trace.record("factors", witness.parts)
    return six_nzf_kotzig(g, *witness.parts), trace


def _strategy_oracle(g: SignedGraph, args: argparse.Namespace) -> Built:
    report = exists_nzf(g, 6)
    if report.witness is None:
        raise SignedFlowError("oracle found no nowhere-zero 6-flow")
    trace = ConstructionTrace()
    trace.case("oracle")
    trace.record("nodes", report.nodes)
    return report.witness, trace


Strategy = Callable[[SignedGraph, argparse.Namespace], Built]

_STRATEGIES: Dict[str, Strategy] = {
    "ladder": _strategy_ladder,
    "cayley": _strategy_cayley,
    "bal-ham": _strategy_bal_ham,
    "even-eulerian": _strategy_even_eulerian,
    "kotzig": _strategy_kotzig,
}


def construct_auto(
    g: SignedGraph, args: argparse.Namespace
) -> Tuple[str, FlowAssignment, ConstructionTrace]:
    """Ladder recognition, Cayley spec, balanced Hamiltonian, even Eulerian, then oracle search"""
    admissible = is_flow_admissible(g, certify=False)
    if not admissible:
        raise NoStrategySucceeded({"admissibility": str(NotFlowAdmissible(admissible.edge))})
    order = ["ladder"] + (["cayley"] if args.spec else []) + ["bal-ham", "even-eulerian", "oracle"]
    reasons: Dict[str, str] = {}
    for name in order:
        strategy = _strategy_oracle if name == "oracle" else _STRATEGIES[name]
        try:
            flow, trace = strategy(g, args)
            return name, flow, trace
        except BudgetExceeded as e:
            logger.warning(f"Strategy {name} hit its budget: {e}")
            reasons[name] = str(e)
        except SignedFlowError as e:
            logger.info(f"Strategy {name} did not apply: {e}")
            reasons[name] = str(e)
    raise NoStrategySucceeded(reasons)


def cmd_construct6(args: argparse.Namespace) -> int:
    g = load_graph(args.graph)
    if args.strategy == "auto":
        name, flow, trace = construct_auto(g, args)
    else:
        name = args.strategy
        flow, trace = _STRATEGIES[name](g, args)
    require_verified(g, flow, f"strategy {name}")
    logger.info(f"Strategy {name} produced a nowhere-zero {achieved_k(flow)}-flow")
    cert = certify_flow(g, flow, producer=f"signedflow/{name}")
    dump_json(cert.to_dict(), args.cert_out)
    if args.flow_out:
        dump_json(flow_certificate_dict(g, flow), args.flow_out)
    if args.trace_out:
        dump_json({"strategy": name, **trace.to_dict()}, args.trace_out)
    return EXIT_OK


# =============================================================================
# reduce / oracle / classify-cayley
# =============================================================================


def cmd_reduce(args: argparse.Namespace) -> int:
    g = load_graph(args.graph)
    witness = load_witness(args.witness)
    pair = covering_pair_supereulerian(g, witness.edges if witness else None)
    result = three_regularize(g, pair)
    report = verify_reduction(g, result)
    dump_json({"reduction": result.to_dict(), "verification": report.to_dict()}, args.out)
    return EXIT_OK if report else EXIT_INVALID


def cmd_oracle(args: argparse.Namespace) -> int:
    g = load_graph(args.graph_file or args.graph)
    if args.k is None:
        dump_json(flow_number(g, args.kmax).to_dict())
    else:
        dump_json(exists_nzf(g, args.k, args.mode).to_dict())
    return EXIT_OK


def cmd_classify_cayley(args: argparse.Namespace) -> int:
    spec = load_cayley_spec(args.spec)
    phi, cert = flow_number_odd_cayley(spec)
    dump_json({"phi": phi, "certificate": cert.to_dict()}, args.out)
    if args.cert_out:
        dump_json(cert.to_dict(), args.cert_out)
    return EXIT_OK


# =============================================================================
# gen
# =============================================================================


def cmd_gen(args: argparse.Namespace) -> int:
    negatives = _int_list(args.negatives)
    if args.family == "gn":
        g = gen_gn(args.n)
    elif args.family in ("fig2", "z4z2"):
        g = gen_z4z2()
    elif args.family == "k4":
        g = gen_k4(negatives)
    elif args.family == "random-cubic":
        g = gen_random_cubic(args.n, args.negative_count, get_settings().run.seed)
    elif args.family == "ladder":
        if args.spec:
            spec = load_ladder_spec(args.spec)
        else:
            spec = LadderSpec(LadderKind(args.kind), args.n, {e: -1 for e in negatives})
        g = gen_ladder(spec)
    else:
        if args.spec:
            cayley = load_cayley_spec(args.spec)
        else:
            group = tuple(_int_list(args.group))
            connection = _element_list(args.connection)
            if not group or connection is None:
                raise InputError("gen cayley needs --spec, or --group and --connection")
            cayley = CayleySpec(group, tuple(connection), {e: -1 for e in negatives})
        g = gen_cayley(cayley)
    dump_json(g.to_dict(), args.out)
    return EXIT_OK


# =============================================================================
# sweep
# =============================================================================


def cmd_sweep(args: argparse.Namespace) -> int:
    request = SweepRequest(
        family=args.family,
        start=args.start,
        stop=args.stop,
        group=tuple(_int_list(args.group)) or None,
        connection=_element_list(args.connection),
        sample=args.sample,
        oracle=not args.no_oracle,
        kmax=args.kmax,
        threads=args.threads,
        seed=args.seed,
    )
    report = run_sweep(request)
    data = SweepExporter().export(report.rows, args.format, title=f"Sweep {args.family}")
    if args.out:
        Path(args.out).write_bytes(data)
        logger.info(f"Wrote {len(report.rows)} rows to {args.out}")
    elif args.format == "csv":
        sys.stdout.write(data.decode("utf-8"))
    else:
        raise InputError("Excel output needs --out")
    logger.info(f"Sweep summary: {summarize(report.rows)}")
    return EXIT_INVALID if report.disagreements else EXIT_OK


# =============================================================================
# Entry point
# =============================================================================


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="signedflow", description="Nowhere-zero flows on signed graphs"
    )
    parser.add_argument("--log-level", default=None, help="debug, info, warning, error or critical")
    parser.add_argument(
        "--kmax", type=int, default=None, help="Largest k tried by flow-number searches"
    )
    parser.add_argument("--budget-nodes", type=int, default=None, help="Node cap for flow searches")
    parser.add_argument("--threads", type=int, default=None, help="Worker threads for sweeps")
    parser.add_argument("--seed", type=int, default=None, help="Seed for sampled sweeps")
    sub = parser.add_subparsers(dest="command", required=True)

    check = sub.add_parser("check", help="Validate a certificate against a graph")
    check.add_argument("--graph", required=True)
    check.add_argument("--cert", required=True)
    check.set_defaults(handler=cmd_check)

    construct = sub.add_parser("construct6", help="Construct a nowhere-zero 6-flow certificate")
    construct.add_argument("--graph", required=True)
    construct.add_argument("--strategy", choices=STRATEGIES, default="auto")
    construct.add_argument(
        "--witness", help="Witness JSON: {\"edges\": [...]} or {\"parts\": [...]}"
    )
    construct.add_argument("--spec", help="Cayley spec JSON for the cayley strategy")
    construct.add_argument("--cert-out")
    construct.add_argument("--flow-out", help="Bare flow certificate file")
    construct.add_argument("--trace-out")
    construct.set_defaults(handler=cmd_construct6)

    reduce = sub.add_parser("reduce", help="Reduce a supereulerian graph to a cubic one")
    reduce.add_argument("--graph", required=True)
    reduce.add_argument("--witness", help="Spanning Eulerian subgraph H1")
    reduce.add_argument("--out")
    reduce.set_defaults(handler=cmd_reduce)

    oracle = sub.add_parser("oracle", help="Exhaustive flow search")
    oracle.add_argument("graph_file", nargs="?")
    oracle.add_argument("--graph")
    oracle.add_argument(
        "--k", type=int, default=None, help="Decide one k; omit for the flow number"
    )
    oracle.add_argument("--mode", choices=("int", "mod", "integer", "modular"), default="int")
    oracle.set_defaults(handler=cmd_oracle)

    gen = sub.add_parser("gen", help="Emit a graph file")
    gen.add_argument("family", choices=GEN_FAMILIES)
    gen.add_argument("--n", type=int, default=3)
    gen.add_argument(
        "--kind", choices=[k.value for k in LadderKind], default=LadderKind.CIRCULAR.value
    )
    gen.add_argument("--negatives", help="Comma-separated negative edge ids")
    gen.add_argument("--negative-count", type=int, default=0, help="Negative edges of random-cubic")
    gen.add_argument("--group", help="Cyclic orders, e.g. 4,2")
    gen.add_argument("--connection", help="Elements separated by ';', e.g. 1,0;3,0;0,1")
    gen.add_argument("--spec", help="Ladder or Cayley spec JSON")
    gen.add_argument("--out")
    gen.set_defaults(handler=cmd_gen)

    classify = sub.add_parser(
        "classify-cayley", help="Flow number of an odd-order abelian Cayley graph"
    )
    classify.add_argument("--spec", required=True)
    classify.add_argument("--out")
    classify.add_argument("--cert-out")
    classify.set_defaults(handler=cmd_classify_cayley)

    sweep = sub.add_parser("sweep", help="Run constructions and the oracle over a family")
    sweep.add_argument("--family", choices=FAMILIES, required=True)
    sweep.add_argument("--start", type=int, required=True)
    sweep.add_argument("--stop", type=int, required=True)
    sweep.add_argument("--group")
    sweep.add_argument("--connection")
    sweep.add_argument(
        "--sample", type=int, default=None, help="Signature classes sampled per graph"
    )
    sweep.add_argument("--no-oracle", action="store_true")
    sweep.add_argument("--format", choices=("csv", "xlsx"), default="csv")
    sweep.add_argument("--out")
    sweep.set_defaults(handler=cmd_sweep)
    return parser


def _settings_for(args: argparse.Namespace) -> Settings:
    """Environment settings with the global command line flags applied on a copy"""
    search = {"kmax": args.kmax, "budget_nodes": args.budget_nodes}
    run = {"threads": args.threads, "seed": args.seed, "log_level": args.log_level}
    return load_settings().with_overrides(
        search={k: v for k, v in search.items() if v is not None},
        run={k: v for k, v in run.items() if v is not None},
    )


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        settings = _settings_for(args)
    except ValidationError as e:
        sys.stderr.write(f"Invalid configuration: {e}\n")
        return EXIT_INPUT
    with use_settings(settings):
        return _run(args, settings)


def _run(args: argparse.Namespace, settings: Settings) -> int:
    logging.basicConfig(
        level=getattr(logging, settings.run.log_level.upper(), logging.INFO),
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        stream=sys.stderr,
    )
    for issue in validate_settings():
        if issue.startswith("CRITICAL"):
            logger.error(issue)
            return EXIT_INPUT
        logger.warning(issue)
    settings.log_config()

    try:
        return args.handler(args)
    except BudgetExceeded as e:
        logger.error(f"Budget exceeded: {e}")
        return EXIT_BUDGET
    except InputError as e:
        logger.error(str(e))
        return EXIT_INPUT
    except SignedFlowError as e:
        logger.error(str(e))
        return e.exit_code
    except Exception:
        logger.exception("Unexpected error")
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
