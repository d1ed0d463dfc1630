"""
Certificates
Serialized witnesses and their producer-independent validation
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Mapping

from ..exceptions import FingerprintMismatch, SignedFlowError
from .flows import FlowAssignment, FlowKind, FlowMode, VerificationReport, verify_flow
from .sgraph import (
    SignedGraph,
    degrees_in,
    is_connected,
    sign_of,
    switch_at,
)

logger = logging.getLogger("signedflow.certificates")


class CertificateKind(str, Enum):
    FLOW = "flow"
    SWITCHING = "switching"
    HAMILTONIAN_CIRCUIT = "hamiltonian-circuit"
    EULERIAN_DECOMPOSITION = "eulerian-decomposition"
    EXHAUSTION = "exhaustion"
    SIGNED_CIRCUIT_COVER = "signed-circuit-cover"
    INADMISSIBILITY_EDGE = "inadmissibility-edge"


@dataclass(frozen=True)
class Certificate:
    kind: CertificateKind
    payload: Mapping[str, Any]
    producer: str
    graph_sha: str
    extra: Mapping[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        out = {
            "kind": self.kind.value,
            "producer": self.producer,
            "graph_sha": self.graph_sha,
            "payload": dict(self.payload),
        }
        if self.extra:
            out["extra"] = dict(self.extra)
        return out

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "Certificate":
        return cls(
            kind=CertificateKind(data["kind"]),
            payload=data["payload"],
            producer=data.get("producer", "unknown"),
            graph_sha=data["graph_sha"],
            extra=data.get("extra", {}),
        )


# =============================================================================
# Flow Certificate Format
# =============================================================================


def flow_payload(fa: FlowAssignment) -> Dict[str, Any]:
    return {
        "mode": fa.mode.kind.value,
        "k": fa.mode.k,
        "tau": {str(e): [t[0], t[1]] for e, t in fa.tau.items()},
        "f": {str(e): x for e, x in fa.values.items()},
    }


def flow_certificate_dict(g: SignedGraph, fa: FlowAssignment) -> Dict[str, Any]:
    """Standalone flow certificate file"""
    return {"graph_sha": g.fingerprint, **flow_payload(fa)}


def flow_from_payload(payload: Mapping[str, Any]) -> FlowAssignment:
    mode = FlowMode(FlowKind(payload["mode"]), int(payload["k"]))
    tau = {int(e): (int(t[0]), int(t[1])) for e, t in payload["tau"].items()}
    values = {int(e): int(x) for e, x in payload["f"].items()}
    return FlowAssignment(tau, values, mode)


def certify_flow(g: SignedGraph, fa: FlowAssignment, producer: str) -> Certificate:
    return Certificate(CertificateKind.FLOW, flow_payload(fa), producer, g.fingerprint)


# =============================================================================
# Validation
# =============================================================================


def validate_certificate(cert: Certificate, g: SignedGraph) -> VerificationReport:
    """
    Check a certificate against a graph using only the certificate's content.

    Raises FingerprintMismatch when the certificate names another graph.
    """
    if cert.graph_sha != g.fingerprint:
        raise FingerprintMismatch(cert.graph_sha, g.fingerprint)
    try:
        checker = _CHECKERS[cert.kind]
        return checker(cert.payload, g)
    except SignedFlowError as e:
        return VerificationReport.reject(f"invalid-payload: {e}")
    except (KeyError, TypeError, ValueError) as e:
        return VerificationReport.reject(f"malformed-payload: {e}")


def _check_flow(payload: Mapping[str, Any], g: SignedGraph) -> VerificationReport:
    return verify_flow(g, flow_from_payload(payload), require_nowhere_zero=True)


def _check_switching(payload: Mapping[str, Any], g: SignedGraph) -> VerificationReport:
    switched = switch_at(g, [int(v) for v in payload["U"]])
    negative = switched.negative_edges()
    if negative:
        return VerificationReport.reject("switched-edge-negative", edge=negative[0])
    return VerificationReport(True)


def _check_hamiltonian(payload: Mapping[str, Any], g: SignedGraph) -> VerificationReport:
    ids = [int(e) for e in payload["edges"]]
    deg = degrees_in(g, ids)
    if len(set(ids)) != len(ids) or len(ids) != len(g.vertices):
        return VerificationReport.reject("wrong-size")
    for v in g.vertices:
        if deg.get(v, 0) != 2:
            return VerificationReport.reject("degree", vertex=v)
    if not is_connected(g, ids):
        return VerificationReport.reject("disconnected")
    if payload.get("balanced") and sign_of(g, ids) < 0:
        return VerificationReport.reject("unbalanced")
    return VerificationReport(True)


def _check_decomposition(payload: Mapping[str, Any], g: SignedGraph) -> VerificationReport:
    from .flows import three_nzf_from_decomposition

    parts = [[int(e) for e in part] for part in payload["parts"]]
    flow = three_nzf_from_decomposition(g, parts)
    return verify_flow(g, flow)


def _check_exhaustion(payload: Mapping[str, Any], g: SignedGraph) -> VerificationReport:
    from .oracle import exists_nzf

    report = exists_nzf(g, int(payload["k"]), payload.get("mode", "int"))
    if report.exists:
        return VerificationReport.reject("flow-exists")
    return VerificationReport(True)


def _check_cover(payload: Mapping[str, Any], g: SignedGraph) -> VerificationReport:
    from .admissibility import classify_signed_circuit

    covered: set = set()
    for entry in payload["circuits"]:
        ids = [int(e) for e in entry["edges"]]
        kind = classify_signed_circuit(g, ids)
        if not kind.accepted:
            return VerificationReport.reject(f"not-a-signed-circuit: {kind.reason}")
        covered.update(ids)
    missing = sorted(set(g.edge_ids) - covered)
    if missing:
        return VerificationReport.reject("uncovered-edge", edge=missing[0])
    return VerificationReport(True)


def _check_inadmissible(payload: Mapping[str, Any], g: SignedGraph) -> VerificationReport:
    from .admissibility import edge_blocks_flows

    eid = int(payload["edge"])
    if edge_blocks_flows(g, eid):
        return VerificationReport(True)
    return VerificationReport.reject("edge-does-not-block", edge=eid)


_CHECKERS = {
    CertificateKind.FLOW: _check_flow,
    CertificateKind.SWITCHING: _check_switching,
    CertificateKind.HAMILTONIAN_CIRCUIT: _check_hamiltonian,
    CertificateKind.EULERIAN_DECOMPOSITION: _check_decomposition,
    CertificateKind.EXHAUSTION: _check_exhaustion,
    CertificateKind.SIGNED_CIRCUIT_COVER: _check_cover,
    CertificateKind.INADMISSIBILITY_EDGE: _check_inadmissible,
}
