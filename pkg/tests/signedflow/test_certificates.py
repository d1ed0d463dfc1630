"""
Certificate Tests
Every certificate kind checked against its graph, plus tampered and foreign certificates
"""

import pytest

from signedflow.core.certificates import (
    Certificate,
    CertificateKind,
    certify_flow,
    flow_certificate_dict,
    flow_from_payload,
    validate_certificate,
)
from signedflow.core.generators import gn_hamiltonian
from signedflow.core.oracle import exists_nzf
from signedflow.core.sgraph import build_graph
from signedflow.exceptions import FingerprintMismatch
from tests.conftest import TestDataFactory

pytestmark = pytest.mark.unit


def _cert(kind, g, payload):
    return Certificate(kind, payload, "tests", g.fingerprint)


@pytest.fixture
def g3_certificate(g3):
    return certify_flow(g3, exists_nzf(g3, 6).witness, producer="tests")


class TestFlowCertificates:
    """Tests for flow certificates"""

    def test_accepted(self, g3, g3_certificate):
        report = validate_certificate(g3_certificate, g3)
        assert report.accepted
        assert g3_certificate.payload["mode"] == "int"
        assert g3_certificate.payload["k"] == 6

    def test_survives_serialization(self, g3, g3_certificate):
        again = Certificate.from_dict(g3_certificate.to_dict())
        assert again == g3_certificate
        assert validate_certificate(again, g3)

    def test_standalone_file(self, g3, g3_certificate):
        data = flow_certificate_dict(g3, flow_from_payload(g3_certificate.payload))
        assert data["graph_sha"] == g3.fingerprint
        assert set(data) == {"graph_sha", "mode", "k", "tau", "f"}

    def test_zero_value_rejected(self, g3, g3_certificate):
        payload = dict(g3_certificate.payload)
        payload["f"] = {**payload["f"], "0": 0}
        report = validate_certificate(_cert(CertificateKind.FLOW, g3, payload), g3)
        assert report.reason == "zero-value"
        assert report.edge == 0

    def test_malformed_payload(self, g3):
        report = validate_certificate(_cert(CertificateKind.FLOW, g3, {"mode": "int"}), g3)
        assert not report
        assert report.reason.startswith("malformed-payload")

    def test_foreign_graph_rejected(self, g3, k4, g3_certificate):
        """A certificate names its graph by fingerprint"""
        with pytest.raises(FingerprintMismatch) as excinfo:
            validate_certificate(g3_certificate, k4)
        assert excinfo.value.exit_code == 2


class TestStructuralCertificates:
    """Tests for switching, Hamiltonian and decomposition certificates"""

    def test_switching(self):
        g = TestDataFactory.balanced_triangle()
        assert validate_certificate(_cert(CertificateKind.SWITCHING, g, {"U": [2]}), g)
        report = validate_certificate(_cert(CertificateKind.SWITCHING, g, {"U": [1]}), g)
        assert report.reason == "switched-edge-negative"
        assert report.edge == 0

    def test_hamiltonian_circuit(self, g3, k4):
        payload = {"edges": gn_hamiltonian(3), "balanced": True}
        assert validate_certificate(_cert(CertificateKind.HAMILTONIAN_CIRCUIT, g3, payload), g3)
        short = _cert(CertificateKind.HAMILTONIAN_CIRCUIT, k4, {"edges": [0, 1, 3]})
        assert validate_certificate(short, k4).reason == "wrong-size"

    def test_unbalanced_hamiltonian_circuit(self):
        k4 = TestDataFactory.k4(negative=(0,))
        payload = {"edges": [0, 3, 5, 2]}
        assert validate_certificate(_cert(CertificateKind.HAMILTONIAN_CIRCUIT, k4, payload), k4)
        payload["balanced"] = True
        report = validate_certificate(_cert(CertificateKind.HAMILTONIAN_CIRCUIT, k4, payload), k4)
        assert report.reason == "unbalanced"

    def test_eulerian_decomposition(self):
        g = build_graph(4, [(0, 1, 1), (0, 1, -1), (0, 2, 1), (0, 2, -1), (0, 3, 1), (0, 3, -1)])
        payload = {"parts": [[0, 1], [2, 3], [4, 5]]}
        assert validate_certificate(_cert(CertificateKind.EULERIAN_DECOMPOSITION, g, payload), g)
        payload = {"parts": [[0, 1], [2, 3]]}
        report = validate_certificate(_cert(CertificateKind.EULERIAN_DECOMPOSITION, g, payload), g)
        assert report.reason.startswith("invalid-payload")


class TestNegativeCertificates:
    """Tests for exhaustion, cover and inadmissibility certificates"""

    def test_exhaustion(self, g3):
        assert validate_certificate(_cert(CertificateKind.EXHAUSTION, g3, {"k": 5}), g3)
        report = validate_certificate(_cert(CertificateKind.EXHAUSTION, g3, {"k": 6}), g3)
        assert report.reason == "flow-exists"

    def test_signed_circuit_cover(self):
        g = TestDataFactory.short_barbell()
        payload = {"circuits": [{"edges": [0, 1, 2, 3]}]}
        assert validate_certificate(_cert(CertificateKind.SIGNED_CIRCUIT_COVER, g, payload), g)

    def test_cover_with_unbalanced_circuit(self, long_barbell):
        payload = {"circuits": [{"edges": [0, 1]}]}
        cert = _cert(CertificateKind.SIGNED_CIRCUIT_COVER, long_barbell, payload)
        report = validate_certificate(cert, long_barbell)
        assert report.reason == "not-a-signed-circuit: unbalanced circuit"

    def test_cover_missing_an_edge(self):
        g = TestDataFactory.figure_eight()
        payload = {"circuits": [{"edges": [0, 1, 2]}]}
        report = validate_certificate(_cert(CertificateKind.SIGNED_CIRCUIT_COVER, g, payload), g)
        assert report.reason == "uncovered-edge"
        assert report.edge == 3

    def test_inadmissibility_edge(self, unbalanced_digon, k4):
        cert = _cert(CertificateKind.INADMISSIBILITY_EDGE, unbalanced_digon, {"edge": 0})
        assert validate_certificate(cert, unbalanced_digon)
        cert = _cert(CertificateKind.INADMISSIBILITY_EDGE, k4, {"edge": 0})
        report = validate_certificate(cert, k4)
        assert report.reason == "edge-does-not-block"
