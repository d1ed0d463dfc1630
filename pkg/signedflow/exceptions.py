"""
SignedFlow Exceptions
Custom exception classes for graph edits, flow arithmetic and constructions
"""

from typing import Any, Dict, List, Optional


class SignedFlowError(Exception):
    """Base exception for all signedflow errors"""

    exit_code = 1

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        self.message = message
        self.details = details or {}
        super().__init__(self.message)

    def __str__(self) -> str:
        if self.details:
            extra = ", ".join(f"{k}={v}" for k, v in sorted(self.details.items()))
            return f"{self.message} ({extra})"
        return self.message


class InputError(SignedFlowError):
    """Raised when an input file or argument cannot be used"""

    exit_code = 2


class BudgetExceeded(SignedFlowError):
    """Raised when a search expands more nodes than its budget allows"""

    exit_code = 3

    def __init__(self, message: str = "Search budget exceeded", nodes: int = 0, budget: int = 0):
        self.nodes = nodes
        self.budget = budget
        super().__init__(message, {"nodes": nodes, "budget": budget})


# =============================================================================
# Graph Errors
# =============================================================================


class GraphError(SignedFlowError):
    """Raised when a structural graph edit is invalid"""


class LoopRejected(GraphError):
    """Raised when an edge would join a vertex to itself"""

    def __init__(self, vertex: int):
        self.vertex = vertex
        super().__init__("Loops are not allowed", {"vertex": vertex})


class BadEndpoint(GraphError):
    """Raised when an edge endpoint is outside the vertex range"""

    def __init__(self, edge: int, vertex: int):
        self.edge = edge
        self.vertex = vertex
        super().__init__("Edge endpoint out of range", {"edge": edge, "vertex": vertex})


class UnknownVertex(GraphError):
    """Raised when a vertex id is not part of the graph"""

    def __init__(self, vertex: int):
        self.vertex = vertex
        super().__init__("Unknown vertex", {"vertex": vertex})


class UnknownEdge(GraphError):
    """Raised when an edge id is not part of the graph"""

    def __init__(self, edge: int):
        self.edge = edge
        super().__init__("Unknown edge", {"edge": edge})


class NotIncident(GraphError):
    """Raised when an edge is not incident with the given vertex"""

    def __init__(self, edge: int, vertex: int):
        self.edge = edge
        self.vertex = vertex
        super().__init__("Edge is not incident with vertex", {"edge": edge, "vertex": vertex})


class NegativeEdgeInContractionSet(GraphError):
    """Raised when contraction is asked to merge across a negative edge"""

    def __init__(self, edge: int):
        self.edge = edge
        super().__init__("Contraction set contains a negative edge", {"edge": edge})


class MixedParents(GraphError):
    """Raised when subgraph references from different graphs are combined"""

    def __init__(self, parents: List[str]):
        self.parents = parents
        super().__init__("Subgraphs belong to different graphs", {"parents": len(set(parents))})


class NotEulerian(GraphError):
    """Raised when an Euler tour is requested on a non-Eulerian subgraph"""

    def __init__(self, message: str = "Subgraph is not connected and even"):
        super().__init__(message)


# =============================================================================
# Flow Errors
# =============================================================================


class FlowError(SignedFlowError):
    """Raised when flow arithmetic receives incompatible inputs"""


class MissingValue(FlowError):
    """Raised when a flow has no value or orientation for an edge"""

    def __init__(self, edge: int):
        self.edge = edge
        super().__init__("Flow has no value for edge", {"edge": edge})


class ModeMismatch(FlowError):
    """Raised when integer and modular flows are combined"""

    def __init__(self, left: str, right: str):
        super().__init__("Flow modes differ", {"left": left, "right": right})


class GraphMismatch(FlowError):
    """Raised when two flows do not cover the same edges"""

    def __init__(self, message: str = "Flows are defined on different edge sets"):
        super().__init__(message)


class NotEven(FlowError):
    """Raised when a subgraph has a vertex of odd degree"""

    def __init__(self, vertex: int):
        self.vertex = vertex
        super().__init__("Subgraph has a vertex of odd degree", {"vertex": vertex})


class NegativeEdgePresent(FlowError):
    """Raised when an all-positive subgraph was required"""

    def __init__(self, edge: int):
        self.edge = edge
        super().__init__("Subgraph contains a negative edge", {"edge": edge})


class Disconnected(FlowError):
    """Raised when a connected graph was required"""

    def __init__(self, message: str = "Graph is not connected"):
        super().__init__(message)


class OddNegativeSupport(FlowError):
    """Raised when a support set carries an odd number of negative edges"""

    def __init__(self, count: int):
        self.count = count
        super().__init__("Support has an odd number of negative edges", {"negatives": count})


class SearchExhausted(FlowError):
    """Raised when a search that is guaranteed to succeed finds nothing"""

    def __init__(self, message: str = "Search space exhausted without a solution"):
        super().__init__(message)


# =============================================================================
# Admissibility and Reduction Errors
# =============================================================================


class AdmissibilityError(SignedFlowError):
    """Raised when a graph fails a flow-admissibility requirement"""


class NotFlowAdmissible(AdmissibilityError):
    """Raised when a construction receives a graph with no nowhere-zero flow"""

    def __init__(self, edge: Optional[int] = None):
        self.edge = edge
        details = {"edge": edge} if edge is not None else None
        super().__init__("Graph is not flow-admissible", details)


class ReductionError(SignedFlowError):
    """Raised by the cubic reduction pipeline"""


class NotSupereulerian(ReductionError):
    """Raised when no spanning Eulerian subgraph exists"""

    def __init__(self, message: str = "Graph has no spanning Eulerian subgraph"):
        super().__init__(message)


class InvalidPair(ReductionError):
    """Raised when a covering pair does not fit its graph"""

    def __init__(self, reason: str):
        self.reason = reason
        super().__init__("Covering pair is invalid", {"reason": reason})


class NotEvenEulerian(ReductionError):
    """Raised when a subgraph is not spanning, connected, even with evenly many negatives"""

    def __init__(self, reason: str):
        self.reason = reason
        super().__init__("Subgraph is not a spanning even Eulerian subgraph", {"reason": reason})


# =============================================================================
# Construction Errors
# =============================================================================


class ConstructionError(SignedFlowError):
    """Raised when a flow construction cannot proceed"""


class NotBalancedHamiltonian(ConstructionError):
    """Raised when a witness is not a balanced Hamiltonian circuit"""

    def __init__(self, reason: str):
        self.reason = reason
        super().__init__("Witness is not a balanced Hamiltonian circuit", {"reason": reason})


class OddNegativeCount(ConstructionError):
    """Raised when the even-negatives case receives an odd count"""

    def __init__(self, count: int):
        self.count = count
        super().__init__("Graph has an odd number of negative edges", {"negatives": count})


class EvenNegativeCount(ConstructionError):
    """Raised when an odd number of negative edges was required"""

    def __init__(self, count: int):
        self.count = count
        super().__init__("Graph has an even number of negative edges", {"negatives": count})


class NotIntersecting(ConstructionError):
    """Raised when two chords do not cross along the Hamiltonian circuit"""

    def __init__(self, e1: int, e2: int):
        super().__init__("Chords do not intersect along the circuit", {"e1": e1, "e2": e2})


class PreconditionViolated(ConstructionError):
    """Raised when a structural clause of a construction does not hold"""

    def __init__(self, clause: str):
        self.clause = clause
        super().__init__("Construction precondition violated", {"clause": clause})


class NotKotzig(ConstructionError):
    """Raised when three matchings do not pairwise form Hamiltonian circuits"""

    def __init__(self, reason: str):
        self.reason = reason
        super().__init__("Matchings do not form a Kotzig decomposition", {"reason": reason})


class BasePairNotPositive(ConstructionError):
    """Raised when an extender position sits on a negative cycle edge"""

    def __init__(self, position: int):
        self.position = position
        super().__init__(
            "Extender position must carry positive cycle edges", {"position": position}
        )


class TemplatePreconditionViolated(ConstructionError):
    """Raised when a flow or chord layout does not fit a template"""

    def __init__(self, reason: str):
        self.reason = reason
        super().__init__("Flow does not fit the template", {"reason": reason})


class IdentityInS(ConstructionError):
    """Raised when a connection set contains the group identity"""

    def __init__(self):
        super().__init__("Connection set contains the identity")


class NotInverseClosed(ConstructionError):
    """Raised when a connection set is not closed under inverses"""

    def __init__(self, element: Any):
        self.element = element
        super().__init__("Connection set is not inverse-closed", {"element": element})


class EvenOrder(ConstructionError):
    """Raised when an odd-order group was required"""

    def __init__(self, order: int):
        self.order = order
        super().__init__("Group order must be odd", {"order": order})


class NotDecomposition(ConstructionError):
    """Raised when parts do not partition the graph as required"""

    def __init__(self, reason: str):
        self.reason = reason
        super().__init__("Parts do not form a valid decomposition", {"reason": reason})


class NotCubic(ConstructionError):
    """Raised when a 3-regular graph was required"""

    def __init__(self, vertex: int):
        self.vertex = vertex
        super().__init__("Graph is not 3-regular", {"vertex": vertex})


class NoStrategySucceeded(ConstructionError):
    """Raised when every construction strategy failed"""

    def __init__(self, reasons: Dict[str, str]):
        self.reasons = reasons
        super().__init__("No construction strategy succeeded", dict(reasons))


# =============================================================================
# CLI Errors
# =============================================================================


class ParseError(InputError):
    """Raised when an input file does not parse"""

    def __init__(self, path: str, reason: str):
        self.path = path
        self.reason = reason
        super().__init__(f"Cannot parse {path}", {"reason": reason})


class FingerprintMismatch(InputError):
    """Raised when a certificate was issued for a different graph"""

    def __init__(self, expected: str, found: str):
        self.expected = expected
        self.found = found
        super().__init__(
            "Certificate belongs to a different graph",
            {"expected": expected[:12], "found": found[:12]},
        )
