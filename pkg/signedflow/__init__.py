"""
SignedFlow
Nowhere-zero flows on signed graphs: constructions, certificates and an exact oracle
"""

__version__ = "1.0.0"

from .core.flows import FlowAssignment, FlowMode, verify_flow
from .core.sgraph import SignedGraph, build_graph
from .exceptions import SignedFlowError

__all__ = [
    "FlowAssignment",
    "FlowMode",
    "SignedFlowError",
    "SignedGraph",
    "build_graph",
    "verify_flow",
]
