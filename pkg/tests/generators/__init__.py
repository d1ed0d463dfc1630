"""
SignedFlow Test Data Generators
Seeded random instances with known witnesses
"""

from .data_generator import (
    GeneratedInstance,
    InstanceKind,
    SignedGraphGenerator,
    generate_batch,
)

__all__ = [
    "SignedGraphGenerator",
    "GeneratedInstance",
    "InstanceKind",
    "generate_batch",
]
