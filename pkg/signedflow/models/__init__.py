"""
SignedFlow Models
Pydantic schemas for the file formats
"""

from .schemas import (
    CayleySpecFile,
    CertificateFile,
    FlowCertificateFile,
    GraphFile,
    LadderSpecFile,
    SweepRow,
    TemplateFile,
    WitnessFile,
)

__all__ = [
    "CayleySpecFile",
    "CertificateFile",
    "FlowCertificateFile",
    "GraphFile",
    "LadderSpecFile",
    "SweepRow",
    "TemplateFile",
    "WitnessFile",
]
