"""
SignedFlow Services Module
Sweep runner over graph families
"""

from .sweep import SweepReport, SweepRequest, run_sweep

__all__ = ["SweepReport", "SweepRequest", "run_sweep"]
