"""
SignedFlow Export Module
CSV and Excel export for sweep reports
"""

from .csv_exporter import SWEEP_COLUMNS, SweepExporter

__all__ = [
    "SWEEP_COLUMNS",
    "SweepExporter",
]
