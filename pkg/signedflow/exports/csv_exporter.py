"""
CSV/Excel Exporter
Export sweep reports in CSV and Excel formats
"""

import csv
import io
import logging
from typing import Any, Dict, List, Optional, Sequence

from openpyxl import Workbook
from openpyxl.styles import Alignment, Border, Font, PatternFill, Side
from openpyxl.utils import get_column_letter

from ..models.schemas import SweepRow

logger = logging.getLogger("signedflow.exports.csv")

SWEEP_COLUMNS = [
    "instance_id",
    "family",
    "negatives",
    "negative_parity",
    "admissible",
    "constructed_k",
    "oracle_phi",
    "agreement",
    "status",
    "detail",
]


def _cell(value: Any) -> Any:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, (list, dict)):
        return str(value)
    return value


class SweepExporter:
    """Export sweep rows to CSV and Excel"""

    def __init__(self):
        self.header_fill = PatternFill(start_color="1A1A2E", end_color="1A1A2E", fill_type="solid")
        self.header_font = Font(color="FFFFFF", bold=True, size=11)
        self.flag_fill = PatternFill(start_color="F4CCCC", end_color="F4CCCC", fill_type="solid")
        self.border = Border(
            left=Side(style="thin", color="E0E0DA"),
            right=Side(style="thin", color="E0E0DA"),
            top=Side(style="thin", color="E0E0DA"),
            bottom=Side(style="thin", color="E0E0DA"),
        )

    @staticmethod
    def _records(rows: Sequence[SweepRow]) -> List[Dict[str, Any]]:
        return [row.model_dump() for row in rows]

    def export_to_csv(self, rows: Sequence[SweepRow], columns: Optional[List[str]] = None) -> bytes:
        """
        Export rows to CSV.

        Args:
            rows: Sweep rows, already in report order
            columns: Optional list of columns to include (in order)

        Returns:
            CSV bytes, identical for identical rows
        """
        columns = columns or SWEEP_COLUMNS
        buffer = io.StringIO()
        writer = csv.DictWriter(
            buffer, fieldnames=columns, extrasaction="ignore", lineterminator="\n"
        )
        writer.writeheader()
        for record in self._records(rows):
            writer.writerow({col: _cell(record.get(col)) for col in columns})
        return buffer.getvalue().encode("utf-8")

    def export_to_excel(
        self,
        rows: Sequence[SweepRow],
        columns: Optional[List[str]] = None,
        sheet_name: str = "Sweep",
        title: Optional[str] = None,
    ) -> bytes:
        """
        Export rows to an Excel workbook with the same columns as the CSV.

        Rows whose status is not "ok", or whose oracle check disagrees, are
        highlighted.
        """
        columns = columns or SWEEP_COLUMNS
        wb = Workbook()
        ws = wb.active
        ws.title = sheet_name

        current_row = 1
        if title:
            ws.merge_cells(start_row=1, start_column=1, end_row=1, end_column=len(columns))
            title_cell = ws.cell(row=1, column=1, value=title)
            title_cell.font = Font(size=14, bold=True, color="1A1A2E")
            title_cell.alignment = Alignment(horizontal="center")
            current_row = 3

        header_row = current_row
        for col_idx, col_name in enumerate(columns, 1):
            header = col_name.replace("_", " ").title()
            cell = ws.cell(row=current_row, column=col_idx, value=header)
            cell.fill = self.header_fill
            cell.font = self.header_font
            cell.alignment = Alignment(horizontal="center", vertical="center")
            cell.border = self.border
        current_row += 1

        for record in self._records(rows):
            flagged = record.get("status") != "ok" or record.get("agreement") is False
            for col_idx, col_name in enumerate(columns, 1):
                cell = ws.cell(row=current_row, column=col_idx, value=_cell(record.get(col_name)))
                cell.border = self.border
                cell.alignment = Alignment(vertical="center")
                if flagged:
                    cell.fill = self.flag_fill
            current_row += 1

        for col_idx, col_name in enumerate(columns, 1):
            max_length = len(col_name)
            for row in range(header_row + 1, min(current_row, header_row + 100)):
                value = ws.cell(row=row, column=col_idx).value
                if value not in (None, ""):
                    max_length = max(max_length, len(str(value)))
            ws.column_dimensions[get_column_letter(col_idx)].width = min(max_length + 2, 50)

        ws.freeze_panes = ws.cell(row=header_row + 1, column=1)

        buffer = io.BytesIO()
        wb.save(buffer)
        buffer.seek(0)
        logger.debug(f"Exported {len(rows)} sweep rows to Excel")
        return buffer.getvalue()

    def export(
        self, rows: Sequence[SweepRow], format: str = "csv", title: Optional[str] = None
    ) -> bytes:
        """Export in 'csv' or 'xlsx'"""
        if format == "xlsx":
            return self.export_to_excel(rows, sheet_name="Sweep", title=title)
        return self.export_to_csv(rows)
