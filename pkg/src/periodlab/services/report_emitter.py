"""Report emitter service.

Serializes any report record (anything with ``to_dict`` and ``to_table``)
to JSON, CSV, Markdown or an Excel workbook. The first three are
byte-for-byte deterministic.
"""

import json
import logging
from io import BytesIO
from typing import Any, List, Protocol, Tuple

import openpyxl
import pandas as pd
from openpyxl.styles import Alignment, Border, Font, PatternFill, Side
from openpyxl.utils import get_column_letter

from periodlab.config import REPORT_FORMATS
from periodlab.domain.exceptions import UnsupportedFormat

logger = logging.getLogger(__name__)


class Report(Protocol):
    def to_dict(self) -> Any: ...

    def to_table(self) -> Tuple[List[str], List[List[Any]]]: ...


def render_json(data: Report) -> str:
    return json.dumps(data.to_dict(), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def render_csv(headers: List[str], rows: List[List[Any]]) -> str:
    """Render a table as CSV with a header row."""
    frame = pd.DataFrame(rows, columns=headers)
    return frame.to_csv(index=False, lineterminator="\n")


def _cell(value: Any) -> str:
    return "" if value is None else str(value).replace("|", "\\|")


def render_markdown(headers: List[str], rows: List[List[Any]]) -> str:
    """Render a table as a GitHub-flavoured Markdown table, columns in order."""
    lines = [
        "| " + " | ".join(_cell(h) for h in headers) + " |",
        "| " + " | ".join("---" for _ in headers) + " |",
    ]
    for row in rows:
        lines.append("| " + " | ".join(_cell(v) for v in row) + " |")
    return "\n".join(lines) + "\n"


def render_xlsx(headers: List[str], rows: List[List[Any]], title: str = "report") -> bytes:
    """Render a table as a styled single-sheet workbook."""
    wb = openpyxl.Workbook()
    ws = wb.active
    ws.title = title[:31]

    header_font = Font(bold=True, color="FFFFFF", size=12)
    header_fill = PatternFill(start_color="4472C4", end_color="4472C4", fill_type="solid")
    header_alignment = Alignment(horizontal="center", vertical="center")
    thin = Side(style="thin")
    border = Border(left=thin, right=thin, top=thin, bottom=thin)

    for col, header in enumerate(headers, 1):
        cell = ws.cell(row=1, column=col, value=str(header))
        cell.font = header_font
        cell.fill = header_fill
        cell.alignment = header_alignment
        cell.border = border

    stripe = PatternFill(start_color="F2F2F2", end_color="F2F2F2", fill_type="solid")
    for row_idx, row_data in enumerate(rows, 2):
        for col_idx, value in enumerate(row_data, 1):
            # ints stay numeric only while Excel can hold them exactly
            keep = isinstance(value, (int, float)) and not isinstance(value, bool) and abs(value) < 2**53
            cell = ws.cell(row=row_idx, column=col_idx, value=value if keep else _cell(value))
            cell.border = border
            if row_idx % 2 == 0:
                cell.fill = stripe

    for col_idx, column in enumerate(ws.columns, 1):
        width = max((len(str(c.value)) for c in column if c.value is not None), default=0)
        ws.column_dimensions[get_column_letter(col_idx)].width = min(max(width + 2, 10), 50)
    ws.freeze_panes = "A2"

    buffer = BytesIO()
    wb.save(buffer)
    return buffer.getvalue()


def emit_report(data: Report, fmt: str, title: str = "report") -> bytes:
    """Serialize a report.

    Args:
        data: Report record
        fmt: One of json, csv, markdown, xlsx
        title: Sheet title for xlsx

    Returns:
        Encoded report bytes (UTF-8 for the text formats)

    Raises:
        UnsupportedFormat: If fmt is unknown
    """
    if fmt == "json":
        text = render_json(data)
    elif fmt == "csv":
        text = render_csv(*data.to_table())
    elif fmt == "markdown":
        text = render_markdown(*data.to_table())
    elif fmt == "xlsx":
        return render_xlsx(*data.to_table(), title=title)
    else:
        raise UnsupportedFormat(f"unknown report format {fmt!r}; expected one of {REPORT_FORMATS}")
    logger.debug("rendered %s report (%d chars)", fmt, len(text))
    return text.encode("utf-8")
