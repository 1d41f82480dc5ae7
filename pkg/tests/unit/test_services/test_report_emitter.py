import json
import sys
from io import BytesIO
from pathlib import Path

import openpyxl
import pytest

# Ensure 'src' is importable
sys.path.insert(0, str(Path(__file__).resolve().parents[3] / "src"))

from periodlab.domain.census import FiberCensus  # noqa: E402
from periodlab.domain.exceptions import UnsupportedFormat  # noqa: E402
from periodlab.services.power_map_lab import unboundedness_report  # noqa: E402
from periodlab.services.report_emitter import (  # noqa: E402
    emit_report,
    render_csv,
    render_markdown,
)

CENSUS = FiberCensus("affine", 7, 7, 1, (1, 1, 2), (1, 2), 3)


def test_json_is_sorted_and_newline_terminated():
    data = emit_report(CENSUS, "json")
    text = data.decode("utf-8")
    assert text.endswith("}\n")
    parsed = json.loads(text)
    assert list(parsed) == sorted(parsed)
    assert parsed["cycles"] == [1, 1, 2]


def test_csv_from_order_table():
    data = emit_report(unboundedness_report(2, 3, 3), "csv")
    assert data.decode("utf-8") == "k,order,p_valuation\n1,2,0\n2,6,1\n3,18,2\n"


def test_markdown_keeps_column_order():
    text = emit_report(CENSUS, "markdown").decode("utf-8")
    assert text.splitlines() == [
        "| q | N_pts | d | cycles | Per |",
        "| --- | --- | --- | --- | --- |",
        "| 7 | 7 | 1 | 1 1 2 | 1 2 |",
    ]


def test_markdown_escapes_pipes_and_blanks_none():
    text = render_markdown(["a", "b"], [["x|y", None]])
    assert text.splitlines()[2] == "| x\\|y |  |"


def test_render_csv_empty_table_keeps_header():
    assert render_csv(["ell", "m"], []) == "ell,m\n"


def test_xlsx_workbook_contents():
    data = emit_report(unboundedness_report(2, 3, 2), "xlsx", title="power-map")
    wb = openpyxl.load_workbook(BytesIO(data))
    ws = wb.active
    assert ws.title == "power-map"
    assert [c.value for c in ws[1]] == ["k", "order", "p_valuation"]
    assert ws["A2"].value == 1
    assert ws["B3"].value == "6"
    assert ws.freeze_panes == "A2"


def test_text_formats_are_deterministic():
    table = unboundedness_report(2, 5, 4)
    for fmt in ("json", "csv", "markdown"):
        assert emit_report(table, fmt) == emit_report(unboundedness_report(2, 5, 4), fmt)


def test_unknown_format():
    with pytest.raises(UnsupportedFormat):
        emit_report(CENSUS, "pdf")
