from laminadesk.reports.database import RunDB
from laminadesk.reports.models import ConstantEntry, ExperimentRun, Report, Verdict
from laminadesk.reports.writer import (
    append_rows,
    append_summary,
    report_json,
    summary_row,
    write_ball,
    write_matrix,
    write_report,
)

__all__ = [
    "ConstantEntry",
    "ExperimentRun",
    "Report",
    "RunDB",
    "Verdict",
    "append_rows",
    "append_summary",
    "report_json",
    "summary_row",
    "write_ball",
    "write_matrix",
    "write_report",
]
