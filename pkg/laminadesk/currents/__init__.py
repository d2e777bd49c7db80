from laminadesk.currents.diagnostics import LimitDiagnostics, limit_diagnostics, trend_label
from laminadesk.currents.models import Current, TestSet
from laminadesk.currents.operations import is_lamination, is_unit, length, normalize, pair
from laminadesk.currents.parser import load_current, parse_current_text

__all__ = [
    "Current",
    "LimitDiagnostics",
    "TestSet",
    "is_lamination",
    "is_unit",
    "length",
    "limit_diagnostics",
    "load_current",
    "normalize",
    "pair",
    "parse_current_text",
    "trend_label",
]
