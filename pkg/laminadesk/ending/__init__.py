from laminadesk.ending.bounds import bounds_report, next_length_bound
from laminadesk.ending.family import maximal_shortcut_family
from laminadesk.ending.iteration import run_until_stable, start, straighten_step
from laminadesk.ending.maps import lamination_image_length, tighten
from laminadesk.ending.metric import PathMetric
from laminadesk.ending.models import (
    AdaptedMap,
    DriftScan,
    ExitCurve,
    IterationState,
    LeaveCheck,
    LoopArc,
    LoopPartition,
    Shortcut,
    ShortcutFamily,
    ShortcutSearch,
)
from laminadesk.ending.partition import partition_loop
from laminadesk.ending.pipeline import compose_exit_curve, infiniteness_scan, leave_compact_check
from laminadesk.ending.shortcuts import find_shortcuts
from laminadesk.ending.thresholds import long_run_fraction, smallest_threshold, worst_long_run

__all__ = [
    "AdaptedMap",
    "DriftScan",
    "ExitCurve",
    "IterationState",
    "LeaveCheck",
    "LoopArc",
    "LoopPartition",
    "PathMetric",
    "Shortcut",
    "ShortcutFamily",
    "ShortcutSearch",
    "bounds_report",
    "compose_exit_curve",
    "find_shortcuts",
    "infiniteness_scan",
    "lamination_image_length",
    "leave_compact_check",
    "long_run_fraction",
    "maximal_shortcut_family",
    "next_length_bound",
    "partition_loop",
    "run_until_stable",
    "smallest_threshold",
    "start",
    "straighten_step",
    "tighten",
    "worst_long_run",
]
