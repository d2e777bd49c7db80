from laminadesk.traintrack.carrying import carry, train_paths
from laminadesk.traintrack.lengthening import LengtheningResult, corner_to_midpoint_move, lengthen_branches
from laminadesk.traintrack.models import (
    Corner,
    CornerArc,
    HalfBranch,
    PassRecord,
    Pullback,
    Region,
    SplittingMove,
    Switch,
    TrainTrack,
    Weighting,
)
from laminadesk.traintrack.parser import load_track, parse_track_text
from laminadesk.traintrack.splitting import split
from laminadesk.traintrack.ties import longest_strip, thick_branches, thick_loop
from laminadesk.traintrack.validation import annular_components, check_switch, frontier_cycles, validate

__all__ = [
    "Corner",
    "CornerArc",
    "HalfBranch",
    "LengtheningResult",
    "PassRecord",
    "Pullback",
    "Region",
    "SplittingMove",
    "Switch",
    "TrainTrack",
    "Weighting",
    "annular_components",
    "carry",
    "check_switch",
    "corner_to_midpoint_move",
    "frontier_cycles",
    "lengthen_branches",
    "load_track",
    "longest_strip",
    "parse_track_text",
    "split",
    "thick_branches",
    "thick_loop",
    "train_paths",
    "validate",
]
