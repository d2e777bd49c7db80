"""Resolve integral weightings into closed train paths."""

import logging

from laminadesk.errors import PreconditionError
from laminadesk.presentation import words
from laminadesk.presentation.models import Presentation
from laminadesk.surface.models import Multicurve
from laminadesk.traintrack.models import HalfBranch, TrainTrack, Weighting, opposite
from laminadesk.traintrack.ties import flips
from laminadesk.traintrack.validation import check_switch

logger = logging.getLogger(__name__)

# A train path step: branch name and direction (+1 from end 0 to end 1)
Step = tuple[str, int]


def _next_strand(track: TrainTrack, widths: dict[str, int], branch: str, strand: int, direction: int):
    """Follow strand `strand` of `branch` through the switch ahead of it."""
    end = 1 if direction > 0 else 0
    switch, side, i = track.attachment(HalfBranch(branch, end))
    halves = track.switches[switch].side(side)
    offset = sum(widths[h.branch] for h in halves[:i])
    w = widths[branch]
    tie = offset + (w - 1 - strand if flips(side, end) else strand)

    other = opposite(side)
    offset = 0
    for half in track.switches[switch].side(other):
        w = widths[half.branch]
        if offset <= tie < offset + w:
            local = offset + w - 1 - tie if flips(other, half.end) else tie - offset
            return half.branch, local, 1 if half.end == 0 else -1
        offset += w
    raise PreconditionError(f"switch {switch} does not balance; strand {tie} has no continuation")


def train_paths(track: TrainTrack, weights: Weighting) -> list[list[Step]]:
    """Closed train paths of an integral weighting, one per strand cycle.

    Strands of a branch are numbered from its left edge; at a switch they
    keep their tie position, which is the resolution without crossings.
    """
    if not weights.is_integral:
        raise PreconditionError("carrying needs integral weights")
    if not check_switch(track, weights):
        raise PreconditionError("weights violate the switch conditions")
    widths = {b: int(weights[b]) for b in track.branches}
    seen: set[tuple[str, int]] = set()
    paths = []
    for b in sorted(track.branches):
        for j in range(widths[b]):
            if (b, j) in seen:
                continue
            if track.is_closed(b):
                seen.add((b, j))
                paths.append([(b, 1)])
                continue
            path: list[Step] = []
            state = (b, j, 1)
            while True:
                branch, strand, direction = state
                seen.add((branch, strand))
                path.append((branch, direction))
                state = _next_strand(track, widths, branch, strand, direction)
                if state == (b, j, 1):
                    break
                if len(path) > sum(widths.values()):
                    raise PreconditionError(f"strand {b}[{j}] does not close up")
            paths.append(path)
    return paths


def path_word(track: TrainTrack, path: list[Step]) -> str:
    """Chart word read along a train path."""
    missing = sorted({b for b, _ in path if b not in track.words})
    if missing:
        raise PreconditionError(f"carry needs a chart word on every branch; missing {missing}")
    return "".join(track.words[b] if d > 0 else words.inverse(track.words[b]) for b, d in path)


def carry(track: TrainTrack, weights: Weighting, presentation: Presentation) -> Multicurve:
    """The multicurve of closed train paths, read through the chart words."""
    multicurve = Multicurve(presentation)
    for path in train_paths(track, weights):
        word = words.cyclic_reduce(path_word(track, path))
        if not word:
            logger.warning(f"⚠️ train path {path} reads a null-homotopic word; skipped")
            continue
        multicurve.add(word, 1)
    return multicurve
