"""Splitting sequences that make every branch long.

A pass first splits loops of thick branches, cutting from their corners to
the middle of the loop's branches until the pass has grown the minimum
length enough. It then splits from each corner that pokes into a thick
branch to the middle of that branch, once per branch of the longest thick
strip. Each such round replaces a thick branch by branches at least as
long as the average of its neighbours, so the minimum length grows
geometrically as long as no annulus is cut off.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction

from laminadesk.config import Config
from laminadesk.errors import HypothesisViolation, PreconditionError, SplittingError
from laminadesk.rate_limited_logger import RateLimitedLogger
from laminadesk.traintrack.models import (
    CornerArc,
    HalfBranch,
    PassRecord,
    Pullback,
    SplittingMove,
    TrainTrack,
)
from laminadesk.traintrack.splitting import split
from laminadesk.traintrack.ties import corners_into, longest_strip, thick_branches, thick_loop
from laminadesk.traintrack.validation import annular_components

logger = logging.getLogger(__name__)
diagnostics = RateLimitedLogger("lengthen", logger)

HALF = Fraction(1, 2)


@dataclass
class LengtheningResult:
    original: TrainTrack
    track: TrainTrack
    passes: list[PassRecord] = field(default_factory=list)
    moves: list[SplittingMove] = field(default_factory=list)
    pullbacks: list[Pullback] = field(default_factory=list)

    def pullback(self) -> Pullback:
        """Composite pullback from the final track to the original one."""
        total = Pullback.identity(self.original)
        for step in self.pullbacks:
            total = step.compose(total)
        return total

    def as_dict(self) -> dict:
        return {
            "moves": len(self.moves),
            "passes": [p.as_dict() for p in self.passes],
            "min_length": str(self.track.min_length),
            "branches": len(self.track.branches),
        }


def _apply(track: TrainTrack, move: SplittingMove, result: LengtheningResult) -> TrainTrack:
    """Split, refusing any move that cuts off an annulus."""
    before = annular_components(track)
    new_track, pullback = split(track, move)
    after = annular_components(new_track)
    if len(after) > len(before):
        raise HypothesisViolation(
            f"splitting {track.name or 'track'} cuts off an annular component",
            {
                "arcs": [str(a.corner) for a in move.arcs],
                "annuli_before": before,
                "annuli_after": after,
                "passes_completed": len(result.passes),
            },
        )
    result.moves.append(move)
    result.pullbacks.append(pullback)
    return new_track


def corner_to_midpoint_move(track: TrainTrack, branches: list[str] | None = None) -> SplittingMove:
    """Arcs from every corner poking into a thick branch to that branch's midpoint.

    With `branches` given, only corners poking into those branches are cut from.
    """
    widths = track.measure()
    arcs = []
    for b in thick_branches(track, widths) if branches is None else branches:
        for e in (0, 1):
            for corner in corners_into(track, HalfBranch(b, e), widths):
                arcs.append(CornerArc(corner, path=(b,), exit=HALF))
    return SplittingMove(tuple(arcs))


def remove_thick_loops(
    track: TrainTrack,
    result: LengtheningResult,
    goal: Fraction | None = None,
) -> tuple[TrainTrack, int]:
    """Cut from the corners of each loop of thick branches to the middle of its branches.

    Stops once no thick loop is left or the minimum length has reached `goal`.
    """
    removed = 0
    for _ in range(2 * len(track.branches) + 1):
        widths = track.measure()
        loop = thick_loop(track, widths)
        if loop is None or (goal is not None and track.min_length >= goal):
            return track, removed
        move = corner_to_midpoint_move(track, sorted(set(loop)))
        try:
            track = _apply(track, move, result)
        except SplittingError as e:
            if "no legal move" not in str(e):
                raise
            raise HypothesisViolation(
                f"cut around thick loop {loop} closes up without collision",
                {"loop": loop, "arcs": [str(a.corner) for a in move.arcs]},
            ) from e
        removed += 1
        logger.debug(f"split thick loop {loop} at {len(move.arcs)} corners")
    raise HypothesisViolation("thick loops keep reappearing", {"loop": thick_loop(track, track.measure())})


def midpoint_round(track: TrainTrack, result: LengtheningResult) -> TrainTrack | None:
    """One corner-to-midpoint round; None when nothing is thick."""
    move = corner_to_midpoint_move(track)
    if not move.arcs:
        return None
    return _apply(track, move, result)


def lengthen_pass(track: TrainTrack, index: int, result: LengtheningResult) -> TrainTrack:
    min_before = track.min_length
    target = Config.GROWTH_FACTOR * min_before
    track, loops = remove_thick_loops(track, result, goal=target)
    strip = longest_strip(track, track.measure())
    if strip == 0 and loops == 0:
        raise SplittingError(f"no legal move: {track.name or 'track'} has no thick branch to split")

    rounds = 0
    if track.min_length < target:
        while rounds < strip or (track.min_length < target and rounds < strip + Config.MAX_EXTRA_ROUNDS):
            nxt = midpoint_round(track, result)
            if nxt is None:
                break
            track, rounds = nxt, rounds + 1

    record = PassRecord(index, min_before, track.min_length, rounds, loops, strip)
    result.passes.append(record)
    if track.min_length < target:
        diagnostics.warning(
            "growth_short",
            f"pass {index}: minimum {min_before} -> {track.min_length}, below {Config.GROWTH_FACTOR}x",
        )
    logger.info(
        f"📏 Pass {index}: min length {min_before} -> {track.min_length} "
        f"({rounds} rounds, strip {strip}, {loops} loops removed)"
    )
    return track


def lengthen_branches(
    track: TrainTrack,
    target: Fraction,
    lengths: dict[str, Fraction] | None = None,
) -> LengtheningResult:
    """Split `track` until every branch is longer than `target`.

    Raises HypothesisViolation (with a diagnostic) as soon as a move would
    cut off an annular component.
    """
    target = Fraction(target)
    if target <= 0:
        raise PreconditionError("target length must be positive")
    if lengths is not None:
        track = track.replace(lengths={**track.lengths, **{b: Fraction(v) for b, v in lengths.items()}})
    track.measure()
    result = LengtheningResult(original=track, track=track)

    index = 0
    while track.min_length <= target:
        if index >= Config.MAX_LENGTHEN_PASSES:
            raise HypothesisViolation(
                f"minimum length {track.min_length} still at most {target} after {index} passes",
                {"passes": [p.as_dict() for p in result.passes]},
            )
        index += 1
        track = lengthen_pass(track, index, result)
        result.track = track
    return result
