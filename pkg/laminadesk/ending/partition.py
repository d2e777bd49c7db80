"""Five-class partition of the 1-cells of a loop pulled through the current map.

The loop is a cyclic list of pieces: train paths on the track, read through
the map, and off-track words, replaced by geodesics. Cell i joins vertex i
to vertex i + 1. Labels are assigned in the order 0, 4, 1, 3, 2:

  0  the cell has an endpoint on an off-track piece
  4  both endpoints are within eps of a vertex of the minimal loop's lift
  1  the cell lies on an on-track subarc of at most `span` cells, clear of
     class 0, whose image is not geodesic and is equal to a path of
     length <= eps
  3  a subarc of at most `span` cells from the cell to a class-0 vertex
     is equal to a path of length <= eps
  2  everything else
"""

import logging

from laminadesk.config import Config
from laminadesk.ending.models import IterationState, LoopArc, LoopPartition
from laminadesk.errors import PreconditionError
from laminadesk.presentation import words

logger = logging.getLogger(__name__)

UNSET = -1


def loop_word(state: IterationState, loop: list[LoopArc]) -> tuple[str, list[bool], list[tuple[int, int]]]:
    """Word of the loop under the current map.

    Also returns, per letter, whether it came from the track, and the
    (start, length) of every off-track piece.
    """
    if not loop:
        raise PreconditionError("empty loop")
    m = state.map
    parts, on_track, off = [], [], []
    position = 0
    for piece in loop:
        if piece.on_track:
            m.check_path(list(piece.steps), closed=len(loop) == 1)
            w = m.path_image(list(piece.steps))
        else:
            w, _ = m.metric.geodesic(piece.word)
            off.append((position, len(w)))
        parts.append(w)
        on_track += [piece.on_track] * len(w)
        position += len(w)
    word = "".join(parts)
    if not word:
        raise PreconditionError("loop maps to a constant path")
    return word, on_track, off


def _lift_vertices(star: str, x: str) -> list[str]:
    """Vertices of x^-1 . star^j . star[:r] for j in -1, 0, 1."""
    back = words.inverse(x)
    powers = (words.inverse(star), "", star)
    return [words.free_reduce(back + p + star[:r]) for p in powers for r in range(len(star))]


def partition_loop(state: IterationState, loop: list[LoopArc], eps: int | None = None) -> LoopPartition:
    eps = state.eps if eps is None else eps
    metric = state.map.metric
    word, on_track, off = loop_word(state, loop)
    n = len(word)
    span = Config.SHORTCUT_IMAGE_FACTOR * eps
    star, x, certified = metric.minimal_loop(word)
    if not certified:
        logger.warning(f"⚠️ minimal loop of {word[:40]} uncertified; partition uses {star}")

    def cells(a: int, k: int) -> list[int]:
        return [(a + i) % n for i in range(k)]

    def arc(a: int, k: int) -> str:
        return "".join(word[c] for c in cells(a, k))

    labels = [UNSET] * n

    # 0: meets an off-track piece at a vertex
    off_vertices = {(p + j) % n for p, k in off for j in range(k + 1)}
    for i in range(n):
        if i in off_vertices or (i + 1) % n in off_vertices:
            labels[i] = 0

    # 4: both endpoints near the minimal loop
    targets = _lift_vertices(star, x) if star else [words.inverse(x)]
    near = [
        any(metric.length(words.inverse(word[:v]) + q) <= eps for q in targets)
        for v in range(n)
    ]
    for i in range(n):
        if labels[i] == UNSET and near[i] and near[(i + 1) % n]:
            labels[i] = 4

    # 1: non-geodesic on-track subarcs that eps-shortcut
    for a in range(n):
        for k in range(2, min(span, n) + 1):
            run = cells(a, k)
            if any(labels[c] == 0 or not on_track[c] for c in run):
                break
            w = arc(a, k)
            g = metric.length(w)
            if g < k and g <= eps:
                for c in run:
                    if labels[c] == UNSET:
                        labels[c] = 1

    # 3: eps-escape to class 0
    zero_vertices = {v % n for i in range(n) if labels[i] == 0 for v in (i, i + 1)}
    for i in range(n):
        if labels[i] != UNSET or not zero_vertices:
            continue
        for k in range(min(span, n)):
            forward = (i + 1 + k) % n
            backward = (i - k) % n
            if (forward in zero_vertices and metric.length(arc(i + 1, k)) <= eps) or (
                backward in zero_vertices and metric.length(arc(backward, k)) <= eps
            ):
                labels[i] = 3
                break

    labels = [2 if c == UNSET else c for c in labels]
    result = LoopPartition(
        word=word,
        labels=labels,
        star=star,
        star_certified=certified,
        on_track=on_track,
        eps=eps,
        span=span,
    )
    logger.debug(f"partition of {n} cells: {result.class_lengths}")
    return result
