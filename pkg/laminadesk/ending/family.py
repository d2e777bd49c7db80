"""Maximal shortcut families and their straightening.

Shortcuts crossing no switch are taken greedily, longest first, while
their rectangles stay disjoint; shortcuts crossing one switch follow under
the same rule. A member crossing a switch is isolated by splitting from
every corner poking into its two branches to the vertex tie just past its
endpoint, after which it lies inside a single branch of the split track
and is straightened by replacing its letters with the geodesic word.
"""

import logging
from fractions import Fraction

from laminadesk.ending.models import AdaptedMap, Letter, Rectangle, Shortcut, ShortcutFamily, ShortcutSearch
from laminadesk.ending.shortcuts import find_shortcuts
from laminadesk.errors import PreconditionError, SplittingError
from laminadesk.presentation import words
from laminadesk.rate_limited_logger import RateLimitedLogger
from laminadesk.traintrack.models import CornerArc, HalfBranch, Pullback, SplittingMove, TrainTrack
from laminadesk.traintrack.splitting import split
from laminadesk.traintrack.ties import corners_into

logger = logging.getLogger(__name__)
diagnostics = RateLimitedLogger("family", logger)


def check_long_branches(m: AdaptedMap, bound: int) -> None:
    """Raise unless every non-annular branch image is longer than 2 * bound."""
    short = [b for b in m.open_branches if m.length(b) <= 2 * bound]
    if short:
        raise PreconditionError(
            f"branch images {short} are not longer than 2A = {2 * bound}; lengthen the track first"
        )


def select_family(m: AdaptedMap, shortcuts: list[Shortcut]) -> tuple[list[Shortcut], list[tuple[Shortcut, str]]]:
    chosen: list[Shortcut] = []
    rects: list[Rectangle] = []
    excluded = [(s, "crosses more than one switch") for s in shortcuts if s.switches > 1]
    for crossings in (0, 1):
        pool = [s for s in shortcuts if s.switches == crossings]
        for s in sorted(pool, key=lambda s: (-s.image_length, s.steps, s.start, s.end)):
            r = s.rectangle(m)
            if any(r.overlaps(o) for o in rects):
                excluded.append((s, "rectangle overlaps a family member"))
                continue
            chosen.append(s)
            rects.append(r)
    return chosen, excluded


def isolating_arcs(m: AdaptedMap, track: TrainTrack, s: Shortcut) -> list[CornerArc]:
    """Corner arcs that separate the strand of a one-switch shortcut from its neighbours."""
    widths = track.measure()
    (b1, d1), (b2, d2) = s.steps
    n1, n2 = m.length(b1), m.length(b2)
    ends = (
        (HalfBranch(b1, 1 if d1 > 0 else 0), b1, n1, n1 - s.start if d1 > 0 else s.start),
        (HalfBranch(b2, 0 if d2 > 0 else 1), b2, n2, s.end if d2 > 0 else n2 - s.end),
    )
    arcs = []
    for half, branch, n, depth in ends:
        if depth + 1 >= n:
            raise SplittingError(f"no legal move: {branch} too short to isolate a shortcut {depth} deep")
        for corner in corners_into(track, half, widths):
            arcs.append(CornerArc(corner, path=(branch,), exit=Fraction(depth + 1, n)))
    return arcs


def _merge_arcs(arcs: list[CornerArc]) -> tuple[CornerArc, ...]:
    deepest: dict = {}
    for arc in arcs:
        if arc.corner not in deepest or arc.exit > deepest[arc.corner].exit:
            deepest[arc.corner] = arc
    return tuple(deepest[c] for c in sorted(deepest))


def _find_run(seq: list[Letter], target: list[Letter], closed: bool) -> int | None:
    n, k = len(seq), len(target)
    if k == 0 or k > n:
        return None
    hay = seq + seq[: k - 1] if closed else seq
    for i in range(n if closed else n - k + 1):
        if hay[i : i + k] == target:
            return i
    return None


def locate_run(letter_map: dict[str, list[Letter]], track: TrainTrack, target: list[Letter]):
    """(branch, start, end, sign) of a run of letters inside one branch of a split track."""
    backwards = [(b, i, -d) for b, i, d in reversed(target)]
    for name in sorted(letter_map):
        for run, sign in ((target, 1), (backwards, -1)):
            k = _find_run(letter_map[name], run, track.is_closed(name))
            if k is not None:
                return name, k, k + len(run), sign
    return None


def straighten(m: AdaptedMap, placed: list[tuple[str, int, int, str]]) -> AdaptedMap:
    """Replace letters [i, j) of branch images by the given words; intervals must be disjoint."""
    images = dict(m.images)
    by_branch: dict[str, list[tuple[int, int, str]]] = {}
    for b, i, j, rep in placed:
        by_branch.setdefault(b, []).append((i, j, rep))
    for b, spans in by_branch.items():
        w = images[b]
        n = len(w)
        shift = next((i for i, j, _ in spans if j > n), 0)
        if shift:
            w = w[shift:] + w[:shift]
            spans = [((i - shift) % n, (i - shift) % n + (j - i), rep) for i, j, rep in spans]
        for i, j, rep in sorted(spans, reverse=True):
            w = w[:i] + rep + w[j:]
        images[b] = w
    return AdaptedMap(m.track, m.metric, images)


def _verify(split_map: AdaptedMap, search: ShortcutSearch, rects: list[tuple[str, int, int]]) -> dict[str, bool]:
    disjoint = all(
        not (b1 == b2 and max(i1, i2) < min(j1, j2))
        for k, (b1, i1, j1) in enumerate(rects)
        for b2, i2, j2 in rects[k + 1 :]
    )
    fresh = find_shortcuts(split_map, search.eps, search.bound, search.max_image)
    members = {(b, i, j) for b, i, j in rects}

    def inside(point) -> bool:
        branch, x = point
        return any(b == branch and i < x < j for b, i, j in rects)

    covered = True
    for s in fresh:
        if s.switches == 0 and (s.steps[0][0], s.start, s.end) in members:
            continue
        if not any(inside(p) for p in s.endpoints(split_map)):
            covered = False
            diagnostics.warning("uncovered", f"shortcut {s.as_dict()['steps']} {s.start}-{s.end} has no endpoint in the family")
    return {"disjoint_rectangles": disjoint, "others_meet_family": covered}


def maximal_shortcut_family(m: AdaptedMap, shortcuts: ShortcutSearch) -> ShortcutFamily:
    """A maximal family of shortcuts, the splitting isolating it, and the straightened map.

    Needs every non-annular branch longer than twice the longest shortcut
    image. The family's properties are checked again on the split track
    with a fresh enumeration; see `checks`.
    """
    if not shortcuts.shortcuts:
        return ShortcutFamily(
            family=[], split_map=m, map=m, pullback=Pullback.identity(m.track),
            checks={"disjoint_rectangles": True, "others_meet_family": True, "one_branch_each": True},
        )
    check_long_branches(m, shortcuts.max_image_length)

    chosen, excluded = select_family(m, shortcuts.shortcuts)
    track = m.synced_track()
    crossing = [s for s in chosen if s.switches == 1]
    moves: list[SplittingMove] = []
    new_track, pullback = track, Pullback.identity(track)
    if crossing:
        try:
            move = SplittingMove(_merge_arcs([a for s in crossing for a in isolating_arcs(m, track, s)]))
            new_track, pullback = split(track, move)
            moves.append(move)
        except (SplittingError, PreconditionError) as e:
            diagnostics.warning("isolate", f"cannot isolate switch-crossing shortcuts: {e}")
            excluded += [(s, f"not isolated: {e}") for s in crossing]
            chosen = [s for s in chosen if s.switches == 0]
            new_track, pullback = track, Pullback.identity(track)

    split_map = m.pulled_back(new_track, pullback) if moves else m
    letter_map = m.letter_map(pullback)
    family, placed, rects = [], [], []
    one_branch = True
    for s in chosen:
        found = locate_run(letter_map, new_track, s.letters(m))
        if found is None:
            one_branch = False
            excluded.append((s, "not inside one branch after splitting"))
            continue
        b, i, j, sign = found
        family.append(s)
        placed.append((b, i, j, s.replacement if sign > 0 else words.inverse(s.replacement)))
        rects.append((b, i, j))

    straightened = straighten(split_map, placed)
    checks = _verify(split_map, shortcuts, rects)
    checks["one_branch_each"] = one_branch and all(s.switches <= 1 for s in family)
    if not all(checks.values()):
        diagnostics.warning("verify", f"family properties failed: {[k for k, ok in checks.items() if not ok]}")
    logger.info(
        f"✅ Shortcut family: {len(family)} of {len(shortcuts)} shortcuts, "
        f"{sum(len(mv) for mv in moves)} splitting arcs"
    )
    return ShortcutFamily(
        family=family,
        moves=moves,
        split_map=split_map,
        map=straightened,
        pullback=pullback,
        rectangles=rects,
        checks=checks,
        excluded=excluded,
    )
