"""Curves reaching into the end of a fibered quotient.

Arcs and loops live in the quotient of the Cayley graph by the fiber: its
vertices are the stable-letter levels, so the level of a prefix of a word
is its exponent sum in t and the ball of radius R is |level| <= R.
"""

import logging

from tqdm import tqdm

from laminadesk.cayley.models import QuotientBall
from laminadesk.cayley.quotient import build_quotient_ball, minimal_edge_loop
from laminadesk.config import Config
from laminadesk.ending.models import DriftEntry, DriftScan, ExitCurve, LeaveCheck
from laminadesk.errors import CapacityError, PreconditionError, SurfaceModelError
from laminadesk.presentation import words
from laminadesk.presentation.fibered import FiberedGroup, apply_power
from laminadesk.presentation.models import FiberedPresentation
from laminadesk.rate_limited_logger import RateLimitedLogger
from laminadesk.surface.geometry import model_length
from laminadesk.surface.models import SurfaceData

logger = logging.getLogger(__name__)
diagnostics = RateLimitedLogger("pipeline", logger)


def prefix_levels(group: FiberedGroup, word: str) -> list[int]:
    levels, k = [0], 0
    for ch in word:
        if ch == group.t:
            k += 1
        elif ch == group.T:
            k -= 1
        levels.append(k)
    return levels


def compose_exit_curve(
    quotient: QuotientBall,
    arc_i: str,
    arc_j: str,
    delta: float | None = None,
    c2: float | None = None,
) -> ExitCurve:
    """Close two arcs from the base level with a common end into the loop arc_i . arc_j^-1.

    The loop is accepted when the word problem shows it is nontrivial and,
    given c2, its minimal loop sits within 2 c2 levels of it. Separation of
    at least 3 delta is reported but not required.
    """
    if quotient.fibered is None:
        raise PreconditionError("exit curves need a fibered quotient")
    group = FiberedGroup(quotient.fibered)
    levels_i, levels_j = prefix_levels(group, arc_i), prefix_levels(group, arc_j)
    if levels_i[-1] != levels_j[-1]:
        raise PreconditionError(
            f"arcs end at levels {levels_i[-1]} and {levels_j[-1]}; they must share endpoints"
        )
    word = words.free_reduce(arc_i + words.inverse(arc_j))
    separation = max(min(abs(a - b) for b in levels_j) for a in levels_i)
    separation_ok = None if delta is None else separation >= 3 * delta
    _, u = group.normal_form(word)

    if group.is_identity(word):
        reason = "trivial composition"
        if separation_ok is False:
            reason += f"; separation {separation} below 3 delta = {3 * delta:g}"
        logger.info(f"❌ Exit curve rejected: {reason}")
        return ExitCurve(word, u.letters, False, separation, separation_ok, reason=reason)

    loop, certified = minimal_edge_loop(quotient, word)
    within = None
    if c2 is not None:
        gap = min(abs(loop.level - k) for k in levels_i + levels_j)
        within = gap <= 2 * c2
    reason = ""
    if separation_ok is False:
        reason = f"separation {separation} below 3 delta; nontrivial by the word problem"
    if within is False:
        reason = f"minimal loop at level {loop.level} outside the 2 c2 neighbourhood"
    curve = ExitCurve(word, u.letters, True, separation, separation_ok, loop, certified, within, reason)
    logger.info(f"✅ Exit curve {word}: minimal loop at level {loop.level} (certified={certified})")
    return curve


def infiniteness_scan(
    fibered: FiberedPresentation,
    seed: str,
    radii: list[int],
    count: int,
    search_radius: int | None = None,
) -> DriftScan:
    """Minimal loops of mu^-i(seed) for i = 0..count and, per radius, the first certified one outside the ball.

    Level k of mu^-i(seed) reads the same fiber word as level k + i of the
    seed, so the seed is searched once and its level lengths are shifted
    down by i (by i mod p for a seed of period p). The word mu^-i(seed)
    itself is only written out for its length, and a capped expansion
    leaves word_length unset without pruning the entry.
    """
    radius = search_radius if search_radius is not None else count + 1
    quotient = build_quotient_ball(radius, fibered)
    scan = DriftScan(seed=seed)
    try:
        seed_loop, certified = minimal_edge_loop(quotient, seed, radius)
    except CapacityError as e:
        diagnostics.skipped(seed, str(e))
        scan.entries = [DriftEntry(i, None, None, None, False, pruned=True) for i in range(count + 1)]
        scan.drift = {r: None for r in radii}
        return scan
    scan.periodic = seed_loop.periodic

    for i in tqdm(range(count + 1), desc="drift", disable=count < 8):
        shift = i % scan.periodic if scan.periodic else i
        lengths = {k - shift: n for k, n in seed_loop.level_lengths.items()}
        level = min(lengths, key=lambda k: (lengths[k], abs(k), k))
        try:
            word_length = len(apply_power(fibered.monodromy, seed, -i, cap=Config.LEVEL_WORD_CAP))
        except CapacityError:
            word_length = None
        scan.entries.append(DriftEntry(i, word_length, level, lengths[level], certified))
        if not certified:
            diagnostics.uncertified(f"mu^-{i}({seed})", f"level {level}")

    for r in radii:
        scan.drift[r] = next(
            (e.index for e in scan.entries if e.certified and e.level is not None and abs(e.level) > r),
            None,
        )
    if scan.periodic is not None:
        logger.info(f"📊 {seed} is periodic with period {scan.periodic}; no drift expected")
    logger.info(f"📊 Drift of {seed}: {scan.drift}")
    return scan


def leave_compact_check(
    fibered: FiberedPresentation,
    sequence: list[str],
    radii: list[int],
    surface: SurfaceData | None = None,
    search_radius: int | None = None,
) -> LeaveCheck:
    """Whether the minimal loops of a sequence of classes stay in the balls of the given radii.

    With a surface model, also the ratio of each minimal loop's length to
    the class's hyperbolic length, and the running infimum of that ratio.
    """
    radius = search_radius if search_radius is not None else max(radii, default=0) + 1
    quotient = build_quotient_ball(radius, fibered)
    levels, certified, ratios = [], [], []
    for c in sequence:
        try:
            loop, ok = minimal_edge_loop(quotient, c, radius)
        except CapacityError as e:
            diagnostics.skipped(c[:20], str(e))
            levels.append(None)
            certified.append(False)
            ratios.append(None)
            continue
        levels.append(loop.level)
        certified.append(ok)
        ratio = None
        if surface is not None:
            try:
                ratio = len(loop) / model_length(surface, c)
            except SurfaceModelError as e:
                diagnostics.skipped(c[:20], str(e))
        ratios.append(ratio)

    contained = {k: [lv is not None and abs(lv) <= k for lv in levels] for k in radii}
    running, best = [], None
    for r in ratios:
        if r is not None:
            best = r if best is None else min(best, r)
        running.append(best)
    return LeaveCheck(levels, certified, contained, ratios, running)
