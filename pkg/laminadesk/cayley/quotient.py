"""Minimal edge-loops in the quotient by the fiber subgroup.

A loop at level k reading the fiber word w represents the class of
mu^k(w), so the loop of class c at level k reads mu^-k(c) and its length is
the conjugacy length of that word in the fiber.
"""

import logging

from laminadesk.cayley.models import Ball, EdgeLoop, QuotientBall
from laminadesk.config import Config
from laminadesk.errors import CapacityError, PreconditionError, SubgroupError
from laminadesk.presentation import words
from laminadesk.presentation.dehn import conjugacy_minimal
from laminadesk.presentation.fibered import FiberedGroup
from laminadesk.presentation.models import CyclicWord, FiberedPresentation
from laminadesk.rate_limited_logger import RateLimitedLogger

logger = logging.getLogger(__name__)
diagnostics = RateLimitedLogger("minloop", logger)


def build_quotient_ball(radius: int, fibered: FiberedPresentation | None = None, ball: Ball | None = None) -> QuotientBall:
    return QuotientBall(radius=radius, fibered=fibered, ball=ball)


def level_lengths(group: FiberedGroup, c: str, levels) -> tuple[dict[int, int], dict[int, str], list[int]]:
    """Conjugacy length of the level word of c at each level, skipping pruned levels."""
    lengths: dict[int, int] = {}
    minimal: dict[int, str] = {}
    pruned: list[int] = []
    for k in levels:
        try:
            w = group.level_word(c, k)
        except CapacityError:
            pruned.append(k)
            diagnostics.skipped(f"level {k} of {c}", f"word longer than {Config.LEVEL_WORD_CAP}")
            continue
        rep = conjugacy_minimal(group.fiber, w).word.letters
        lengths[k] = len(rep)
        minimal[k] = rep
    return lengths, minimal, pruned


def find_period(group: FiberedGroup, c: str, lengths: dict[int, int], limit: int = Config.PERIOD_SEARCH) -> int | None:
    """Least p <= limit with mu^p(c) conjugate to c in the fiber, among scanned levels.

    Level -p reads mu^p(c); conjugate words have equal minimal length, so
    only levels matching the level-0 length are tested.
    """
    if 0 not in lengths:
        return None
    base = None
    for p in range(1, limit + 1):
        if -p not in lengths:
            break
        if lengths[-p] != lengths[0]:
            continue
        if base is None:
            base = set(conjugacy_minimal(group.fiber, c).representatives)
        reps = conjugacy_minimal(group.fiber, group.level_word(c, -p)).representatives
        if base & set(reps):
            return p
    return None


def _outward_monotone(lengths: dict[int, int], k_star: int, lo: int, hi: int) -> bool:
    best = lengths[k_star]
    ups = [lengths[k] for k in range(k_star, hi + 1) if k in lengths]
    downs = [lengths[k] for k in range(k_star, lo - 1, -1) if k in lengths]
    monotone = all(x <= y for x, y in zip(ups, ups[1:])) and all(
        x <= y for x, y in zip(downs, downs[1:])
    )
    return monotone and ups[-1] > best and downs[-1] > best


def minimal_edge_loop(quotient: QuotientBall, c: CyclicWord | str, search_radius: int | None = None) -> tuple[EdgeLoop, bool]:
    """Shortest loop of the class c among the searched levels.

    Certified when the class is periodic and a full period was scanned, or
    when level lengths grow monotonically from the minimiser out to both
    edges of the search, so no competitor hides beyond it.
    """
    letters = c.letters if isinstance(c, CyclicWord) else c
    if quotient.fibered is None:
        if quotient.ball is None:
            raise PreconditionError("a trivial-subgroup quotient needs its Cayley ball")
        result = conjugacy_minimal(quotient.ball.presentation, letters, oracle=quotient.ball)
        loop = EdgeLoop(level=0, word=result.word.letters, level_lengths={0: len(result.word)})
        return loop, result.certified

    group = FiberedGroup(quotient.fibered)
    k, u = group.normal_form(letters)
    if k != 0:
        raise SubgroupError("class not in subgroup")
    if any(ch.lower() == group.t for ch in letters):
        letters = u.letters
    letters = words.cyclic_reduce(letters)
    if not letters:
        return EdgeLoop(level=0, word=""), True

    radius = quotient.radius if search_radius is None else search_radius
    lo, hi = -radius, radius
    lengths, minimal, pruned = level_lengths(group, letters, range(lo, hi + 1))
    if not lengths:
        raise CapacityError(f"every level of {letters} within {radius} was pruned")
    k_star = min(lengths, key=lambda k: (lengths[k], abs(k), k))

    period = find_period(group, letters, lengths)
    if period is not None:
        certified = True
    else:
        certified = _outward_monotone(lengths, k_star, min(lengths), max(lengths))
    if not certified:
        diagnostics.uncertified("minimal loop", f"{letters} at level {k_star}")

    loop = EdgeLoop(
        level=k_star,
        word=minimal[k_star],
        level_lengths=lengths,
        pruned=pruned,
        periodic=period,
    )
    return loop, certified
