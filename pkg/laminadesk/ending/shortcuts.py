"""Enumeration of eps-shortcuts.

A shortcut is an arc of a train path, between vertex ties and through at
most B branches, whose image is not a geodesic and equals a word of length
at most eps. Arcs are followed through a switch into every half-branch of
the opposite side; an arc and its reverse are the same shortcut.
"""

import logging

from laminadesk.config import Config
from laminadesk.ending.models import AdaptedMap, Shortcut, ShortcutSearch, Step
from laminadesk.rate_limited_logger import RateLimitedLogger

logger = logging.getLogger(__name__)
diagnostics = RateLimitedLogger("shortcuts", logger)


def _reverse_key(steps: tuple[Step, ...], start: int, end: int) -> tuple:
    return tuple((b, -d) for b, d in reversed(steps)), end, start


class _Search:
    def __init__(self, m: AdaptedMap, eps: int, bound: int, max_image: int):
        self.m = m
        self.eps = eps
        self.bound = bound
        self.max_image = max_image
        self.result = ShortcutSearch(eps=eps, bound=bound, max_image=max_image)
        self.seen: set[tuple] = set()

    @property
    def full(self) -> bool:
        return len(self.result.shortcuts) >= Config.MAX_SHORTCUTS

    def consider(self, steps: tuple[Step, ...], start: int, end: int, image: str) -> None:
        key = (steps, start, end)
        if key in self.seen or self.full:
            return
        self.seen.add(key)
        if len(steps) > 1:
            self.seen.add(_reverse_key(steps, start, end))
        self.result.arcs_examined += 1
        replacement, certified = self.m.metric.geodesic(image)
        if len(replacement) < len(image) and len(replacement) <= self.eps:
            self.result.shortcuts.append(Shortcut(steps, start, end, image, replacement, certified))
            if self.full:
                self.result.truncated = True
                diagnostics.warning(
                    "bound", f"shortcut enumeration stopped at {Config.MAX_SHORTCUTS} shortcuts"
                )

    def closed_branch(self, b: str) -> None:
        w = self.m.images[b]
        n = len(w)
        doubled = w + w
        for p in range(n):
            for k in range(1, min(n, self.max_image + 1)):
                self.consider(((b, 1),), p, p + k, doubled[p : p + k])

    def open_branch(self, b: str) -> None:
        n = self.m.length(b)
        for p in range(n):
            for q in range(p + 1, min(n, p + self.max_image) + 1):
                self.consider(((b, 1),), p, q, self.m.segment(b, p, q))
        for d in (1, -1):
            far = n if d > 0 else 0
            for p in range(n + 1):
                if p == far:
                    continue
                head = self.m.segment(b, p, far)
                if self.bound > 1 and len(head) < self.max_image:
                    self.extend(((b, d),), p, head)

    def extend(self, steps: tuple[Step, ...], start: int, image: str) -> None:
        if self.full:
            return
        for nb, nd in self.m.continuations(steps[-1]):
            n = self.m.length(nb)
            entry = 0 if nd > 0 else n
            path = steps + ((nb, nd),)
            for k in range(1, n + 1):
                q = entry + k * nd
                tail = self.m.segment(nb, entry, q)
                if len(image) + len(tail) > self.max_image:
                    break
                self.consider(path, start, q, image + tail)
            through = image + self.m.segment(nb, entry, n - entry)
            if len(path) < self.bound and len(through) < self.max_image:
                self.extend(path, start, through)


def find_shortcuts(
    m: AdaptedMap,
    eps: int,
    bound: int = Config.SHORTCUT_BRANCH_BOUND,
    max_image: int | None = None,
) -> ShortcutSearch:
    """Every eps-shortcut of `m` through at most `bound` branches.

    Images longer than `max_image` (default SHORTCUT_IMAGE_FACTOR * eps) are
    not followed. Hitting MAX_SHORTCUTS returns the partial list with
    `truncated` set.
    """
    if eps < 1:
        return ShortcutSearch(eps=eps)
    search = _Search(m, eps, bound, max_image if max_image is not None else Config.SHORTCUT_IMAGE_FACTOR * eps)
    for b in sorted(m.track.branches):
        if m.track.is_closed(b):
            search.closed_branch(b)
        else:
            search.open_branch(b)
    result = search.result
    logger.debug(f"🔍 {len(result)} shortcuts among {result.arcs_examined} arcs (eps={eps})")
    return result
