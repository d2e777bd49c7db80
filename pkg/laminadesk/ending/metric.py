"""Edge-path lengths in the target complex.

The target has one vertex, so an edge-path is a word and two paths with the
same endpoints are homotopic rel endpoints exactly when the words are equal
in the group. Geodesics are exact for free groups and inside the ball;
outside it the Dehn-reduced word stands in and is flagged uncertified.
"""

import logging

from laminadesk.cayley.models import Ball
from laminadesk.presentation import words
from laminadesk.presentation.dehn import conjugacy_minimal
from laminadesk.presentation.models import Presentation
from laminadesk.presentation.solver import get_solver, require_dehn
from laminadesk.rate_limited_logger import RateLimitedLogger

logger = logging.getLogger(__name__)
diagnostics = RateLimitedLogger("metric", logger)


class PathMetric:
    """Word lengths, geodesic replacements and minimal loops in one group."""

    def __init__(self, presentation: Presentation, ball: Ball | None = None):
        require_dehn(presentation)
        self.presentation = presentation
        self.ball = ball
        self.solver = get_solver(presentation)

    def geodesic(self, word: str) -> tuple[str, bool]:
        """A geodesic word equal to `word`, and whether it is certified minimal."""
        w = words.free_reduce(word)
        if self.presentation.is_free:
            return w, True
        if self.ball is not None:
            v = self.ball.locate(w)
            if v is not None:
                return self.ball.words[v], True
        diagnostics.uncertified("geodesic", f"{len(w)} letters outside the ball")
        return self.solver.reduce(w), False

    def length(self, word: str) -> int:
        return len(self.geodesic(word)[0])

    def distance(self, u: str, v: str) -> int:
        return self.length(words.inverse(u) + v)

    def equal(self, u: str, v: str) -> bool:
        return self.solver.equal(u, v)

    def minimal_loop(self, word: str) -> tuple[str, str, bool]:
        """(loop, x, certified) with x . word . x^-1 = loop and the loop minimal in its class."""
        if self.presentation.is_free:
            core, x = words.cyclic_reduce_with_conjugator(word)
            return core, x, True
        result = conjugacy_minimal(self.presentation, word, oracle=self.ball)
        if not result.certified:
            diagnostics.uncertified("minimal loop", result.word.letters)
        return result.word.letters, result.conjugator, result.certified

    def ball_volume(self, radius: int) -> int | None:
        """Vertices within `radius` of a point, or None when the ball is too small to count them."""
        if self.presentation.is_free:
            r = self.presentation.alphabet.rank
            return 1 + sum(2 * r * (2 * r - 1) ** (k - 1) for k in range(1, radius + 1))
        if self.ball is None or self.ball.radius < radius:
            return None
        return sum(self.ball.sphere_sizes()[: radius + 1])

    def __repr__(self):
        ball = f", ball R={self.ball.radius}" if self.ball is not None else ""
        return f"PathMetric({self.presentation.name or self.presentation.alphabet.names}{ball})"
