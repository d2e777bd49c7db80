"""Word-problem solvers behind a common interface."""

import logging
from abc import ABC, abstractmethod
from functools import lru_cache

from laminadesk.errors import PreconditionError
from laminadesk.presentation import words
from laminadesk.presentation.models import Presentation

logger = logging.getLogger(__name__)


class WordProblemSolver(ABC):
    """Decides equality in a finitely presented group."""

    kind = "abstract"

    def __init__(self, presentation: Presentation):
        self.presentation = presentation

    @abstractmethod
    def reduce(self, word: str) -> str:
        """Return a word equal in the group, never longer than the input."""

    def canonical(self, word: str) -> str | None:
        """Unique normal form, or None when the solver has none."""
        return None

    def is_identity(self, word: str) -> bool:
        return self.reduce(word) == ""

    def equal(self, u: str, v: str) -> bool:
        return self.is_identity(u + words.inverse(v))

    def __repr__(self):
        return f"{type(self).__name__}({self.presentation.name or self.presentation.alphabet.names})"


class FreeSolver(WordProblemSolver):
    """Free groups: free reduction is the normal form."""

    kind = "free"

    def reduce(self, word: str) -> str:
        return words.free_reduce(word)

    def canonical(self, word: str) -> str:
        return words.free_reduce(word)


@lru_cache(maxsize=32)
def get_solver(presentation: Presentation) -> WordProblemSolver:
    """Pick the solver for a presentation: free, Dehn, or completed rewriting."""
    if presentation.is_free:
        return FreeSolver(presentation)
    if presentation.dehn_flag:
        from laminadesk.presentation.dehn import DehnSolver

        return DehnSolver(presentation)

    from laminadesk.presentation.rewriting import RewritingSolver

    solver = RewritingSolver(presentation)
    logger.info(f"🔍 Completed rewriting system with {len(solver.rules)} rules")
    return solver


def require_dehn(presentation: Presentation) -> None:
    """Reject presentations that are neither free nor Dehn."""
    if not presentation.is_free and not presentation.dehn_flag:
        raise PreconditionError("dehn flag unset for this presentation")
