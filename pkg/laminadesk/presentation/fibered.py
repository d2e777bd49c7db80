"""Monodromy action and normal forms in fibered groups.

The group is fiber x Z with stable letter t and t x t^-1 = mu(x). Every word
has a unique normal form t^k u with u a word in the fiber, reduced by the
fiber's solver.
"""

import logging

from laminadesk.config import Config
from laminadesk.errors import CapacityError, ParseError, PreconditionError
from laminadesk.presentation import words
from laminadesk.presentation.dehn import are_conjugate
from laminadesk.presentation.models import Automorphism, FiberedPresentation, Word
from laminadesk.presentation.solver import get_solver

logger = logging.getLogger(__name__)


def apply_automorphism(mu: Automorphism, w: Word | str) -> Word:
    """Substitute generator images and freely reduce."""
    letters = w.letters if isinstance(w, Word) else w
    for ch in letters:
        if ch.lower() not in mu.images:
            raise ParseError(f"unknown symbol {ch!r} for automorphism")
    return Word(words.substitute(letters, mu.images))


def apply_power(mu: Automorphism, w: str, k: int, cap: int | None = None) -> str:
    """mu^k(w) as a freely reduced string; negative k uses the inverse."""
    images = mu.images if k >= 0 else mu.inverse().images
    for _ in range(abs(k)):
        w = words.substitute(w, images)
        if cap is not None and len(w) > cap:
            raise CapacityError(f"level word longer than {cap} letters")
    return w


class FiberedGroup:
    """Normal forms and level words for a fibered presentation."""

    def __init__(self, fibered: FiberedPresentation):
        self.fibered = fibered
        self.mu = fibered.monodromy
        self.mu_inv = fibered.monodromy.inverse()
        self.solver = get_solver(fibered.fiber)
        self.t = fibered.stable_letter
        self.T = fibered.stable_letter.upper()
        self._level_cache: dict[tuple[str, int], str] = {}

    @property
    def fiber(self):
        return self.fibered.fiber

    def normal_form(self, w: Word | str) -> tuple[int, Word]:
        """Return (k, u) with w = t^k u, u reduced in the fiber."""
        letters = w.letters if isinstance(w, Word) else w
        k, u = 0, ""
        for ch in letters:
            if ch == self.t:
                k, u = k + 1, words.substitute(u, self.mu_inv.images)
            elif ch == self.T:
                k, u = k - 1, words.substitute(u, self.mu.images)
            elif ch.lower() in self.mu.images:
                u = words.free_reduce(u + ch)
            else:
                raise ParseError(f"unknown symbol {ch!r} in fibered word")
        return k, Word(self.solver.reduce(u))

    def to_word(self, k: int, u: str) -> str:
        stem = self.t * k if k >= 0 else self.T * -k
        return stem + u

    def level_word(self, c: str, k: int, cap: int = Config.LEVEL_WORD_CAP) -> str:
        """Fiber word read by a loop at level k representing the class c.

        A loop at level k reading w represents mu^k(w), so the word at level
        k is mu^-k(c), reduced in the fiber.
        """
        key = (c, k)
        if key not in self._level_cache:
            if k == 0:
                w = c
            else:
                step = 1 if k > 0 else -1
                prev = self.level_word(c, k - step, cap)
                images = self.mu_inv.images if k > 0 else self.mu.images
                w = words.substitute(prev, images)
                if len(w) > cap:
                    raise CapacityError(f"level {k} word exceeds {cap} letters")
            self._level_cache[key] = self.solver.reduce(w)
        return self._level_cache[key]

    def is_identity(self, w: str) -> bool:
        k, u = self.normal_form(w)
        return k == 0 and u.is_empty

    def verify(self) -> None:
        """Check that the monodromy and its inverse define an automorphism."""
        for gen in self.fiber.alphabet.names:
            if not self.solver.equal(words.substitute(words.substitute(gen, self.mu_inv.images), self.mu.images), gen):
                raise PreconditionError(f"monodromy inverse is wrong on {gen!r}")
            if not self.solver.equal(words.substitute(words.substitute(gen, self.mu.images), self.mu_inv.images), gen):
                raise PreconditionError(f"monodromy inverse is wrong on {gen!r}")
        for rel in self.fiber.relators:
            image = words.cyclic_reduce(words.substitute(rel, self.mu.images))
            ok = any(
                are_conjugate(self.fiber, image, target)[0]
                for target in (rel, words.inverse(rel))
            )
            if not ok:
                raise PreconditionError(f"monodromy does not preserve relator {rel!r}")
        logger.info(f"✅ Monodromy verified on {len(self.fiber.alphabet.names)} generators")


def normal_form(fibered: FiberedPresentation, w: Word | str) -> tuple[int, Word]:
    return FiberedGroup(fibered).normal_form(w)
