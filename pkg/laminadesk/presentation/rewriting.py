"""Shortlex Knuth-Bendix completion for presentations without the dehn flag."""

import heapq
import logging
from itertools import count

from laminadesk.config import Config
from laminadesk.errors import PreconditionError
from laminadesk.presentation import words
from laminadesk.presentation.models import Presentation
from laminadesk.presentation.solver import WordProblemSolver

logger = logging.getLogger(__name__)


class RewritingSolver(WordProblemSolver):
    """Confluent shortlex rewriting system; normal forms are shortlex geodesics."""

    kind = "rewriting"

    def __init__(self, presentation: Presentation, max_rules: int = Config.KB_MAX_RULES):
        super().__init__(presentation)
        self.max_rules = max_rules
        self.key = presentation.alphabet.shortlex_key
        self.rules: dict[str, str] = {}
        self._complete()

    def _rewrite(self, rules: dict[str, str], w: str) -> str:
        changed = True
        while changed:
            changed = False
            for lhs, rhs in rules.items():
                idx = w.find(lhs)
                if idx >= 0:
                    w = w[:idx] + rhs + w[idx + len(lhs) :]
                    changed = True
                    break
        return w

    @staticmethod
    def _critical_pairs(l1: str, r1: str, l2: str, r2: str):
        for k in range(1, min(len(l1), len(l2))):
            if l1[-k:] == l2[:k]:
                yield r1 + l2[k:], l1[:-k] + r2

    def _complete(self):
        # free cancellation is confluent on its own
        for ch in self.presentation.alphabet.letters:
            self.rules[ch + ch.swapcase()] = ""
        pending: list[tuple[int, int, str, str]] = []
        order = count()

        def push(u: str, v: str):
            heapq.heappush(pending, (len(u) + len(v), next(order), u, v))

        for rel in self.presentation.relators:
            push(rel, "")

        processed = 0
        budget = self.max_rules * self.max_rules * Config.KB_MAX_PASSES
        while pending:
            processed += 1
            if processed > budget:
                raise PreconditionError("rewriting completion did not converge")
            _, _, u, v = heapq.heappop(pending)
            u, v = self._rewrite(self.rules, u), self._rewrite(self.rules, v)
            if u == v:
                continue
            if self.key(u) < self.key(v):
                u, v = v, u

            for lhs, rhs in list(self.rules.items()):
                if u in lhs:
                    del self.rules[lhs]
                    push(lhs, rhs)
            self.rules[u] = v
            for lhs in list(self.rules):
                self.rules[lhs] = self._rewrite(
                    {k: r for k, r in self.rules.items() if k != lhs}, self.rules[lhs]
                )
            if len(self.rules) > self.max_rules:
                raise PreconditionError(
                    f"rewriting system exceeded {self.max_rules} rules; set the dehn flag "
                    f"or supply a presentation with a finite shortlex system"
                )
            for lhs, rhs in list(self.rules.items()):
                for pair in self._critical_pairs(u, v, lhs, rhs):
                    push(*pair)
                if lhs != u:
                    for pair in self._critical_pairs(lhs, rhs, u, v):
                        push(*pair)

        # shortest rules first keeps rewriting deterministic
        self.rules = dict(sorted(self.rules.items(), key=lambda kv: self.key(kv[0])))

    def reduce(self, word: str) -> str:
        return self._rewrite(self.rules, words.free_reduce(word))

    def canonical(self, word: str) -> str:
        return self.reduce(word)
