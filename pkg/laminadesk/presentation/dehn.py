"""Dehn's algorithm, conjugacy minimisation and half-relator swaps."""

import logging
from collections import deque
from dataclasses import dataclass, field

from laminadesk.config import Config
from laminadesk.errors import PreconditionError
from laminadesk.presentation import words
from laminadesk.presentation.models import CyclicWord, Face, Presentation, Word
from laminadesk.presentation.solver import WordProblemSolver, get_solver, require_dehn

logger = logging.getLogger(__name__)


def symmetrize(relators) -> list[str]:
    """All rotations of every relator and of its inverse, sorted."""
    out = set()
    for rel in relators:
        out.update(words.rotations(rel))
        out.update(words.rotations(words.inverse(rel)))
    return sorted(out)


def small_cancellation_violations(relators) -> list[tuple[str, str]]:
    """Pieces of length >= |r|/6, as (piece, relator) pairs."""
    sym = symmetrize(relators)
    bad = []
    for i, r1 in enumerate(sym):
        for r2 in sym[i + 1 :]:
            k = 0
            while k < min(len(r1), len(r2)) and r1[k] == r2[k]:
                k += 1
            if k == 0:
                continue
            for rel in (r1, r2):
                if 6 * k >= len(rel):
                    bad.append((rel[:k], rel))
    return bad


@dataclass
class ConjugacyResult:
    """Outcome of conjugacy minimisation.

    `conjugator` x satisfies x . input . x^-1 = word in the group, reading
    `word` as a linear word. `representatives` maps each minimal cyclic
    representative found (canonical rotation) to its own conjugator.
    """

    word: CyclicWord
    conjugator: str
    certified: bool
    representatives: dict[str, str] = field(default_factory=dict)
    faces: list[Face] = field(default_factory=list)
    swap_paths: dict[str, list[Face]] = field(default_factory=dict)
    truncated: bool = False


class DehnSolver(WordProblemSolver):
    """Dehn's algorithm for C'(1/6) presentations."""

    kind = "dehn"

    def __init__(self, presentation: Presentation):
        super().__init__(presentation)
        self.symmetrized = symmetrize(presentation.relators)
        self.rules: dict[str, tuple[str, str]] = {}
        self.half_rules: dict[str, list[tuple[str, str]]] = {}
        for rel in self.symmetrized:
            n = len(rel)
            for k in range(n // 2 + 1, n + 1):
                self.rules.setdefault(rel[:k], (words.inverse(rel[k:]), rel))
            if n % 2 == 0:
                half = rel[: n // 2]
                swap = words.inverse(rel[n // 2 :])
                self.half_rules.setdefault(half, []).append((swap, rel))
        self.lengths = sorted({len(k) for k in self.rules}, reverse=True)
        self.half_lengths = sorted({len(k) for k in self.half_rules})

    def _find(self, w: str) -> tuple[int, str] | None:
        for i in range(len(w)):
            for k in self.lengths:
                if i + k <= len(w) and w[i : i + k] in self.rules:
                    return i, w[i : i + k]
        return None

    def reduce(self, word: str, trace: list[Face] | None = None) -> str:
        w = words.free_reduce(word)
        while True:
            hit = self._find(w)
            if hit is None:
                return w
            i, sub = hit
            rep, rel = self.rules[sub]
            if trace is not None:
                trace.append(Face(relator=rel, removed=sub, inserted=rep, kind="dehn"))
            w = words.free_reduce(w[:i] + rep + w[i + len(sub) :])

    def cyclic_shorten(self, w: str) -> tuple[str, str, Face] | None:
        """One Dehn step on a cyclic word.

        Returns (new_word, u, face) where the new word equals
        u . w . u^-1 in the group, or None when no subword exceeds half a
        relator anywhere around the cycle.
        """
        m = len(w)
        for i in range(m):
            for k in self.lengths:
                if k > m:
                    continue
                sub = words.cyclic_subword(w, i, k)
                if sub in self.rules:
                    rep, rel = self.rules[sub]
                    rotated = w[i:] + w[:i]
                    core, y = words.cyclic_reduce_with_conjugator(rep + rotated[k:])
                    u = words.free_reduce(y + words.inverse(w[:i]))
                    return core, u, Face(rel, sub, rep, "dehn")
        return None

    def half_swaps(self, w: str) -> list[tuple[str, str, Face]]:
        """Equal-length neighbours of a cyclic word under half-relator swaps."""
        out = []
        m = len(w)
        for i in range(m):
            for k in self.half_lengths:
                if k > m:
                    continue
                sub = words.cyclic_subword(w, i, k)
                for rep, rel in self.half_rules.get(sub, ()):
                    rotated = w[i:] + w[:i]
                    core, y = words.cyclic_reduce_with_conjugator(rep + rotated[k:])
                    if len(core) != m:
                        continue
                    u = words.free_reduce(y + words.inverse(w[:i]))
                    out.append((core, u, Face(rel, sub, rep, "swap")))
        return out


def reduce(w: Word | str, mode: str = "free") -> Word | CyclicWord:
    """Free or cyclic reduction of a word."""
    letters = w.letters if isinstance(w, Word) else w
    if str(mode) == "cyclic":
        return CyclicWord.of(letters)
    return Word(words.free_reduce(letters))


def dehn_reduce(presentation: Presentation, w: Word | str, trace: list[Face] | None = None) -> Word:
    """Dehn's algorithm; the result is empty iff w is trivial."""
    if not presentation.dehn_flag:
        raise PreconditionError("dehn_reduce needs a presentation with the dehn flag set")
    letters = w.letters if isinstance(w, Word) else w
    solver: DehnSolver = get_solver(presentation)
    return Word(solver.reduce(letters, trace))


def _canonical_rotation(w: str, x: str) -> tuple[str, str]:
    """Least rotation of w with the conjugator updated to match."""
    if not w:
        return "", x
    best = min(range(len(w)), key=lambda i: w[i:] + w[:i])
    return w[best:] + w[:best], words.free_reduce(words.inverse(w[:best]) + x)


def minimal_representatives(
    solver: DehnSolver, w: str, x: str, cap: int = Config.MAX_HALF_SWAP_REPS
) -> tuple[dict[str, tuple[str, list[Face]]], tuple[str, str, Face, list[Face]] | None, bool]:
    """Closure of a cyclic word under half-relator swaps.

    Returns (reps, shortening, truncated). `reps` maps canonical rotations
    to (conjugator, swap faces along the path from w). If some member of the
    closure admits a Dehn step, `shortening` is that step expressed on the
    input conjugator and the walk stops early.
    """
    w0, x0 = _canonical_rotation(w, x)
    reps: dict[str, tuple[str, list[Face]]] = {w0: (x0, [])}
    queue = deque([w0])
    while queue:
        cur = queue.popleft()
        cx, path = reps[cur]
        step = solver.cyclic_shorten(cur)
        if step is not None:
            new, u, face = step
            return reps, (new, words.free_reduce(u + cx), face, path), False
        for nxt, u, face in solver.half_swaps(cur):
            canon, nx = _canonical_rotation(nxt, words.free_reduce(u + cx))
            if canon in reps:
                continue
            if len(reps) >= cap:
                return reps, None, True
            reps[canon] = (nx, path + [face])
            queue.append(canon)
    return reps, None, False


def conjugacy_minimal(presentation: Presentation, c: CyclicWord | str, oracle=None) -> ConjugacyResult:
    """Minimal cyclic representative of a conjugacy class.

    Rotations and Dehn steps shrink the word; once no rotation shrinks, the
    closure under half-relator swaps is searched for a further Dehn step.
    With an `oracle` (a ball exposing `certifies_minimal`) the result is
    checked against all short conjugates.
    """
    require_dehn(presentation)
    letters = c.letters if isinstance(c, CyclicWord) else c
    core, x = words.cyclic_reduce_with_conjugator(letters)

    if presentation.is_free:
        canon, cx = _canonical_rotation(core, x)
        reps = {canon: cx}
        return ConjugacyResult(CyclicWord(canon), cx, True, reps)

    solver: DehnSolver = get_solver(presentation)
    faces: list[Face] = []
    truncated = False
    while True:
        step = solver.cyclic_shorten(core)
        if step is not None:
            core, u, face = step
            x = words.free_reduce(u + x)
            faces.append(face)
            continue
        closure, shortening, truncated = minimal_representatives(solver, core, x)
        if shortening is None:
            break
        core, x, face, path = shortening
        faces.extend(path)
        faces.append(face)

    canon, cx = _canonical_rotation(core, x)
    reps = {w: rx for w, (rx, _) in closure.items()}
    paths = {w: path for w, (_, path) in closure.items()}
    certified = False
    if oracle is not None:
        certified = oracle.certifies_minimal(canon)
    if truncated:
        logger.warning(f"⚠️ half-swap closure of {canon} truncated at {len(reps)} representatives")
    return ConjugacyResult(CyclicWord(canon), cx, certified, reps, faces, paths, truncated)


def are_conjugate(presentation: Presentation, u: str, v: str) -> tuple[bool, str]:
    """Decide conjugacy by comparing minimal representative closures.

    Returns (conjugate, y) with y . u . y^-1 = v when conjugate.
    """
    ru = conjugacy_minimal(presentation, u)
    rv = conjugacy_minimal(presentation, v)
    for canon, xu in ru.representatives.items():
        if canon in rv.representatives:
            xv = rv.representatives[canon]
            return True, words.free_reduce(words.inverse(xv) + xu)
    return False, ""
