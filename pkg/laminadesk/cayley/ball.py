"""Breadth-first balls of the Cayley graph.

Vertices are discovered in shortlex order, so the first word reaching a
vertex is its shortlex-least geodesic. Elements are identified exactly: by
normal form when the solver has one, otherwise inside a bucket (exponent
sums, plus the model fingerprint of g(i) for surface groups) with a Dehn
equality check against every bucket member.
"""

import logging
from collections import defaultdict
from itertools import product

import networkx as nx
import numpy as np

from laminadesk.cayley.models import Ball
from laminadesk.config import effective_cap
from laminadesk.errors import CapacityError, UncertifiedError
from laminadesk.presentation import words
from laminadesk.presentation.models import Presentation
from laminadesk.presentation.solver import get_solver

logger = logging.getLogger(__name__)


class BallLocator:
    """Maps words to vertex ids of a ball under construction."""

    def __init__(self, presentation: Presentation):
        self.presentation = presentation
        self.solver = get_solver(presentation)
        self.names = presentation.alphabet.names
        self.exact = self.solver.canonical("") is not None
        self.homological = all(
            not any(words.abelianization(rel, self.names)) for rel in presentation.relators
        )
        self.surface = None
        if not self.exact and presentation.genus:
            from laminadesk.surface.geometry import build_surface

            self.surface = build_surface(presentation)
        self._index: dict = {}
        self._buckets: dict = defaultdict(list)
        self._words: list[str] = []
        self._cache: dict[str, int | None] = {}

    def _matrix(self, word: str) -> np.ndarray:
        m = np.eye(2)
        for ch in word:
            m = m @ self.surface.matrices[ch]
        return m

    def _keys(self, word: str) -> list:
        """Candidate bucket keys; the first is the word's own bucket."""
        base = words.abelianization(word, self.names) if self.homological else ()
        if self.surface is None:
            return [base]
        from laminadesk.surface.geometry import fingerprint

        fx, fy = fingerprint(self._matrix(word))
        own = (base, fx, fy)
        near = [(base, fx + dx, fy + dy) for dx, dy in product((-1, 0, 1), repeat=2) if dx or dy]
        return [own, *near]

    def add(self, word: str) -> int:
        vid = len(self._words)
        self._words.append(word)
        if self.exact:
            self._index[self.solver.canonical(word)] = vid
        else:
            self._buckets[self._keys(word)[0]].append(vid)
        self._cache[word] = vid
        return vid

    def locate(self, word: str) -> int | None:
        word = words.free_reduce(word)
        if word in self._cache:
            return self._cache[word]
        if self.exact:
            found = self._index.get(self.solver.canonical(word))
        else:
            reduced = self.solver.reduce(word)
            found = None
            for key in self._keys(reduced):
                for vid in self._buckets.get(key, ()):
                    if self.solver.equal(reduced, self._words[vid]):
                        found = vid
                        break
                if found is not None:
                    break
        self._cache[word] = found
        return found

    def forget_misses(self) -> None:
        """Drop cached misses; they become stale as the ball grows."""
        self._cache = {w: v for w, v in self._cache.items() if v is not None}


def build_ball(presentation: Presentation, radius: int, cap: int | None = None) -> Ball:
    """Ball of the given radius around the identity."""
    cap = effective_cap(cap)
    locator = BallLocator(presentation)
    letters = presentation.alphabet.letters

    ball_words = [""]
    dist = [0]
    neighbours: list[dict[str, int]] = [{}]
    locator.add("")
    frontier = [0]

    for d in range(radius):
        nxt = []
        for v in frontier:
            w = ball_words[v]
            for s in letters:
                if s in neighbours[v]:
                    continue
                cand = words.free_reduce(w + s)
                u = locator.locate(cand)
                if u is None:
                    if len(ball_words) >= cap:
                        raise CapacityError(
                            f"ball of radius {radius} exceeds the vertex cap {cap}"
                        )
                    u = locator.add(cand)
                    ball_words.append(cand)
                    dist.append(d + 1)
                    neighbours.append({})
                    nxt.append(u)
                neighbours[v][s] = u
                neighbours[u][s.swapcase()] = v
        locator.forget_misses()
        frontier = nxt
        logger.debug(f"sphere {d + 1}: {len(nxt)} vertices")

    # close edges inside the outer sphere
    for v in frontier:
        w = ball_words[v]
        for s in letters:
            if s in neighbours[v]:
                continue
            u = locator.locate(w + s)
            if u is not None:
                neighbours[v][s] = u
                neighbours[u][s.swapcase()] = v

    ball = Ball(presentation, radius, ball_words, dist, neighbours, locator)
    logger.info(f"✅ Ball of radius {radius}: {len(ball)} vertices, spheres {ball.sphere_sizes()}")
    return ball


def geodesic(ball: Ball, u: str, v: str) -> list[tuple[str, str, str]]:
    """Shortlex-least geodesic edge path from u to v as (vertex, letter, vertex) triples.

    Certified when |u| + |v| + d(u, v) <= 2R, so every vertex of the path and
    every competitor lies in the ball.
    """
    lu, lv = ball.word_length(u), ball.word_length(v)
    step = ball.locate(words.inverse(u) + v)
    if lu is None or lv is None or step is None or lu + lv + ball.dist[step] > 2 * ball.radius:
        raise UncertifiedError("uncertified: endpoints too near boundary")
    label = ball.words[step]
    path = []
    cur = words.free_reduce(u)
    for s in label:
        nxt = words.free_reduce(cur + s)
        path.append((cur, s, nxt))
        cur = nxt
    return path


def distance(ball: Ball, u: str, v: str) -> int | None:
    return ball.word_length(words.inverse(u) + v)


def to_networkx(ball: Ball) -> nx.Graph:
    g = nx.Graph()
    for v, (w, d) in enumerate(zip(ball.words, ball.dist)):
        g.add_node(v, word=w, dist=d)
    for v, s, u in ball.edges():
        g.add_edge(v, u, label=s)
    return g


def edge_lines(ball: Ball) -> list[str]:
    """Adjacency export, one `u s v` line per edge with vertices as words."""
    return [f"{ball.words[v] or 'e'} {s} {ball.words[u] or 'e'}" for v, s, u in ball.edges()]


def oracle_is_identity(ball: Ball, word: str) -> bool:
    """Decide w = e for |w| <= 2R by meeting in the middle.

    Writing w = u.v with |u|, |v| <= R, w is trivial iff u and v^-1 are the
    same vertex of the ball.
    """
    w = words.free_reduce(word)
    if len(w) > 2 * ball.radius:
        raise UncertifiedError(f"word of length {len(w)} exceeds twice the ball radius")
    h = len(w) // 2
    left, right = ball.locate(w[:h]), ball.locate(words.inverse(w[h:]))
    return left is not None and left == right


def word_problem_suite(presentation: Presentation, ball: Ball, n_words: int, max_length: int, seed: int = 0) -> list[dict]:
    """Compare the Dehn identity verdict with the ball oracle on random words.

    A fifth of the words are planted relator rotations, the rest uniform
    reduced words, so both verdicts occur.
    """
    rng = np.random.default_rng(seed)
    solver = get_solver(presentation)
    letters = presentation.alphabet.letters
    planted = [r for rel in presentation.relators for r in words.rotations(rel) + words.rotations(words.inverse(rel))]
    planted = [r for r in planted if len(r) <= max_length]
    rows = []
    for i in range(n_words):
        if planted and rng.random() < 0.2:
            w = planted[int(rng.integers(len(planted)))]
        else:
            w = words.random_reduced_word(rng, letters, int(rng.integers(1, max_length + 1)))
        dehn = solver.is_identity(w)
        oracle = oracle_is_identity(ball, w)
        rows.append({"instance": i, "word": w, "dehn": dehn, "oracle": oracle, "agree": dehn == oracle})
    return rows
