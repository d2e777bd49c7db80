from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from laminadesk.presentation.models import FiberedPresentation, Presentation
from laminadesk.reports.models import ConstantEntry


@dataclass
class Ball:
    """Radius-R ball of the Cayley graph around the identity.

    Vertex 0 is the identity; `words[v]` is the shortlex-least geodesic word
    of v and `dist[v]` its length. `neighbours[v][s]` is the vertex v.s
    when it lies in the ball.
    """

    presentation: Presentation
    radius: int
    words: list[str]
    dist: list[int]
    neighbours: list[dict[str, int]]
    locator: object = field(repr=False, default=None)  # BallLocator from cayley.ball

    root: int = 0

    def __len__(self):
        return len(self.words)

    def locate(self, word: str) -> Optional[int]:
        """Vertex id of the element a word represents, or None outside the ball."""
        return self.locator.locate(word)

    def word_length(self, word: str) -> Optional[int]:
        v = self.locate(word)
        return None if v is None else self.dist[v]

    def sphere_sizes(self) -> list[int]:
        sizes = [0] * (self.radius + 1)
        for d in self.dist:
            sizes[d] += 1
        return sizes

    def edges(self):
        """Each undirected edge once, labelled by its positive letter."""
        for v, nbrs in enumerate(self.neighbours):
            for s, u in nbrs.items():
                if s.islower():
                    yield v, s, u

    def certifies_minimal(self, cyclic_word: str) -> bool:
        """No conjugate by an element of the inner ball is shorter.

        Conjugators x with 2|x| + n <= R are checked, so every conjugate is
        located exactly.
        """
        n = len(cyclic_word)
        reach = (self.radius - n) // 2
        if reach < 1:
            return False
        for x, d in zip(self.words, self.dist):
            if d > reach:
                break
            length = self.word_length(x + cyclic_word + x[::-1].swapcase())
            if length is not None and length < n:
                return False
        return True


@dataclass
class QuotientBall:
    """Radius-R ball of the quotient 1-skeleton around the base vertex.

    For a fibered presentation the vertices are the stable-letter levels
    |k| <= R, every level carries one loop per fiber generator, and t-edges
    join consecutive levels. With `fibered` unset the subgroup is trivial
    and the quotient is the Cayley ball itself.
    """

    radius: int
    fibered: Optional[FiberedPresentation] = None
    ball: Optional[Ball] = None
    basepoint: int = 0

    @property
    def subgroup(self) -> str:
        return "fiber" if self.fibered is not None else "trivial"

    @property
    def levels(self) -> list[int]:
        return list(range(-self.radius, self.radius + 1))

    def edges(self) -> list[tuple[int, str, int]]:
        if self.fibered is None:
            return list(self.ball.edges()) if self.ball is not None else []
        out = []
        t = self.fibered.stable_letter
        for k in self.levels:
            for s in self.fibered.fiber.alphabet.names:
                out.append((k, s, k))
            if k < self.radius:
                out.append((k, t, k + 1))
        return out


@dataclass
class EdgeLoop:
    """Closed edge path at a base vertex reading a word."""

    level: int
    word: str
    level_lengths: dict[int, int] = field(default_factory=dict)
    pruned: list[int] = field(default_factory=list)
    periodic: Optional[int] = None

    def __len__(self):
        return len(self.word)


@dataclass
class HyperbolicityEstimate:
    delta: Fraction
    radius_used: int
    method: str  # "exhaustive" or "sampled"
    triangles: int
    uncertified: int = 0
    four_point: Optional[float] = None
    witness: Optional[tuple[str, str]] = None

    def as_dict(self) -> dict:
        return {
            "delta": float(self.delta),
            "delta_exact": str(self.delta),
            "radius_used": self.radius_used,
            "method": self.method,
            "triangles": self.triangles,
            "uncertified": self.uncertified,
            "four_point": self.four_point,
            "witness": list(self.witness) if self.witness else None,
        }


@dataclass
class ConstantsLedger:
    """Fitted constants, each with the inequality it was fitted to."""

    entries: dict[str, ConstantEntry] = field(default_factory=dict)

    def record(self, entry: ConstantEntry) -> ConstantEntry:
        self.entries[entry.name] = entry
        return entry

    def value(self, name: str) -> Optional[float]:
        entry = self.entries.get(name)
        return None if entry is None else entry.value

    def __contains__(self, name: str):
        return name in self.entries
