"""Adapted maps, shortcuts, iteration states, loop partitions and drift results.

Positions along a branch image are the vertex ties 0..|phi(b)|; letter i of
the image sits between ties i and i + 1. A train path step is a branch and
a direction, +1 from end 0 to end 1.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil

from laminadesk.cayley.models import EdgeLoop
from laminadesk.ending.metric import PathMetric
from laminadesk.ending.thresholds import circular_runs
from laminadesk.errors import PreconditionError
from laminadesk.presentation import words
from laminadesk.traintrack.models import HalfBranch, Pullback, TrainTrack, opposite

Step = tuple[str, int]
# One image letter: (branch, index, direction it is read in)
Letter = tuple[str, int, int]


@dataclass
class AdaptedMap:
    """Branch images of a train track as edge-paths in the target.

    Every switch goes to the single vertex of the target, so images compose
    at every switch. A map pulled back to a splitting keeps the letters of
    the old images, so a new branch may backtrack until it is tightened.
    `tight[b]` records that the image of b is a certified minimal edge-path
    (for a closed branch, a certified minimal loop).
    """

    track: TrainTrack
    metric: PathMetric
    images: dict[str, str]
    tight: dict[str, bool] = field(default_factory=dict)

    def __post_init__(self):
        missing = sorted(set(self.track.branches) - set(self.images))
        if missing:
            raise PreconditionError(f"adapted map needs an image for every branch; missing {missing}")
        alphabet = self.metric.presentation.alphabet
        for b, image in self.images.items():
            alphabet.check(image)
            if self.track.is_closed(b) and not words.cyclic_reduce(image):
                raise PreconditionError(f"closed branch {b} maps to a null-homotopic loop")

    @classmethod
    def from_track(cls, track: TrainTrack, metric: PathMetric, images: dict[str, str] | None = None) -> "AdaptedMap":
        """Images default to the track's chart words, freely reduced."""
        source = images if images is not None else track.words
        return cls(track, metric, {b: words.free_reduce(w) for b, w in source.items() if b in track.branches})

    def length(self, branch: str) -> int:
        return len(self.images[branch])

    @property
    def lengths(self) -> dict[str, Fraction]:
        return {b: Fraction(len(w)) for b, w in self.images.items()}

    @property
    def open_branches(self) -> list[str]:
        return [b for b in sorted(self.track.branches) if not self.track.is_closed(b)]

    def synced_track(self) -> TrainTrack:
        """The track with branch lengths equal to image lengths."""
        return self.track.replace(lengths=self.lengths)

    def segment(self, branch: str, i: int, j: int) -> str:
        """Image read from tie i to tie j; backwards when j < i."""
        w = self.images[branch]
        return w[i:j] if i <= j else words.inverse(w[j:i])

    def letters(self, branch: str, i: int, j: int) -> list[Letter]:
        if i <= j:
            return [(branch, k, 1) for k in range(i, j)]
        return [(branch, k, -1) for k in range(i - 1, j - 1, -1)]

    def continuations(self, step: Step) -> list[Step]:
        """Steps that follow `step` through the switch ahead of it."""
        branch, direction = step
        if self.track.is_closed(branch):
            return []
        switch, side, _ = self.track.attachment(HalfBranch(branch, 1 if direction > 0 else 0))
        return [
            (half.branch, 1 if half.end == 0 else -1)
            for half in self.track.switches[switch].side(opposite(side))
        ]

    def path_image(self, steps: list[Step]) -> str:
        return "".join(self.segment(b, 0, self.length(b)) if d > 0 else self.segment(b, self.length(b), 0) for b, d in steps)

    def check_path(self, steps: list[Step], closed: bool = False) -> None:
        """Raise unless consecutive steps continue through switches."""
        pairs = list(zip(steps, steps[1:]))
        if closed and steps:
            pairs.append((steps[-1], steps[0]))
        for a, b in pairs:
            if b not in self.continuations(a):
                raise PreconditionError(f"{b[0]} does not continue {a[0]} through a switch")

    def pulled_back(self, track: TrainTrack, pullback: Pullback) -> "AdaptedMap":
        """The same map on a splitting of this track, read through the pullback's pieces.

        A piece boundary at a non-integral tie is rounded up to the next
        vertex tie, the same way on both sides, so the letters of every old
        branch are shared out exactly.
        """
        images = {}
        for name, pieces in pullback.pieces.items():
            parts = []
            for old, x0, x1, d in pieces:
                sub = self.images[old][ceil(x0) : ceil(x1)]
                parts.append(sub if d > 0 else words.inverse(sub))
            images[name] = "".join(parts)
        return AdaptedMap(track, self.metric, images)

    def letter_map(self, pullback: Pullback) -> dict[str, list[Letter]]:
        """For each branch of the splitting, the letters of this map it reads, in order."""
        out = {}
        for name, pieces in pullback.pieces.items():
            run = []
            for old, x0, x1, d in pieces:
                a, z = ceil(x0), ceil(x1)
                run += self.letters(old, a, z) if d > 0 else self.letters(old, z, a)
            out[name] = run
        return out

    def replace(self, **changes) -> "AdaptedMap":
        data = {"track": self.track, "metric": self.metric, "images": self.images, "tight": self.tight}
        data.update(changes)
        return AdaptedMap(**data)

    def as_dict(self) -> dict:
        return {
            b: {"image": w, "length": len(w), "tight": self.tight.get(b, False)}
            for b, w in sorted(self.images.items())
        }


@dataclass(frozen=True)
class Shortcut:
    """A train-path arc between vertex ties whose image can be replaced by a path of length <= eps.

    `start` is a tie of the first branch and `end` a tie of the last, in
    each branch's own coordinates. An arc inside a closed branch may run
    past the end of the image; its `end` is then larger than the length.
    `certified` says the replacement is a certified geodesic; equality of
    image and replacement is always exact.
    """

    steps: tuple[Step, ...]
    start: int
    end: int
    image: str
    replacement: str
    certified: bool = True

    @property
    def switches(self) -> int:
        return len(self.steps) - 1

    @property
    def image_length(self) -> int:
        return len(self.image)

    @property
    def straightened_length(self) -> int:
        return len(self.replacement)

    def spans(self, m: AdaptedMap) -> list[tuple[str, int, int, int]]:
        """(branch, from tie, to tie, direction) for each step."""
        out = []
        last = len(self.steps) - 1
        for k, (b, d) in enumerate(self.steps):
            n = m.length(b)
            a = self.start if k == 0 else (0 if d > 0 else n)
            z = self.end if k == last else (n if d > 0 else 0)
            out.append((b, a, z, d))
        return out

    def rectangle(self, m: AdaptedMap) -> "Rectangle":
        intervals = []
        for b, a, z, _ in self.spans(m):
            n = m.length(b)
            lo, hi = min(a, z), max(a, z)
            if m.track.is_closed(b) and hi > n:
                intervals += [(b, lo, n), (b, 0, hi - n)]
            else:
                intervals.append((b, lo, hi))
        crossed = set()
        for b, d in self.steps[:-1]:
            switch, _, _ = m.track.attachment(HalfBranch(b, 1 if d > 0 else 0))
            crossed.add(switch)
        return Rectangle(tuple(intervals), frozenset(crossed))

    def letters(self, m: AdaptedMap) -> list[Letter]:
        out = []
        for b, a, z, d in self.spans(m):
            n = m.length(b)
            if m.track.is_closed(b) and z > n:
                out += [(b, k % n, 1) for k in range(a, z)]
            else:
                out += m.letters(b, a, z)
        return out

    def endpoints(self, m: AdaptedMap) -> tuple[tuple[str, int], tuple[str, int]]:
        spans = self.spans(m)
        first, last = spans[0], spans[-1]
        end = last[2] % m.length(last[0]) if m.track.is_closed(last[0]) and m.length(last[0]) else last[2]
        return (first[0], first[1]), (last[0], end)

    def as_dict(self) -> dict:
        return {
            "steps": [f"{b}{'+' if d > 0 else '-'}" for b, d in self.steps],
            "start": self.start,
            "end": self.end,
            "image": self.image,
            "replacement": self.replacement,
            "switches": self.switches,
            "certified": self.certified,
        }


@dataclass(frozen=True)
class Rectangle:
    """The ties a shortcut meets: branch intervals plus the switches it crosses."""

    intervals: tuple[tuple[str, int, int], ...]
    switches: frozenset[str] = frozenset()

    def overlaps(self, other: "Rectangle") -> bool:
        if self.switches & other.switches:
            return True
        return any(
            b1 == b2 and max(lo1, lo2) < min(hi1, hi2)
            for b1, lo1, hi1 in self.intervals
            for b2, lo2, hi2 in other.intervals
        )

    def contains_interior(self, m: AdaptedMap, point: tuple[str, int]) -> bool:
        branch, x = point
        if any(b == branch and lo < x < hi for b, lo, hi in self.intervals):
            return True
        if m.track.is_closed(branch) or x not in (0, m.length(branch)):
            return False
        switch, _, _ = m.track.attachment(HalfBranch(branch, 0 if x == 0 else 1))
        return switch in self.switches


@dataclass
class ShortcutSearch:
    """Shortcuts found by one enumeration; `truncated` when the enumeration bound was hit."""

    shortcuts: list[Shortcut] = field(default_factory=list)
    eps: int = 0
    bound: int = 1
    max_image: int = 0
    arcs_examined: int = 0
    truncated: bool = False

    def __iter__(self):
        return iter(self.shortcuts)

    def __len__(self):
        return len(self.shortcuts)

    def __getitem__(self, i):
        return self.shortcuts[i]

    @property
    def max_image_length(self) -> int:
        return max((s.image_length for s in self.shortcuts), default=0)


@dataclass
class ShortcutFamily:
    """A maximal shortcut family, the splitting that isolates it, and the straightened map."""

    family: list[Shortcut]
    moves: list = field(default_factory=list)
    split_map: AdaptedMap | None = None
    map: AdaptedMap | None = None
    pullback: Pullback | None = None
    rectangles: list[tuple[str, int, int]] = field(default_factory=list)
    checks: dict[str, bool] = field(default_factory=dict)
    excluded: list[tuple[Shortcut, str]] = field(default_factory=list)

    @property
    def verified(self) -> bool:
        return all(self.checks.values())

    def as_dict(self) -> dict:
        return {
            "family": [s.as_dict() for s in self.family],
            "moves": [[str(a.corner) for a in move.arcs] for move in self.moves],
            "checks": self.checks,
            "excluded": [{"shortcut": s.as_dict(), "reason": r} for s, r in self.excluded],
        }


@dataclass
class IterationState:
    """Step n of the straightening iteration.

    `history[k]` is the length of the image of the carried lamination after
    step k; `family` is the shortcut family straightened to reach this step and
    `previous_map` the map it was found on.
    """

    n: int
    map: AdaptedMap
    eps: int
    t: float = 0.5
    delta: Fraction | None = None
    history: list[Fraction] = field(default_factory=list)
    shortcut_counts: list[int] = field(default_factory=list)
    family: list[Shortcut] = field(default_factory=list)
    previous_map: AdaptedMap | None = None

    @property
    def track(self) -> TrainTrack:
        return self.map.track

    @property
    def length(self) -> Fraction:
        return self.history[-1]

    def stable(self, steps: int) -> bool:
        """The last `steps` recorded lengths are equal."""
        return len(self.history) >= steps and len(set(self.history[-steps:])) == 1

    @property
    def min_branch_length(self) -> int:
        """m_n: the shortest image among non-annular branches."""
        return min((self.map.length(b) for b in self.map.open_branches), default=0)

    @property
    def threshold_length(self) -> Fraction | None:
        """L = max(12 delta + 2 eps, 4 eps)."""
        if self.delta is None:
            return None
        return max(12 * Fraction(self.delta) + 2 * self.eps, Fraction(4 * self.eps))

    def constants(self) -> dict:
        volume = self.map.metric.ball_volume(self.eps)
        threshold = self.threshold_length
        return {
            "eps": self.eps,
            "t": self.t,
            "V_eps": volume,
            "m_n": self.min_branch_length,
            "delta": None if self.delta is None else float(self.delta),
            "L": None if threshold is None else float(threshold),
        }

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "length": str(self.length),
            "history": [str(x) for x in self.history],
            "shortcuts": self.shortcut_counts,
            "family": [s.as_dict() for s in self.family],
            "constants": self.constants(),
            "map": self.map.as_dict(),
        }


@dataclass(frozen=True)
class LoopArc:
    """Piece of a loop: an on-track train path, or an off-track edge-path word."""

    steps: tuple[Step, ...] = ()
    word: str = ""

    @property
    def on_track(self) -> bool:
        return bool(self.steps)


@dataclass
class LoopPartition:
    """The 1-cells of the pulled-tight loop, labelled 0 to 4.

    Cell i joins vertices i and i + 1 of `word`, read cyclically.
    """

    word: str
    labels: list[int]
    star: str
    star_certified: bool
    on_track: list[bool]
    eps: int
    span: int = 0

    CLASSES = (0, 1, 2, 3, 4)

    def __len__(self):
        return len(self.word)

    @property
    def class_lengths(self) -> dict[int, int]:
        return {c: sum(1 for x in self.labels if x == c) for c in self.CLASSES}

    def runs(self, label: int) -> list[int]:
        """Lengths of the circular runs of one label."""
        return circular_runs([x == label for x in self.labels])

    def as_dict(self) -> dict:
        return {
            "word": self.word,
            "labels": "".join(str(x) for x in self.labels),
            "class_lengths": self.class_lengths,
            "star": self.star,
            "star_certified": self.star_certified,
            "eps": self.eps,
        }


@dataclass
class ExitCurve:
    """Composition of two arcs with shared endpoints, closed up into a loop of the quotient."""

    word: str
    fiber_word: str
    nontrivial: bool
    separation: int
    separation_ok: bool | None = None
    loop: EdgeLoop | None = None
    loop_certified: bool = False
    within_neighbourhood: bool | None = None
    reason: str = ""

    @property
    def accepted(self) -> bool:
        return self.nontrivial and self.within_neighbourhood is not False

    def as_dict(self) -> dict:
        return {
            "word": self.word,
            "fiber_word": self.fiber_word,
            "nontrivial": self.nontrivial,
            "separation": self.separation,
            "separation_ok": self.separation_ok,
            "level": None if self.loop is None else self.loop.level,
            "loop": None if self.loop is None else self.loop.word,
            "loop_certified": self.loop_certified,
            "within_neighbourhood": self.within_neighbourhood,
            "accepted": self.accepted,
            "reason": self.reason,
        }


@dataclass
class DriftEntry:
    index: int
    word_length: int | None
    level: int | None
    loop_length: int | None
    certified: bool
    pruned: bool = False


@dataclass
class DriftScan:
    """Minimal loops of the classes mu^-i(seed) and the first index leaving each ball."""

    seed: str
    entries: list[DriftEntry] = field(default_factory=list)
    drift: dict[int, int | None] = field(default_factory=dict)
    periodic: int | None = None

    @property
    def witnessed(self) -> bool:
        return bool(self.drift) and all(i is not None for i in self.drift.values())

    @property
    def monotone(self) -> bool:
        found = [self.drift[r] for r in sorted(self.drift) if self.drift[r] is not None]
        return all(a <= b for a, b in zip(found, found[1:]))

    def as_dict(self) -> dict:
        return {
            "seed": self.seed,
            "entries": [vars(e) for e in self.entries],
            "drift": {str(r): i for r, i in sorted(self.drift.items())},
            "periodic": self.periodic,
            "witnessed": self.witnessed,
            "monotone": self.monotone,
        }


@dataclass
class LeaveCheck:
    """Containment of minimal loops in balls of the quotient and the length-ratio table."""

    levels: list[int | None]
    certified: list[bool]
    contained: dict[int, list[bool]]
    ratios: list[float | None] = field(default_factory=list)
    running_infimum: list[float | None] = field(default_factory=list)

    @property
    def escapes(self) -> dict[int, bool]:
        return {k: not all(flags) for k, flags in self.contained.items()}

    def as_dict(self) -> dict:
        return {
            "levels": self.levels,
            "certified": self.certified,
            "contained": {str(k): v for k, v in sorted(self.contained.items())},
            "escapes": {str(k): v for k, v in sorted(self.escapes.items())},
            "ratios": self.ratios,
            "running_infimum": self.running_infimum,
        }
