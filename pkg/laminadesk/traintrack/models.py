"""Value types for combinatorial train tracks.

A branch runs from end 0 to end 1. A switch is a tie with two sides, A and
B; each side lists its half-branches left to right for a traveller crossing
from A to B. With a transverse measure, half-branches occupy consecutive
intervals of the tie in that order.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

from laminadesk.errors import PreconditionError, SplittingError, TrackError

SIDES = ("A", "B")


def opposite(side: str) -> str:
    return "B" if side == "A" else "A"


@dataclass(frozen=True, order=True)
class HalfBranch:
    branch: str
    end: int

    def __str__(self):
        return f"{self.branch}.{self.end}"


@dataclass(frozen=True, order=True)
class Corner:
    """The cusp between half-branches `index` and `index + 1` of one switch side."""

    switch: str
    side: str
    index: int

    def __str__(self):
        return f"{self.switch}:{self.side}:{self.index}"


@dataclass(frozen=True)
class Switch:
    name: str
    a: tuple[HalfBranch, ...]
    b: tuple[HalfBranch, ...]

    def side(self, side: str) -> tuple[HalfBranch, ...]:
        return self.a if side == "A" else self.b

    @property
    def is_bivalent(self) -> bool:
        return len(self.a) == 1 and len(self.b) == 1

    @property
    def corners(self) -> list[Corner]:
        return [
            Corner(self.name, side, i)
            for side in SIDES
            for i in range(len(self.side(side)) - 1)
        ]


@dataclass(frozen=True)
class Region:
    """One complementary region: its Euler characteristic and its corners.

    `sides` (number of boundary components) is known for census data read
    from a file and dropped once regions are merged by splitting.
    `boundary` counts the sides that are boundary curves of the surface
    rather than of the track.
    """

    name: str
    euler: int
    corners: tuple[Corner, ...] = ()
    sides: int | None = None
    boundary: int = 0

    @property
    def is_disk(self) -> bool:
        return self.euler == 1

    @property
    def is_annulus(self) -> bool:
        return self.euler == 0


@dataclass(frozen=True)
class Weighting:
    """Nonnegative rational weight per branch."""

    values: dict[str, Fraction] = field(default_factory=dict)

    @classmethod
    def of(cls, values: dict) -> "Weighting":
        return cls({b: Fraction(w) for b, w in values.items()})

    def __getitem__(self, branch: str) -> Fraction:
        return self.values.get(branch, Fraction(0))

    def __iter__(self):
        return iter(self.values)

    @property
    def is_integral(self) -> bool:
        return all(w.denominator == 1 for w in self.values.values())

    @property
    def support(self) -> set[str]:
        return {b for b, w in self.values.items() if w > 0}

    def scaled(self, factor) -> "Weighting":
        factor = Fraction(factor)
        return Weighting({b: w * factor for b, w in self.values.items()})


@dataclass(frozen=True)
class TrainTrack:
    """Branches, switches, lengths and optional embedding data.

    `branches` maps a name to its (start switch, end switch); both are None
    for a closed branch, an annulus with no switches. `weights` is the
    transverse measure whose ties give the coordinates used by splitting.
    """

    branches: dict[str, tuple[str | None, str | None]]
    switches: dict[str, Switch]
    lengths: dict[str, Fraction]
    regions: tuple[Region, ...] | None = None
    weights: Weighting | None = None
    words: dict[str, str] = field(default_factory=dict)
    surface_euler: int | None = None
    name: str = ""

    @cached_property
    def attachments(self) -> dict[HalfBranch, tuple[str, str, int]]:
        """(switch, side, position) of every attached half-branch."""
        found: dict[HalfBranch, tuple[str, str, int]] = {}
        for sw in self.switches.values():
            for side in SIDES:
                for i, half in enumerate(sw.side(side)):
                    if half in found:
                        raise TrackError(f"half-branch {half} attached twice")
                    found[half] = (sw.name, side, i)
        return found

    def attachment(self, half: HalfBranch) -> tuple[str, str, int]:
        try:
            return self.attachments[half]
        except KeyError:
            raise TrackError(f"half-branch {half} is not attached to any switch") from None

    def is_closed(self, branch: str) -> bool:
        return self.branches[branch] == (None, None)

    @property
    def corners(self) -> list[Corner]:
        return [c for sw in self.switches.values() for c in sw.corners]

    @property
    def euler(self) -> int:
        """Euler characteristic of the track as a graph; closed branches are circles."""
        open_branches = sum(1 for b in self.branches if not self.is_closed(b))
        return len(self.switches) - open_branches

    @property
    def min_length(self) -> Fraction:
        return min(self.lengths.values())

    def measure(self, weights: Weighting | None = None) -> Weighting:
        w = weights if weights is not None else self.weights
        if w is None:
            raise PreconditionError("tie coordinates need a transverse measure; supply weights")
        return w

    def replace(self, **changes) -> "TrainTrack":
        data = {
            "branches": self.branches,
            "switches": self.switches,
            "lengths": self.lengths,
            "regions": self.regions,
            "weights": self.weights,
            "words": self.words,
            "surface_euler": self.surface_euler,
            "name": self.name,
        }
        data.update(changes)
        return TrainTrack(**data)

    def __repr__(self):
        return (
            f"TrainTrack({self.name or '?'}: {len(self.branches)} branches, "
            f"{len(self.switches)} switches)"
        )


@dataclass(frozen=True)
class CornerArc:
    """A cutting arc starting at a corner.

    `path` declares the branches the arc runs through; `exit` is where it
    stops inside the last of them, as a fraction of that branch's length
    measured from the end it entered. Without an exit the arc runs until it
    collides with a corner of the opposite side.
    """

    corner: Corner
    path: tuple[str, ...] | None = None
    exit: Fraction | None = None

    def __post_init__(self):
        if self.exit is not None:
            if not self.path:
                raise SplittingError("an exit position needs a declared path")
            if not 0 < self.exit < 1:
                raise SplittingError(f"exit position {self.exit} not inside the branch")


@dataclass(frozen=True)
class SplittingMove:
    arcs: tuple[CornerArc, ...] = ()

    def __len__(self):
        return len(self.arcs)


@dataclass
class Pullback:
    """Linear map from weightings of the split track to weightings of the original.

    `through_first_slab[b]` lists the new branches crossing the first slab of
    the old branch b, with multiplicity.
    `pieces[n]` lists, in order along the new branch n, the stretches
    (old branch, x0, x1, direction) of old branches it runs over.
    """

    through_first_slab: dict[str, list[str]]
    pieces: dict[str, list[tuple[str, Fraction, Fraction, int]]] = field(default_factory=dict)

    def __call__(self, weights: Weighting) -> Weighting:
        return Weighting(
            {b: sum((weights[n] for n in news), Fraction(0)) for b, news in self.through_first_slab.items()}
        )

    @classmethod
    def identity(cls, track: TrainTrack) -> "Pullback":
        return cls(
            {b: [b] for b in track.branches},
            {b: [(b, Fraction(0), track.lengths[b], 1)] for b in track.branches},
        )

    def compose(self, earlier: "Pullback") -> "Pullback":
        """Pullback through this splitting and then through `earlier`."""
        through = {
            b: [n for mid in mids for n in self.through_first_slab.get(mid, [])]
            for b, mids in earlier.through_first_slab.items()
        }
        pieces = {}
        for name, stretches in self.pieces.items():
            out = []
            for mid, lo, hi, direction in stretches:
                sub, start = [], Fraction(0)
                for old, x0, x1, d in earlier.pieces[mid]:
                    end = start + (x1 - x0)
                    a, b = max(lo, start), min(hi, end)
                    if a < b:
                        if d > 0:
                            sub.append((old, x0 + a - start, x0 + b - start, d))
                        else:
                            sub.append((old, x1 - (b - start), x1 - (a - start), d))
                    start = end
                if direction < 0:
                    sub = [(old, x0, x1, -d) for old, x0, x1, d in reversed(sub)]
                out.extend(sub)
            pieces[name] = out
        return Pullback(through, pieces)


@dataclass
class PassRecord:
    """One lengthening pass with its minimum branch length before and after."""

    index: int
    min_before: Fraction
    min_after: Fraction
    rounds: int
    loops_removed: int = 0
    strip_length: int = 0

    @property
    def growth(self) -> Fraction:
        return self.min_after / self.min_before

    def as_dict(self) -> dict:
        return {
            "pass": self.index,
            "min_before": str(self.min_before),
            "min_after": str(self.min_after),
            "growth": float(self.growth),
            "rounds": self.rounds,
            "loops_removed": self.loops_removed,
            "strip_length": self.strip_length,
        }
