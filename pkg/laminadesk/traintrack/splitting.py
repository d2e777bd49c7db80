"""Splitting a measured track along corner arcs.

Each arc is traced through tie coordinates of the transverse measure. The
branches it meets are sliced into slabs at the arc tips and into strips
along the arcs; every tie (old switch or slab boundary) is cut at the
points the arcs cross it, and each tie component becomes a switch.
Bivalent switches are then merged away, concatenating lengths, chart words
and origin pieces.
"""

import logging
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction

from laminadesk.config import Config
from laminadesk.errors import SplittingError
from laminadesk.presentation import words
from laminadesk.rate_limited_logger import RateLimitedLogger
from laminadesk.traintrack.models import (
    SIDES,
    Corner,
    CornerArc,
    HalfBranch,
    Pullback,
    Region,
    SplittingMove,
    Switch,
    TrainTrack,
    Weighting,
    opposite,
)
from laminadesk.traintrack.ties import flips, locate, side_intervals, to_local, to_tie
from laminadesk.traintrack.validation import annular_components, region_violations

logger = logging.getLogger(__name__)
diagnostics = RateLimitedLogger("split", logger)

ZERO = Fraction(0)


@dataclass
class Segment:
    """Part of an arc inside one branch: transverse position and longitudinal span."""

    cut: int
    branch: str
    y: Fraction
    x0: Fraction
    x1: Fraction
    tip: Fraction | None = None  # where the arc stops inside the branch


@dataclass
class Trace:
    cut: int
    start: Corner
    segments: list[Segment] = field(default_factory=list)
    crossings: list[tuple[str, Fraction]] = field(default_factory=list)
    collision: Corner | None = None


def trace_arc(track: TrainTrack, widths: Weighting, arc: CornerArc, cut: int = 0) -> Trace:
    """Follow a corner arc through tie coordinates.

    Raises "arc crosses positive-weight band" when the declared traversal
    disagrees with the coordinates, and "no legal move" when the arc closes
    up without meeting a corner.
    """
    corner = arc.corner
    if corner.switch not in track.switches:
        raise SplittingError(f"unknown switch in corner {corner}")
    intervals = side_intervals(track, corner.switch, corner.side, widths)
    if not 0 <= corner.index < len(intervals) - 1:
        raise SplittingError(f"no corner {corner}")
    y = intervals[corner.index][2]
    switch, side = corner.switch, opposite(corner.side)
    trace = Trace(cut, corner, crossings=[(switch, y)])
    declared = list(arc.path) if arc.path is not None else None
    seen = set()

    for step in range(Config.MAX_CUT_STEPS):
        hit = locate(track, switch, side, y, widths)
        if hit is None:
            raise SplittingError(f"no legal move: arc from {corner} leaves the tie at {switch}")
        if hit[0] == "corner":
            if declared is not None and step != len(declared):
                raise SplittingError("arc crosses positive-weight band")
            trace.collision = hit[1]
            return trace

        _, half, offset, width = hit
        b = half.branch
        if declared is not None and (step >= len(declared) or declared[step] != b):
            raise SplittingError("arc crosses positive-weight band")
        local = to_local(y, offset, width, flips(side, half.end))
        if (b, local, half.end) in seen:
            raise SplittingError(f"no legal move: arc from {corner} closes up without collision")
        seen.add((b, local, half.end))

        length = track.lengths[b]
        if declared is not None and step == len(declared) - 1 and arc.exit is not None:
            depth = arc.exit * length
            tip = depth if half.end == 0 else length - depth
            x0, x1 = (ZERO, tip) if half.end == 0 else (tip, length)
            trace.segments.append(Segment(cut, b, local, x0, x1, tip))
            return trace

        trace.segments.append(Segment(cut, b, local, ZERO, length))
        far = HalfBranch(b, 1 - half.end)
        switch, far_side, i = track.attachment(far)
        far_offset = side_intervals(track, switch, far_side, widths)[i][1]
        y = to_tie(local, far_offset, width, flips(far_side, far.end))
        trace.crossings.append((switch, y))
        side = opposite(far_side)
    raise SplittingError(f"no legal move: arc from {corner} exceeds {Config.MAX_CUT_STEPS} steps")


def _check_disjoint(segments: list[Segment]) -> list[tuple[int, int]]:
    """Raise if two arcs overlap; return pairs of arcs meeting tip to tip."""
    meetings = []
    by_branch = defaultdict(list)
    for s in segments:
        by_branch[(s.branch, s.y)].append(s)
    for group in by_branch.values():
        group.sort(key=lambda s: (s.x0, s.x1))
        for s, t in zip(group, group[1:]):
            if t.x0 < s.x1:
                raise SplittingError("cutting arcs intersect")
            if t.x0 == s.x1 and s.tip == s.x1 and t.tip == t.x0:
                meetings.append((s.cut, t.cut))
    return meetings


class _Draft:
    """Mutable track under construction: branch records and switch sides."""

    def __init__(self):
        self.length: dict[str, Fraction] = {}
        self.width: dict[str, Fraction] = {}
        self.word: dict[str, str] = {}
        # origin pieces: (old branch, slab, direction)
        self.origins: dict[str, list[tuple[str, int, int]]] = {}
        self.sides: dict[str, dict[str, list[HalfBranch]]] = {}
        # ("old", Corner) or ("tip", arc index) per (switch, side, index)
        self.corner_source: dict[tuple[str, str, int], object] = {}

    def add_branch(self, name, length, width, word, origins):
        self.length[name] = length
        self.width[name] = width
        self.word[name] = word
        self.origins[name] = origins

    def traversed(self, branch: str, forward: bool) -> tuple[str, list]:
        """Word and origin pieces of a branch read forwards or backwards."""
        if forward:
            return self.word[branch], self.origins[branch]
        flipped = [(b, k, -d) for b, k, d in reversed(self.origins[branch])]
        return words.inverse(self.word[branch]), flipped

    def where(self, half: HalfBranch) -> tuple[str, str, int]:
        for s, sides in self.sides.items():
            for side in SIDES:
                if half in sides[side]:
                    return s, side, sides[side].index(half)
        raise SplittingError(f"draft lost half-branch {half}")

    def merge_bivalent(self) -> None:
        while True:
            name = next(
                (s for s, sd in self.sides.items() if len(sd["A"]) == 1 and len(sd["B"]) == 1),
                None,
            )
            if name is None:
                return
            (p,), (q,) = self.sides.pop(name).values()
            forward, p_origins = self.traversed(p.branch, p.end == 1)
            if p.branch == q.branch:
                self.word[p.branch], self.origins[p.branch] = forward, p_origins
                continue
            onward, q_origins = self.traversed(q.branch, q.end == 0)
            merged = f"{p.branch}~{q.branch}"
            length = self.length[p.branch] + self.length[q.branch]
            width = self.width[p.branch]
            for b in (p.branch, q.branch):
                del self.length[b], self.width[b], self.word[b], self.origins[b]
            self.add_branch(merged, length, width, forward + onward, p_origins + q_origins)
            self._reattach(HalfBranch(p.branch, 1 - p.end), HalfBranch(merged, 0))
            self._reattach(HalfBranch(q.branch, 1 - q.end), HalfBranch(merged, 1))

    def _reattach(self, old: HalfBranch, new: HalfBranch) -> None:
        s, side, i = self.where(old)
        self.sides[s][side][i] = new


def _tie_components(points: set[Fraction], total: Fraction) -> list[tuple[Fraction, Fraction]]:
    cuts = sorted(p for p in points if 0 < p < total)
    bounds = [ZERO, *cuts, total]
    return list(zip(bounds, bounds[1:]))


def _component_of(components, lo: Fraction, hi: Fraction) -> int:
    for k, (c_lo, c_hi) in enumerate(components):
        if c_lo <= lo and hi <= c_hi:
            return k
    raise SplittingError(f"strip [{lo}, {hi}] straddles a cut of its tie")


def _fraction_label(x: Fraction) -> str:
    return str(x).replace("/", "_")


def split(track: TrainTrack, move: SplittingMove, weights: Weighting | None = None) -> tuple[TrainTrack, Pullback]:
    """Cut `track` along the arcs of `move`; returns the split track and its pullback.

    The split track carries the induced measure as its weights. If the
    track has a region census, it is carried along: a collision of an arc
    with a corner (or with another arc) removes two corners and one unit of
    Euler characteristic, merging the regions it joins.
    """
    widths = track.measure(weights)
    if not move.arcs:
        return track, Pullback.identity(track)

    traces = [trace_arc(track, widths, arc, k) for k, arc in enumerate(move.arcs)]
    segments = [s for t in traces for s in t.segments]
    meetings = _check_disjoint(segments)

    crossings: dict[str, set[Fraction]] = defaultdict(set)
    for t in traces:
        for s, y in t.crossings:
            crossings[s].add(y)

    by_branch = defaultdict(list)
    for s in segments:
        by_branch[s.branch].append(s)

    draft = _Draft()
    slabs: dict[str, list[tuple[Fraction, Fraction]]] = {}
    strips: dict[tuple[str, int], list[str]] = {}
    tip_owner: dict[tuple[str, Fraction, Fraction], int] = {}

    for b in sorted(track.branches):
        length, w = track.lengths[b], widths[b]
        segs = by_branch.get(b, [])
        if track.is_closed(b):
            draft.add_branch(b, length, w, track.words.get(b, ""), [(b, 0, 1)])
            strips[(b, 0)] = [b]
            continue
        xs = sorted({ZERO, length} | {s.tip for s in segs if s.tip is not None})
        slabs[b] = list(zip(xs, xs[1:]))
        for s in segs:
            if s.tip is not None:
                tip_owner[(b, s.tip, s.y)] = s.cut
        for k, (xa, xb) in enumerate(slabs[b]):
            ys = sorted({s.y for s in segs if s.x0 <= xa and s.x1 >= xb})
            bounds = [ZERO, *ys, w]
            names = []
            for j, (lo, hi) in enumerate(zip(bounds, bounds[1:])):
                name = f"{b}:{k}:{j}"
                word = track.words.get(b, "") if k == 0 else ""
                draft.add_branch(name, xb - xa, hi - lo, word, [(b, k, 1)])
                names.append(name)
            strips[(b, k)] = names

    def piece_interval(b: str, k: int, j: int) -> tuple[Fraction, Fraction]:
        xa, xb = slabs[b][k]
        segs = by_branch.get(b, [])
        ys = sorted({s.y for s in segs if s.x0 <= xa and s.x1 >= xb})
        bounds = [ZERO, *ys, widths[b]]
        return bounds[j], bounds[j + 1]

    # Old switches, cut at every tie point an arc passes, starts or ends at
    for s_name, sw in sorted(track.switches.items()):
        total = sum((widths[h.branch] for h in sw.a), ZERO)
        components = _tie_components(crossings.get(s_name, set()), total)
        new_names = [s_name if len(components) == 1 else f"{s_name}.{k}" for k in range(len(components))]
        for name in new_names:
            draft.sides[name] = {"A": [], "B": []}
        for side in SIDES:
            items = []
            for i, (half, offset, hi) in enumerate(side_intervals(track, s_name, side, widths)):
                b, e = half.branch, half.end
                k = 0 if e == 0 else len(slabs[b]) - 1
                flip = flips(side, e)
                for j, piece in enumerate(strips[(b, k)]):
                    lo_l, hi_l = piece_interval(b, k, j)
                    lo_t = to_tie(hi_l if flip else lo_l, offset, widths[b], flip)
                    hi_t = to_tie(lo_l if flip else hi_l, offset, widths[b], flip)
                    items.append((lo_t, hi_t, i, HalfBranch(piece, e)))
            items.sort(key=lambda it: (it[0], it[2], it[1]))
            placed = defaultdict(list)
            for lo_t, hi_t, i, half in items:
                placed[_component_of(components, lo_t, hi_t)].append((i, half))
            for c, entries in placed.items():
                draft.sides[new_names[c]][side] = [h for _, h in entries]
                for n, ((i1, _), (i2, _)) in enumerate(zip(entries, entries[1:])):
                    draft.corner_source[(new_names[c], side, n)] = ("old", Corner(s_name, side, i1))

    # Slab boundaries inside branches
    for b, bslabs in slabs.items():
        segs = by_branch.get(b, [])
        for k in range(1, len(bslabs)):
            x = bslabs[k][0]
            points = {s.y for s in segs if s.x0 < x < s.x1}
            points |= {y for (bb, tip, y), _ in tip_owner.items() if bb == b and tip == x and _meets(segs, x, y)}
            components = _tie_components(points, widths[b])
            label = _fraction_label(x)
            new_names = [f"{b}@{label}" if len(components) == 1 else f"{b}@{label}.{c}" for c in range(len(components))]
            for name in new_names:
                draft.sides[name] = {"A": [], "B": []}
            for side, slab, end in (("A", k - 1, 1), ("B", k, 0)):
                placed = defaultdict(list)
                for j, piece in enumerate(strips[(b, slab)]):
                    lo, hi = piece_interval(b, slab, j)
                    placed[_component_of(components, lo, hi)].append((hi, HalfBranch(piece, end)))
                for c, entries in placed.items():
                    name = new_names[c]
                    draft.sides[name][side] = [h for _, h in entries]
                    for n, (y, _) in enumerate(entries[:-1]):
                        owner = tip_owner.get((b, x, y))
                        draft.corner_source[(name, side, n)] = ("tip", owner)

    draft.merge_bivalent()

    new_track, through, pieces = _assemble(track, draft, slabs)
    if track.regions is not None:
        regions = _carry_regions(track, traces, meetings, draft)
        new_track = new_track.replace(regions=regions)
        bad = region_violations(new_track)
        if bad:
            raise SplittingError(f"illegal complementary region after splitting: {bad[0]}")

    before, after = len(annular_components(track)), len(annular_components(new_track))
    if after > before:
        diagnostics.warning("annulus_cut", f"splitting {track.name} cut off {after - before} annular component(s)")
    logger.debug(
        f"split {track.name}: {len(track.branches)} -> {len(new_track.branches)} branches, "
        f"{len(meetings)} arc meetings"
    )
    return new_track, Pullback(through, pieces)


def _meets(segs: list[Segment], x: Fraction, y: Fraction) -> bool:
    """True if two arc tips meet head on at (x, y)."""
    ends = [s for s in segs if s.y == y and s.tip == x]
    return len(ends) >= 2


def _assemble(track: TrainTrack, draft: _Draft, slabs: dict[str, list[tuple[Fraction, Fraction]]]):
    """Rename draft branches after their first origin and build the new track."""
    rename: dict[str, str] = {}
    used: set[str] = set()
    for name in draft.length:
        base = draft.origins[name][0][0]
        candidate, k = base, 2
        while candidate in used:
            candidate, k = f"{base}_{k}", k + 1
        used.add(candidate)
        rename[name] = candidate

    switches = {
        s: Switch(
            s,
            tuple(HalfBranch(rename[h.branch], h.end) for h in sides["A"]),
            tuple(HalfBranch(rename[h.branch], h.end) for h in sides["B"]),
        )
        for s, sides in sorted(draft.sides.items())
    }
    ends: dict[str, list[str | None]] = {rename[n]: [None, None] for n in draft.length}
    for s, sw in switches.items():
        for half in sw.a + sw.b:
            ends[half.branch][half.end] = s
    through: dict[str, list[str]] = {b: [] for b in track.branches}
    for name, origins in draft.origins.items():
        for b, k, _ in origins:
            if k == 0:
                through[b].append(rename[name])
    pieces = {
        rename[name]: [
            (b, *(slabs[b][k] if b in slabs else (ZERO, track.lengths[b])), d) for b, k, d in origins
        ]
        for name, origins in draft.origins.items()
    }

    new_track = TrainTrack(
        branches={n: (e[0], e[1]) for n, e in ends.items()},
        switches=switches,
        lengths={rename[n]: v for n, v in draft.length.items()},
        weights=Weighting({rename[n]: v for n, v in draft.width.items()}),
        words={rename[n]: v for n, v in draft.word.items()},
        surface_euler=track.surface_euler,
        name=f"{track.name}'" if track.name else "",
    )
    return new_track, through, pieces


def _carry_regions(track: TrainTrack, traces: list[Trace], meetings, draft: _Draft) -> tuple[Region, ...]:
    """Region census of the split track; corner labels survive merging since merged switches have none."""
    region_of = {c: r.name for r in track.regions for c in r.corners}
    parent = {r.name: r.name for r in track.regions}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    start_region = {t.cut: region_of.get(t.start) for t in traces}
    lost: dict[str, int] = defaultdict(int)
    joins = [(start_region[t.cut], region_of.get(t.collision)) for t in traces if t.collision is not None]
    joins += [(start_region[i], start_region[j]) for i, j in meetings]
    for r1, r2 in joins:
        if r1 is None or r2 is None:
            diagnostics.warning("census", "arc meets a corner outside the census; regions not merged")
            continue
        a, b = find(r1), find(r2)
        if a != b:
            parent[b] = a
            lost[a] += lost.pop(b, 0)
        lost[a] += 1

    groups = defaultdict(list)
    for r in track.regions:
        groups[find(r.name)].append(r)
    corners = defaultdict(list)
    for s, sides in draft.sides.items():
        for side in SIDES:
            for n in range(len(sides[side]) - 1):
                source = draft.corner_source.get((s, side, n))
                if source is None:
                    continue
                kind, ref = source
                region = region_of.get(ref) if kind == "old" else start_region.get(ref)
                if region is not None:
                    corners[find(region)].append(Corner(s, side, n))
    regions = []
    for root, members in sorted(groups.items()):
        regions.append(
            Region(
                name="+".join(r.name for r in members),
                euler=sum(r.euler for r in members) - lost.get(root, 0),
                corners=tuple(sorted(corners.get(root, []))),
                sides=members[0].sides if len(members) == 1 and not lost.get(root) else None,
                boundary=sum(r.boundary for r in members),
            )
        )
    return tuple(regions)
