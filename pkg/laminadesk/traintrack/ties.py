"""Tie coordinates of a measured track.

A half-branch (b, e) on side A is read left to right when e = 1 and right
to left when e = 0; on side B the other way round. This keeps a traveller's
left on the same side while crossing a switch.
"""

import bisect
from fractions import Fraction

import networkx as nx

from laminadesk.traintrack.models import Corner, HalfBranch, TrainTrack, Weighting, opposite


def flips(side: str, end: int) -> bool:
    return (side == "A") == (end == 0)


def to_tie(local: Fraction, offset: Fraction, width: Fraction, flip: bool) -> Fraction:
    return offset + (width - local if flip else local)


def to_local(tie: Fraction, offset: Fraction, width: Fraction, flip: bool) -> Fraction:
    return offset + width - tie if flip else tie - offset


def side_intervals(track: TrainTrack, switch: str, side: str, widths: Weighting) -> list[tuple[HalfBranch, Fraction, Fraction]]:
    out, offset = [], Fraction(0)
    for half in track.switches[switch].side(side):
        w = widths[half.branch]
        out.append((half, offset, offset + w))
        offset += w
    return out


def partition_points(track: TrainTrack, switch: str, side: str, widths: Weighting) -> list[Fraction]:
    """Tie positions of the corners of one side."""
    return [hi for _, _, hi in side_intervals(track, switch, side, widths)[:-1]]


def corner_position(track: TrainTrack, corner: Corner, widths: Weighting) -> Fraction:
    return side_intervals(track, corner.switch, corner.side, widths)[corner.index][2]


def locate(track: TrainTrack, switch: str, side: str, y: Fraction, widths: Weighting):
    """What the tie point y meets on one side: ("corner", Corner) or ("half", half, offset, width)."""
    intervals = side_intervals(track, switch, side, widths)
    for i, (_, _, hi) in enumerate(intervals[:-1]):
        if hi == y:
            return ("corner", Corner(switch, side, i))
    his = [hi for _, _, hi in intervals]
    i = bisect.bisect_right(his, y)
    if i < len(intervals):
        half, lo, hi = intervals[i]
        if lo < y < hi:
            return ("half", half, lo, hi - lo)
    return None


def interval_at(track: TrainTrack, half: HalfBranch, widths: Weighting) -> tuple[str, str, Fraction, Fraction]:
    switch, side, i = track.attachment(half)
    _, lo, hi = side_intervals(track, switch, side, widths)[i]
    return switch, side, lo, hi


def corners_into(track: TrainTrack, half: HalfBranch, widths: Weighting) -> list[Corner]:
    """Corners of the opposite side strictly inside the tie interval of `half`."""
    switch, side, lo, hi = interval_at(track, half, widths)
    other = opposite(side)
    return [
        Corner(switch, other, i)
        for i, p in enumerate(partition_points(track, switch, other, widths))
        if lo < p < hi
    ]


def is_thick(track: TrainTrack, branch: str, widths: Weighting) -> bool:
    if track.is_closed(branch):
        return False
    return all(corners_into(track, HalfBranch(branch, e), widths) for e in (0, 1))


def thick_branches(track: TrainTrack, widths: Weighting) -> list[str]:
    return [b for b in sorted(track.branches) if is_thick(track, b, widths)]


def thick_graph(track: TrainTrack, widths: Weighting) -> nx.MultiGraph:
    """Thick branches, joined when they meet at a switch from opposite sides with overlapping intervals."""
    graph = nx.MultiGraph()
    thick = thick_branches(track, widths)
    graph.add_nodes_from(thick)
    ends = [HalfBranch(b, e) for b in thick for e in (0, 1)]
    for i, h1 in enumerate(ends):
        s1, side1, lo1, hi1 = interval_at(track, h1, widths)
        for h2 in ends[i + 1 :]:
            s2, side2, lo2, hi2 = interval_at(track, h2, widths)
            if s1 == s2 and side1 != side2 and max(lo1, lo2) < min(hi1, hi2):
                graph.add_edge(h1.branch, h2.branch, switch=s1)
    return graph


def thick_loop(track: TrainTrack, widths: Weighting) -> list[str] | None:
    """Branches of some cycle of thick branches, or None."""
    graph = thick_graph(track, widths)
    try:
        cycle = nx.find_cycle(graph)
    except nx.NetworkXNoCycle:
        return None
    return [edge[0] for edge in cycle]


def longest_strip(track: TrainTrack, widths: Weighting) -> int:
    """Number of branches in the longest thick strip (0 if nothing is thick)."""
    graph = nx.Graph(thick_graph(track, widths))
    graph.remove_edges_from(list(nx.selfloop_edges(graph)))
    best = 0
    for component in nx.connected_components(graph):
        sub = graph.subgraph(component)
        if nx.is_tree(sub):
            best = max(best, nx.diameter(sub) + 1)
        else:
            best = max(best, sub.number_of_nodes())
    return best
