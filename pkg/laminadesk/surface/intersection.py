"""Combinatorial intersection numbers by linked-pair counting.

Curves are cyclic words on the one-vertex ribbon graph of the polygon. Two
lifts that meet do so along a maximal common segment (possibly a single
vertex); they cross there iff the second line enters and leaves the segment
on different sides of the first. Counting over all index pairs (i, j)
counts every crossing of the two closed curves once per ordered pair of
lifts, so a curve paired with itself counts each double point twice.
"""

import logging
from itertools import product

import pandas as pd

from laminadesk.presentation import words
from laminadesk.presentation.dehn import conjugacy_minimal
from laminadesk.surface.models import CurveClass, SurfaceData

logger = logging.getLogger(__name__)


class RibbonVertex:
    """Cyclic order of half-edges at the single vertex."""

    def __init__(self, order: list[str]):
        self.order = order
        self.index = {h: k for k, h in enumerate(order)}
        self.n = len(order)

    def between(self, start: str, end: str, x: str) -> bool:
        """x lies strictly inside the ccw arc from start to end."""
        s, e, p = self.index[start], self.index[end], self.index[x]
        return 0 < (p - s) % self.n < (e - s) % self.n

    def linked(self, p: tuple[str, str], q: tuple[str, str]) -> bool:
        """The half-edge pairs p and q alternate around the vertex."""
        inside = self.between(p[0], p[1], q[0]) + self.between(p[0], p[1], q[1])
        return inside == 1


def _at(w: str, k: int) -> str:
    return w[k % len(w)]


def crossing_count(vertex: RibbonVertex, u: str, v: str) -> int:
    """Transverse crossings between the closed curves u and v.

    Both words must be cyclically reduced. Lines sharing an infinite
    segment (u and v powers of a common root, either direction) never cross.
    """
    m, n = len(u), len(v)
    cap = m + n
    inv = str.swapcase
    count = 0
    for i, j in product(range(m), range(n)):
        u_prev, u0 = _at(u, i - 1), _at(u, i)
        v_prev, v0 = _at(v, j - 1), _at(v, j)
        if u_prev == v_prev or u_prev == inv(v0):
            continue

        if u0 == v0:
            length = 0
            while length < cap and _at(u, i + length) == _at(v, j + length):
                length += 1
            if length >= cap:
                continue
            start_left = vertex.between(u0, inv(u_prev), inv(v_prev))
            u_last, u_next = _at(u, i + length - 1), _at(u, i + length)
            end_left = vertex.between(u_next, inv(u_last), _at(v, j + length))
            count += start_left != end_left

        elif u0 == inv(v_prev):
            length = 0
            while length < cap and _at(u, i + length) == inv(_at(v, j - 1 - length)):
                length += 1
            if length >= cap:
                continue
            start_left = vertex.between(u0, inv(u_prev), v0)
            u_last, u_next = _at(u, i + length - 1), _at(u, i + length)
            end_left = vertex.between(u_next, inv(u_last), inv(_at(v, j - 1 - length)))
            count += start_left != end_left

        else:
            count += vertex.linked((u0, inv(u_prev)), (v0, inv(v_prev)))
    return count


def _representatives(surface: SurfaceData, curve: CurveClass | str) -> list[str]:
    letters = curve.letters if isinstance(curve, CurveClass) else curve
    result = conjugacy_minimal(surface.presentation, letters)
    return sorted(result.representatives)


def _vertex(surface: SurfaceData) -> RibbonVertex:
    return RibbonVertex(surface.vertex_order)


def _min_count(surface: SurfaceData, reps_u: list[str], reps_v: list[str]) -> int:
    vertex = _vertex(surface)
    return min(crossing_count(vertex, u, v) for u, v in product(reps_u, reps_v))


def _primitive(surface: SurfaceData, curve: CurveClass | str) -> tuple[list[str], int]:
    letters = curve.letters if isinstance(curve, CurveClass) else words.cyclic_reduce(curve)
    minimal = conjugacy_minimal(surface.presentation, letters).word.letters
    root, k = words.primitive_root(minimal)
    return _representatives(surface, root), k


def intersection_number(surface: SurfaceData, c1: CurveClass | str, c2: CurveClass | str) -> int:
    """Geometric intersection number; int(c, c) = 2 * self_intersection(c) for primitive c."""
    reps_u, p = _primitive(surface, c1)
    reps_v, q = _primitive(surface, c2)
    return p * q * _min_count(surface, reps_u, reps_v)


def self_intersection(surface: SurfaceData, c: CurveClass | str) -> int:
    """Minimal number of double points; k^2 s + k - 1 for the k-th power of a primitive class."""
    reps, k = _primitive(surface, c)
    s = min(crossing_count(_vertex(surface), w, w) for w in reps) // 2
    return k * k * s + k - 1


def is_simple(surface: SurfaceData, c: CurveClass | str) -> bool:
    return self_intersection(surface, c) == 0


def intersection_matrix(surface: SurfaceData, curves: list[str]) -> pd.DataFrame:
    """Pairwise intersection numbers, diagonal by the pairing convention."""
    labels = [str(c) for c in curves]
    data = [[intersection_number(surface, a, b) for b in curves] for a in curves]
    return pd.DataFrame(data, index=labels, columns=labels)
