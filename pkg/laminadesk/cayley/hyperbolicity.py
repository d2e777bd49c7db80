"""Slim-triangle estimates of the hyperbolicity constant on a ball.

Triangles are taken up to left translation, so one vertex is the identity
and the other two range over a sub-ball. Sides are shortlex geodesics read
off the ball. Slimness is measured at vertices and at edge midpoints; along
an edge the distance to a fixed set is piecewise linear with slopes +-1, so
these points realise the maximum and delta is a multiple of 1/2.
"""

import logging
import math
from fractions import Fraction

import networkx as nx
import numpy as np

from laminadesk.cayley.ball import to_networkx
from laminadesk.cayley.models import Ball, HyperbolicityEstimate
from laminadesk.config import Config
from laminadesk.errors import PreconditionError
from laminadesk.presentation import words
from laminadesk.rate_limited_logger import RateLimitedLogger

logger = logging.getLogger(__name__)
diagnostics = RateLimitedLogger("delta", logger)

INF = math.inf


class TriangleScanner:
    """Distances between ball vertices, cached, with the triangle defect."""

    def __init__(self, ball: Ball):
        self.ball = ball
        self._dist: dict[tuple[int, int], float] = {}

    def d(self, p: int, q: int) -> float:
        if p == q:
            return 0
        key = (p, q) if p < q else (q, p)
        if key not in self._dist:
            length = self.ball.word_length(words.inverse(self.ball.words[p]) + self.ball.words[q])
            self._dist[key] = INF if length is None else length
        return self._dist[key]

    def follow(self, start: int, label: str) -> list[int] | None:
        path = [start]
        for s in label:
            nxt = self.ball.neighbours[path[-1]].get(s)
            if nxt is None:
                return None
            path.append(nxt)
        return path

    def _to_side(self, p: int, side: list[int]) -> float:
        return min(self.d(p, q) for q in side)

    def side_defect(self, side: list[int], others: list[list[int]]) -> float:
        """Twice the largest distance from a point of `side` to the other sides."""
        other_edges = set()
        for o in others:
            for a, b in zip(o, o[1:]):
                other_edges.add((a, b))
                other_edges.add((b, a))
        f = [min(self._to_side(p, o) for o in others) for p in side]
        worst = max(2 * x for x in f)
        for (a, b), fa, fb in zip(zip(side, side[1:]), f, f[1:]):
            mid = 0 if (a, b) in other_edges else 1 + 2 * min(fa, fb)
            worst = max(worst, mid)
        return worst

    def triangle(self, y: int, z: int) -> float | None:
        """Twice the slimness defect of the triangle (e, y, z); None if uncertified."""
        ball = self.ball
        g = ball.locate(words.inverse(ball.words[y]) + ball.words[z])
        if g is None:
            return None
        s_ey = self.follow(ball.root, ball.words[y])
        s_ez = self.follow(ball.root, ball.words[z])
        s_yz = self.follow(y, ball.words[g])
        if s_yz is None:
            return None
        sides = [s_ey, s_ez, s_yz]
        worst = 0.0
        for i, side in enumerate(sides):
            others = [s for j, s in enumerate(sides) if j != i]
            worst = max(worst, self.side_defect(side, others))
        return None if worst == INF else worst


def scan_radius(ball: Ball, pair_cap: int = Config.TRIANGLE_PAIR_CAP) -> int:
    """Largest r <= R whose sub-ball has at most `pair_cap` ordered pairs."""
    sizes = np.cumsum(ball.sphere_sizes())
    r = 0
    for k, n in enumerate(sizes):
        if n * n <= pair_cap:
            r = k
    return r


def four_point_delta(ball: Ball, rng: np.random.Generator, samples: int = Config.FOUR_POINT_SAMPLES, nodes: int = 60) -> float:
    """Gromov four-point defect on random quadruples of ball vertices (graph metric)."""
    graph = to_networkx(ball)
    chosen = rng.choice(len(ball), size=min(nodes, len(ball)), replace=False)
    dist = {int(v): nx.single_source_shortest_path_length(graph, int(v)) for v in chosen}
    worst = 0.0
    for _ in range(samples):
        x, y, z, w = (int(v) for v in rng.choice(chosen, size=4))
        sums = sorted(
            [
                dist[x][y] + dist[z][w],
                dist[x][z] + dist[y][w],
                dist[x][w] + dist[y][z],
            ]
        )
        worst = max(worst, (sums[2] - sums[1]) / 2)
    return worst


def estimate_delta(
    ball: Ball,
    mode: str = "exhaustive",
    seed: int = 0,
    samples: int = Config.DELTA_SAMPLE_TRIANGLES,
) -> HyperbolicityEstimate:
    """Slimness defect over geodesic triangles of the ball."""
    if ball.radius < 2:
        raise PreconditionError("delta estimation needs a ball of radius >= 2")
    scanner = TriangleScanner(ball)

    if mode == "exhaustive":
        r = scan_radius(ball)
        inner = [v for v, d in enumerate(ball.dist) if d <= r]
        pairs = ((y, z) for y in inner for z in inner)
        four_point = None
    elif mode == "sampled":
        rng = np.random.default_rng(seed)
        r = ball.radius
        pairs = (
            (int(rng.integers(len(ball))), int(rng.integers(len(ball)))) for _ in range(samples)
        )
        four_point = four_point_delta(ball, rng)
    else:
        raise PreconditionError(f"unknown delta mode {mode!r}")

    worst, witness, count, uncertified = 0.0, None, 0, 0
    for y, z in pairs:
        value = scanner.triangle(y, z)
        if value is None:
            uncertified += 1
            diagnostics.uncertified("triangle", f"({ball.words[y]}, {ball.words[z]})")
            continue
        count += 1
        if value > worst:
            worst, witness = value, (ball.words[y], ball.words[z])

    estimate = HyperbolicityEstimate(
        delta=Fraction(int(worst), 2),
        radius_used=r,
        method=mode,
        triangles=count,
        uncertified=uncertified,
        four_point=four_point,
        witness=witness,
    )
    logger.info(
        f"📊 delta ~ {estimate.delta} ({mode}, radius {r}, {count} triangles, {uncertified} uncertified)"
    )
    return estimate
