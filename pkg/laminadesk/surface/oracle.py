"""Independent intersection oracle: axis crossings in the hyperbolic disk.

Each class is walked tile by tile along its axis for one period. A translate
g.Axis(v) crossing Axis(u) at a point of tile h.P passes through h.P, so g
can be taken as h.k^-1 with k.P a tile met by Axis(v). All such candidates
are tested exactly in the frame of h and deduplicated modulo translation by
u.

Frames: every tile carries the conjugate of the axis matrix into its own
coordinates, so all computations happen near the origin of the disk.
Positions along an axis with endpoints (b, f) are log|T(z)| for
T(z) = (z - b) / (z - f).
"""

import cmath
import logging
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from tqdm import tqdm

from laminadesk.config import Config
from laminadesk.errors import SurfaceModelError, TransversalityError
from laminadesk.presentation import words
from laminadesk.presentation.dehn import conjugacy_minimal
from laminadesk.surface.geometry import build_surface, word_matrix
from laminadesk.surface.intersection import intersection_number
from laminadesk.surface.models import CurveClass, SurfaceData

logger = logging.getLogger(__name__)

_C = np.array([[1, -1j], [1, 1j]])
_C_INV = np.linalg.inv(_C)
MERGE_TOLERANCE = 1e-7


def to_disk(matrix: np.ndarray) -> np.ndarray:
    return _C @ matrix.astype(complex) @ _C_INV


def mobius(m: np.ndarray, z: complex) -> complex:
    return (m[0, 0] * z + m[0, 1]) / (m[1, 0] * z + m[1, 1])


def fixed_points(m: np.ndarray) -> tuple[complex, complex]:
    """(repelling, attracting) fixed points of a hyperbolic disk isometry."""
    a, b, c, d = m[0, 0], m[0, 1], m[1, 0], m[1, 1]
    if abs(c) < 1e-14:
        raise SurfaceModelError("isometry fixes the origin; not hyperbolic")
    root = cmath.sqrt((d - a) ** 2 + 4 * b * c)
    z1 = ((a - d) + root) / (2 * c)
    z2 = ((a - d) - root) / (2 * c)
    if abs(c * z1 + d) > abs(c * z2 + d):
        return z2, z1
    return z1, z2


class AxisFrame:
    """An oriented geodesic seen from one tile."""

    def __init__(self, matrix: np.ndarray):
        self.matrix = matrix
        self.back, self.front = fixed_points(matrix)

    def t(self, z: complex) -> complex:
        return (z - self.back) / (z - self.front)

    def position(self, z: complex) -> float:
        return math.log(abs(self.t(z)))

    def crossing(self, e1: complex, e2: complex) -> tuple[bool, float, float]:
        """Whether the geodesic (e1, e2) crosses this axis, where, and its slope key."""
        t1, t2 = self.t(e1), self.t(e2)
        crosses = (t1 * t2.conjugate()).real < 0
        return crosses, 0.5 * math.log(abs(t1 * t2)), 0.5 * math.log(abs(t1 / t2))

    def point_at(self, p: float) -> complex:
        """Point of the axis at local position p."""
        mid = self.projection_of_origin()
        direction = self.t(mid) / abs(self.t(mid))
        w = math.exp(p) * direction
        return (w * self.front - self.back) / (w - 1)

    def projection_of_origin(self) -> complex:
        s = self.back + self.front
        if abs(s) < 1e-15:
            return 0j
        half = abs(cmath.phase(self.front / self.back)) / 2
        radius = (1 - math.sin(half)) / math.cos(half)
        return radius * s / abs(s)


class DiskTiling:
    """The regular 4g-gon centred at 0 and its neighbours."""

    def __init__(self, surface: SurfaceData):
        self.surface = surface
        self.n = surface.n_sides
        self.mats = {ch: to_disk(m) for ch, m in surface.matrices.items()}
        self.inv = {ch: np.linalg.inv(m) for ch, m in self.mats.items()}
        ell = surface.center_distance
        m0 = math.tanh(ell / 4)
        self.alpha = math.acos(2 * m0 / (1 + m0 * m0))
        self.side_radius = math.tan(self.alpha)
        centre_distance = 1 / math.cos(self.alpha)

        # each letter moves the tile across exactly one side
        self.psi: list[float] = []
        self.across: dict[int, str] = {}
        directions = {ch: cmath.phase(mobius(m, 0j)) for ch, m in self.mats.items()}
        ordered = sorted(directions.items(), key=lambda kv: kv[1])
        if len(ordered) != self.n:
            raise SurfaceModelError("expected one generator letter per polygon side")
        for k, (ch, phase) in enumerate(ordered):
            self.psi.append(phase)
            self.across[k] = ch
        self.side_of_letter = {ch: k for k, ch in self.across.items()}
        self.entry_side = {
            k: self.side_of_letter[ch.swapcase()] for k, ch in self.across.items()
        }
        self.centres = [centre_distance * cmath.exp(1j * p) for p in self.psi]
        self.ends = [
            (cmath.exp(1j * (p - self.alpha)), cmath.exp(1j * (p + self.alpha))) for p in self.psi
        ]

    def beyond(self, z: complex, k: int) -> bool:
        return abs(z - self.centres[k]) < self.side_radius - 1e-13

    def on_side(self, z: complex, k: int) -> bool:
        return abs(abs(z - self.centres[k]) - self.side_radius) < Config.TRANSVERSALITY_MARGIN

    def step(self, k: int) -> np.ndarray:
        """Matrix carrying P to the tile across side k."""
        return self.mats[self.across[k]]

    def step_inverse(self, k: int) -> np.ndarray:
        return self.inv[self.across[k]]


@dataclass
class Tile:
    word: str
    frame: AxisFrame
    anchor_local: float
    anchor_global: float

    def global_position(self, p_local: float) -> float:
        return self.anchor_global + p_local - self.anchor_local


def disk_tiling(surface: SurfaceData) -> DiskTiling:
    return _tiling_for(surface.presentation)


@lru_cache(maxsize=8)
def _tiling_for(presentation) -> DiskTiling:
    return DiskTiling(build_surface(presentation))


def _reduce_into_tile(tiling: DiskTiling, z: complex, matrix: np.ndarray) -> tuple[str, complex, np.ndarray]:
    word = ""
    for _ in range(Config.AXIS_WALK_MAX_TILES):
        for k in range(tiling.n):
            if tiling.beyond(z, k):
                z = mobius(tiling.step_inverse(k), z)
                matrix = tiling.step_inverse(k) @ matrix @ tiling.step(k)
                word += tiling.across[k]
                break
        else:
            return word, z, matrix
    raise SurfaceModelError("Dirichlet reduction did not terminate")


def _vertex_star(tiling: DiskTiling, tile: Tile, vertex: complex, anchor_point: complex, s_anchor: float) -> list[Tile]:
    """All tiles around a polygon vertex close to the axis."""
    found: dict[tuple[int, int], Tile] = {}
    queue = [(tile.word, tile.frame.matrix, vertex, anchor_point)]
    while queue and len(found) < 2 * tiling.n:
        word, matrix, v, x = queue.pop()
        key = (round(v.real * 1e5), round(v.imag * 1e5))
        if key in found:
            continue
        frame = AxisFrame(matrix)
        found[key] = Tile(word, frame, frame.position(x), s_anchor)
        for k in range(tiling.n):
            if tiling.on_side(v, k):
                inv = tiling.step_inverse(k)
                queue.append(
                    (
                        word + tiling.across[k],
                        inv @ matrix @ tiling.step(k),
                        mobius(inv, v),
                        mobius(inv, x),
                    )
                )
    return list(found.values())


def walk_axis(surface: SurfaceData, letters: str, shift: float = 0.0) -> tuple[list[Tile], float]:
    """Tiles met by the axis of a class over one period, and the period."""
    tiling = disk_tiling(surface)
    matrix = to_disk(word_matrix(surface, letters))
    period = 2 * math.acosh(abs(np.trace(word_matrix(surface, letters))) / 2)

    axis = AxisFrame(matrix)
    start = axis.projection_of_origin()
    if shift:
        start = axis.point_at(axis.position(start) + shift)
    word, z, local = _reduce_into_tile(tiling, start, matrix)
    frame = AxisFrame(local)
    p_in = frame.position(z)
    tiles = [Tile(word, frame, p_in, 0.0)]
    s_in = 0.0

    for _ in range(Config.AXIS_WALK_MAX_TILES):
        exits = []
        for k in range(tiling.n):
            crosses, p, _ = frame.crossing(*tiling.ends[k])
            if crosses and p > p_in + 1e-12:
                exits.append((p, k))
        if not exits:
            raise SurfaceModelError(f"axis of {letters} does not leave the tile")
        exits.sort()
        p_out, k_out = exits[0]
        if len(exits) > 1 and exits[1][0] - p_out < Config.TRANSVERSALITY_MARGIN:
            x_exit = frame.point_at(p_out)
            vertex = min(
                (v for v in _polygon_vertices(tiling)),
                key=lambda v: abs(v - x_exit),
            )
            tiles.extend(_vertex_star(tiling, tiles[-1], vertex, x_exit, s_in + p_out - p_in))

        s_out = s_in + (p_out - p_in)
        if s_out >= period:
            break
        inv = tiling.step_inverse(k_out)
        local = inv @ frame.matrix @ tiling.step(k_out)
        word += tiling.across[k_out]
        frame = AxisFrame(local)
        entry = tiling.entry_side[k_out]
        _, p_in, _ = frame.crossing(*tiling.ends[entry])
        s_in = s_out
        tiles.append(Tile(word, frame, p_in, s_in))
    else:
        raise SurfaceModelError(f"axis walk of {letters} exceeded {Config.AXIS_WALK_MAX_TILES} tiles")
    return tiles, period


@lru_cache(maxsize=1)
def _vertex_cache(n: int, radius: float, offset: float) -> tuple[complex, ...]:
    return tuple(radius * cmath.exp(1j * (offset + math.pi * (2 * k + 1) / n)) for k in range(n))


def _polygon_vertices(tiling: DiskTiling) -> tuple[complex, ...]:
    n = tiling.n
    cosh_r = 1 / math.tan(math.pi / n) ** 2
    radius = math.tanh(math.acosh(cosh_r) / 2)
    return _vertex_cache(n, radius, tiling.psi[0])


def _count_crossings(surface: SurfaceData, u: str, v: str, shift: float) -> int:
    tiles_u, period_u = walk_axis(surface, u, shift)
    tiles_v, _ = walk_axis(surface, v, shift / 2)
    points: list[tuple[float, float]] = []
    for tile in tiles_u:
        ub, uf = tile.frame.back, tile.frame.front
        for other in tiles_v:
            vb, vf = other.frame.back, other.frame.front
            if min(abs(vb - ub) + abs(vf - uf), abs(vb - uf) + abs(vf - ub)) < MERGE_TOLERANCE:
                continue
            crosses, p_local, slope = tile.frame.crossing(vb, vf)
            if not crosses:
                continue
            p = tile.global_position(p_local) % period_u
            if period_u - p < MERGE_TOLERANCE:
                p = 0.0
            points.append((p, slope))

    points.sort()
    distinct: list[tuple[float, float]] = []
    for p, q in points:
        close = [
            max(min(abs(p - p2), period_u - abs(p - p2)), abs(q - q2)) for p2, q2 in distinct
        ]
        nearest = min(close, default=math.inf)
        if nearest < MERGE_TOLERANCE:
            continue
        if nearest < Config.TRANSVERSALITY_MARGIN:
            raise TransversalityError("transversality margin too small")
        distinct.append((p, q))
    return len(distinct)


def intersection_oracle(surface: SurfaceData, c1: CurveClass | str, c2: CurveClass | str) -> int:
    """Geometric intersection number from axis crossings.

    The second class is replaced by its primitive root, and the count is
    multiplied by the power; (c, c) counts every double point twice.
    """
    u = _minimal(surface, c1)
    v_root, q = words.primitive_root(_minimal(surface, c2))
    last_error = None
    for attempt in range(Config.TRANSVERSALITY_RETRIES + 1):
        shift = 0.0 if attempt == 0 else 0.137 * attempt
        try:
            return q * _count_crossings(surface, u, v_root, shift)
        except TransversalityError as e:
            last_error = e
            logger.warning(f"⚠️ Transversality retry {attempt + 1} for ({u}, {v_root})")
    raise last_error or TransversalityError("transversality margin too small")


def _minimal(surface: SurfaceData, curve: CurveClass | str) -> str:
    letters = curve.letters if isinstance(curve, CurveClass) else curve
    result = conjugacy_minimal(surface.presentation, letters)
    if result.word.is_empty:
        raise SurfaceModelError(f"class {letters} is trivial")
    return result.word.letters


def random_class(rng: np.random.Generator, surface: SurfaceData, max_length: int) -> str:
    """Conjugacy-minimal representative of a random nontrivial class over all generators."""
    letters = surface.presentation.alphabet.letters
    while True:
        w = words.random_cyclic_word(rng, letters, int(rng.integers(1, max_length + 1)))
        minimal = conjugacy_minimal(surface.presentation, w).word
        if not minimal.is_empty and len(minimal) <= max_length:
            return minimal.letters


def cross_validation_suite(surface: SurfaceData, pairs: int = 50, max_length: int = 6, seed: int = 0) -> list[dict]:
    """Compare combinatorial and oracle intersection numbers on random pairs of classes."""
    rng = np.random.default_rng(seed)
    rows = []
    for i in tqdm(range(pairs), desc="intersect", disable=pairs < 20):
        u = random_class(rng, surface, max_length)
        v = random_class(rng, surface, max_length)
        combinatorial = intersection_number(surface, u, v)
        oracle = intersection_oracle(surface, u, v)
        rows.append(
            {
                "pair": i,
                "u": u,
                "v": v,
                "combinatorial": combinatorial,
                "oracle": oracle,
                "agree": combinatorial == oracle,
            }
        )
    return rows
