"""Weighted multicurves as geodesic currents."""

from dataclasses import dataclass, field
from fractions import Fraction

from laminadesk.errors import PreconditionError
from laminadesk.presentation.dehn import conjugacy_minimal
from laminadesk.surface.models import CurveClass, Multicurve, SurfaceData


@dataclass
class Current:
    """A multicurve times a positive real scale.

    Weights stay exact rationals; normalisation only changes `scale`, so
    intersection numbers of the components are never rounded.
    """

    surface: SurfaceData
    multicurve: Multicurve
    scale: float = 1.0
    unit: bool = False  # set by normalize

    @classmethod
    def of(cls, surface: SurfaceData, components) -> "Current":
        """Build from (word or CurveClass, weight) pairs."""
        return cls(surface, Multicurve(surface.presentation, components))

    @classmethod
    def curve(cls, surface: SurfaceData, word: str, weight=1) -> "Current":
        return cls.of(surface, [(word, weight)])

    @property
    def components(self) -> list[tuple[CurveClass, Fraction]]:
        return self.multicurve.components

    @property
    def is_zero(self) -> bool:
        return not self.components

    def weights(self) -> list[tuple[CurveClass, float]]:
        """Effective real weight of every component."""
        return [(c, float(w) * self.scale) for c, w in self.components]

    def scaled(self, factor: float) -> "Current":
        if factor < 0:
            raise PreconditionError("currents only scale by nonnegative factors")
        return Current(self.surface, self.multicurve, self.scale * factor)

    def __repr__(self):
        parts = ", ".join(f"{w:.4g}*{c}" for c, w in self.weights())
        return f"Current({parts})"


@dataclass
class TestSet:
    """Probe curves standing in for a neighbourhood basis."""

    __test__ = False  # not a pytest class

    surface: SurfaceData
    probes: list[CurveClass] = field(default_factory=list)

    def __post_init__(self):
        if not self.probes:
            raise PreconditionError("a test set needs at least one probe")
        self.probes = [CurveClass.of(p) if isinstance(p, str) else p for p in self.probes]
        seen = {}
        for probe in self.probes:
            key = min(conjugacy_minimal(self.surface.presentation, probe.word).representatives)
            if key in seen:
                raise PreconditionError(f"probes {seen[key]} and {probe} are conjugate")
            seen[key] = probe

    @property
    def labels(self) -> list[str]:
        return [str(p) for p in self.probes]

    def __len__(self):
        return len(self.probes)
