from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from laminadesk.errors import ParseError, PreconditionError
from laminadesk.presentation import words
from laminadesk.presentation.models import CyclicWord, Presentation


@dataclass
class SurfaceData:
    """Closed surface of genus g with its regular 4g-gon model.

    `matrices` holds an SL(2,R) matrix per signed letter; the relator
    evaluates to +-I. `sides` maps each letter to the polygon side its
    matrix carries the polygon across, `pairing` maps a side to the side
    it is glued to.
    """

    genus: int
    presentation: Presentation
    matrices: dict[str, np.ndarray]
    side_angles: list[float]
    sides: dict[str, int]
    pairing: dict[int, int]
    center_distance: float  # Distance between adjacent tile centres
    convention: str = ""
    vertex_order: list[str] = field(default_factory=list)

    @property
    def n_sides(self) -> int:
        return 4 * self.genus


@dataclass(frozen=True)
class CurveClass:
    """Free homotopy class of a closed curve, as a cyclic word."""

    word: CyclicWord

    @classmethod
    def of(cls, letters: str) -> "CurveClass":
        cw = CyclicWord.of(letters)
        if cw.is_empty:
            raise PreconditionError(f"curve {letters!r} is not essential")
        return cls(cw)

    def __str__(self):
        return str(self.word)

    def __len__(self):
        return len(self.word)

    @property
    def letters(self) -> str:
        return self.word.letters

    def power(self) -> tuple["CurveClass", int]:
        root, k = words.primitive_root(self.letters)
        return CurveClass(CyclicWord.of(root)), k


class Multicurve:
    """Weighted curve system; conjugate components merge on insert."""

    def __init__(self, presentation: Presentation, components=None):
        self.presentation = presentation
        self._components: dict[str, tuple[CurveClass, Fraction]] = {}
        for curve, weight in components or []:
            self.add(curve, weight)

    def class_key(self, curve: CurveClass) -> str:
        from laminadesk.presentation.dehn import conjugacy_minimal

        result = conjugacy_minimal(self.presentation, curve.word)
        if result.word.is_empty:
            raise PreconditionError(f"curve {curve} is null-homotopic")
        return min(result.representatives)

    def add(self, curve: CurveClass | str, weight=1) -> None:
        if isinstance(curve, str):
            curve = CurveClass.of(curve)
        weight = Fraction(weight)
        if weight < 0:
            raise ParseError(f"negative weight {weight} for {curve}")
        root, k = curve.power()
        weight *= k
        key = self.class_key(root)
        if key in self._components:
            existing, w = self._components[key]
            self._components[key] = (existing, w + weight)
        else:
            self._components[key] = (CurveClass(CyclicWord.of(key)), weight)

    @property
    def components(self) -> list[tuple[CurveClass, Fraction]]:
        return [c for c in self._components.values() if c[1] != 0]

    def scaled(self, factor) -> "Multicurve":
        factor = Fraction(factor)
        return Multicurve(self.presentation, [(c, w * factor) for c, w in self.components])

    def __len__(self):
        return len(self.components)

    def __repr__(self):
        parts = ", ".join(f"{w}*{c}" for c, w in self.components)
        return f"Multicurve({parts})"
