"""Value types for finitely presented groups."""

from dataclasses import dataclass, field
from enum import Enum, auto

from laminadesk.errors import ParseError, PreconditionError
from laminadesk.presentation import words


class ReduceMode(Enum):
    """How a word is reduced"""

    FREE = auto()
    CYCLIC = auto()

    def __str__(self):
        return self.name.lower()


@dataclass(frozen=True)
class GeneratorAlphabet:
    """Ordered generator symbols; the inverse of `a` is written `A`."""

    names: tuple[str, ...]

    def __post_init__(self):
        if len(set(self.names)) != len(self.names):
            raise ParseError(f"Duplicate generator in {self.names}")
        for name in self.names:
            if len(name) != 1 or not name.isalpha() or not name.islower():
                raise ParseError(f"Generator must be one lowercase letter: {name!r}")

    @property
    def letters(self) -> tuple[str, ...]:
        """Signed letters in shortlex order: a, A, b, B, ..."""
        return tuple(ch for name in self.names for ch in (name, name.upper()))

    @property
    def rank(self) -> int:
        return len(self.names)

    def inverse(self, letter: str) -> str:
        return letter.swapcase()

    def index(self, letter: str) -> int:
        """Position of the generator a letter belongs to."""
        return self.names.index(letter.lower())

    def check(self, letters: str) -> str:
        """Return `letters` unchanged, rejecting unknown symbols."""
        known = set(self.letters)
        for ch in letters:
            if ch not in known:
                raise ParseError(f"Unknown symbol {ch!r} for alphabet {''.join(self.names)}")
        return letters

    def shortlex_key(self, letters: str) -> tuple:
        order = {ch: i for i, ch in enumerate(self.letters)}
        return (len(letters), tuple(order[ch] for ch in letters))


@dataclass(frozen=True)
class Word:
    """Group word; `*` concatenates and freely reduces."""

    letters: str = ""

    def __len__(self):
        return len(self.letters)

    def __str__(self):
        return self.letters or "e"

    def __mul__(self, other: "Word") -> "Word":
        return Word(words.free_reduce(self.letters + other.letters))

    def __invert__(self) -> "Word":
        return Word(words.inverse(self.letters))

    def __pow__(self, n: int) -> "Word":
        if n < 0:
            return (~self) ** -n
        return Word(words.free_reduce(self.letters * n))

    @property
    def is_empty(self) -> bool:
        return not self.letters

    def reduced(self) -> "Word":
        return Word(words.free_reduce(self.letters))


@dataclass(frozen=True)
class CyclicWord:
    """Conjugacy class of a free-group word, stored in canonical rotation."""

    letters: str = ""

    @classmethod
    def of(cls, letters: str) -> "CyclicWord":
        return cls(words.least_rotation(words.cyclic_reduce(letters)))

    def __len__(self):
        return len(self.letters)

    def __str__(self):
        return self.letters or "e"

    @property
    def is_empty(self) -> bool:
        return not self.letters

    def inverse(self) -> "CyclicWord":
        return CyclicWord.of(words.inverse(self.letters))

    def rotations(self) -> list[str]:
        return words.rotations(self.letters)


@dataclass(frozen=True)
class Presentation:
    """Finite presentation <alphabet | relators>."""

    alphabet: GeneratorAlphabet
    relators: tuple[str, ...] = ()
    dehn_flag: bool = False
    name: str = ""

    def __post_init__(self):
        for rel in self.relators:
            self.alphabet.check(rel)
            if words.cyclic_reduce(rel) != rel or not rel:
                raise ParseError(f"Relator {rel!r} is not cyclically reduced")
        if self.dehn_flag:
            from laminadesk.presentation.dehn import small_cancellation_violations

            violations = small_cancellation_violations(self.relators)
            if violations:
                piece, rel = violations[0]
                raise PreconditionError(
                    f"dehn flag set but piece {piece!r} of {rel!r} "
                    f"is not shorter than 1/6 of the relator"
                )

    @property
    def is_free(self) -> bool:
        return not self.relators

    @property
    def genus(self) -> int | None:
        """Genus when the single relator is a product of commutators."""
        if len(self.relators) != 1:
            return None
        rel = self.relators[0]
        names = self.alphabet.names
        if len(rel) != 2 * len(names) or len(names) % 2 or len(names) < 4:
            return None
        expected = "".join(
            x + y + x.upper() + y.upper() for x, y in zip(names[::2], names[1::2])
        )
        return len(names) // 2 if rel == expected else None


@dataclass(frozen=True)
class Automorphism:
    """Substitution automorphism of a free group given on generators."""

    images: dict[str, str]
    inverse_images: dict[str, str] | None = None

    def image(self, letter: str) -> str:
        if letter.islower():
            if letter not in self.images:
                raise ParseError(f"Automorphism undefined on {letter!r}")
            return self.images[letter]
        return words.inverse(self.image(letter.lower()))

    def inverse(self) -> "Automorphism":
        if self.inverse_images is None:
            raise PreconditionError("Automorphism has no inverse supplied")
        return Automorphism(dict(self.inverse_images), dict(self.images))

    @property
    def is_identity(self) -> bool:
        return all(img == gen for gen, img in self.images.items())


@dataclass(frozen=True)
class FiberedPresentation:
    """Semidirect product fiber x Z with t x T = mu(x)."""

    fiber: Presentation
    monodromy: Automorphism
    stable_letter: str = "t"


@dataclass(frozen=True)
class Face:
    """One relator-labelled cell of a diagram."""

    relator: str
    removed: str
    inserted: str
    kind: str  # "dehn" or "swap"


@dataclass
class AnnularDiagram:
    """Annulus between two conjugate loops, built from a reduction trace."""

    boundary_outer: CyclicWord
    boundary_inner: CyclicWord
    conjugator: str = ""
    cells: list[Face] = field(default_factory=list)

    @property
    def area(self) -> int:
        return len(self.cells)

    @property
    def perimeter(self) -> int:
        return len(self.boundary_outer) + len(self.boundary_inner)
