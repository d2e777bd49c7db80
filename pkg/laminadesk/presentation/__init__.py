from laminadesk.presentation.annulus import (
    build_annular_diagram,
    fit_isoperimetric_constant,
    isoperimetric_suite,
)
from laminadesk.presentation.dehn import (
    ConjugacyResult,
    DehnSolver,
    are_conjugate,
    conjugacy_minimal,
    dehn_reduce,
    reduce,
)
from laminadesk.presentation.fibered import FiberedGroup, apply_automorphism, normal_form
from laminadesk.presentation.models import (
    AnnularDiagram,
    Automorphism,
    CyclicWord,
    FiberedPresentation,
    GeneratorAlphabet,
    Presentation,
    ReduceMode,
    Word,
)
from laminadesk.presentation.parser import load_fibered, load_group, load_presentation, parse_word
from laminadesk.presentation.solver import WordProblemSolver, get_solver

__all__ = [
    "AnnularDiagram",
    "Automorphism",
    "ConjugacyResult",
    "CyclicWord",
    "DehnSolver",
    "FiberedGroup",
    "FiberedPresentation",
    "GeneratorAlphabet",
    "Presentation",
    "ReduceMode",
    "Word",
    "WordProblemSolver",
    "apply_automorphism",
    "are_conjugate",
    "build_annular_diagram",
    "conjugacy_minimal",
    "dehn_reduce",
    "fit_isoperimetric_constant",
    "get_solver",
    "isoperimetric_suite",
    "load_fibered",
    "load_group",
    "load_presentation",
    "normal_form",
    "parse_word",
    "reduce",
]
