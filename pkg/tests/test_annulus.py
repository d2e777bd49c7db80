"""Tests for annular diagrams and the isoperimetric fit."""

import pytest

from laminadesk.errors import NotConjugateError
from laminadesk.presentation import CyclicWord, build_annular_diagram, get_solver, isoperimetric_suite
from laminadesk.presentation import words


def test_equal_loops_have_empty_annulus(genus2):
    """outer = inner gives area 0."""
    diagram = build_annular_diagram(genus2, "ab", "ab")
    assert diagram.area == 0


def test_single_relator_application(genus2):
    """'a' spliced with one relator needs exactly one face."""
    diagram = build_annular_diagram(genus2, "aabABcdCD", "a")
    assert diagram.area == 1
    assert diagram.cells[0].kind == "dehn"


def test_boundaries_read_the_inputs(genus2):
    """Boundary labels are exactly the input cyclic words."""
    diagram = build_annular_diagram(genus2, "baB" + "c", "cb" + "aB")
    assert diagram.boundary_outer == CyclicWord.of("baBc")
    assert diagram.boundary_inner == CyclicWord.of("cbaB")


def test_conjugator_conjugates(genus2):
    """y . outer . y^-1 = inner up to rotation, checked in G."""
    outer, inner = "cdaabABcdCDDC", "a"
    diagram = build_annular_diagram(genus2, outer, inner)
    moved = words.conjugate(CyclicWord.of(outer).letters, diagram.conjugator)
    assert get_solver(genus2).equal(moved, "a")


def test_not_conjugate(genus2):
    """a and b are not conjugate."""
    with pytest.raises(NotConjugateError, match="not conjugate within search radius"):
        build_annular_diagram(genus2, "a", "b")


def test_half_swap_costs_one_face(genus2):
    """abAB and its swap dcDC bound a one-face annulus."""
    diagram = build_annular_diagram(genus2, "abAB", "dcDC")
    assert diagram.area == 1
    assert diagram.cells[0].kind == "swap"


def test_suite_fits_k(genus2):
    """Every diagram satisfies area <= K * perimeter for the fitted K."""
    rows, entry = isoperimetric_suite(genus2, instances=20, seed=1)
    assert len(rows) == 20
    assert entry.worst_residual >= 0
    assert all(r["area"] <= entry.value * r["perimeter"] + 1e-12 for r in rows)
    assert entry.value > 0
