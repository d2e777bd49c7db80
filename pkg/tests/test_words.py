"""Tests for word algebra and the presentation file format."""

import numpy as np
import pytest

from laminadesk.errors import ParseError, PreconditionError
from laminadesk.presentation import CyclicWord, Word, reduce
from laminadesk.presentation import words
from laminadesk.presentation.models import GeneratorAlphabet
from laminadesk.presentation.parser import parse_group_text, parse_word


class TestReduce:
    """reduce() in free and cyclic mode."""

    def test_free_cancellation(self):
        """a a^-1 b reduces to b."""
        assert reduce(Word("aAb"), "free") == Word("b")

    def test_cyclic_cancellation(self):
        """b a b^-1 reduces cyclically to a."""
        assert reduce(Word("baB"), "cyclic") == CyclicWord("a")

    def test_reduced_word_unchanged(self):
        """The commutator is already reduced."""
        assert reduce(Word("abAB"), "free") == Word("abAB")

    def test_idempotent_and_inverse(self):
        """reduce is idempotent and w * w^-1 is empty on random words."""
        rng = np.random.default_rng(7)
        for _ in range(200):
            raw = "".join(rng.choice(list("aAbBcC"), size=int(rng.integers(0, 12))))
            once = words.free_reduce(raw)
            assert words.free_reduce(once) == once
            w = Word(raw)
            assert (w * ~w).is_empty


class TestWordAlgebra:
    """Operators on Word and CyclicWord."""

    def test_power_and_inverse(self):
        """(ab)^-2 = BABA."""
        assert Word("ab") ** -2 == Word("BABA")

    def test_cyclic_word_canonical_rotation(self):
        """Rotations compare equal."""
        assert CyclicWord.of("bAB" + "a") == CyclicWord.of("abAB")

    def test_primitive_root(self):
        """abab = (ab)^2."""
        assert words.primitive_root("abab") == ("ab", 2)

    def test_conjugator_of_cyclic_reduction(self):
        """core = x . w . x^-1 for the returned x."""
        core, x = words.cyclic_reduce_with_conjugator("cabC")
        assert core == "ab"
        assert words.conjugate("cabC", x) == "ab"

    def test_shortlex_enumeration_counts(self):
        """Free group of rank 2: 1 + 4 + 12 = 17 words up to length 2."""
        assert len(list(words.shortlex_words("aAbB", 2))) == 17


class TestParser:
    """Presentation file format."""

    def test_genus2_file(self):
        """gens/rel/dehn lines give a flagged presentation of genus 2."""
        p = parse_group_text("gens: a b c d\nrel: abABcdCD\ndehn: true\n")
        assert p.dehn_flag
        assert p.genus == 2

    def test_dehn_flag_rejected_for_flat_relator(self):
        """abAB has pieces of length 1 >= 4/6."""
        with pytest.raises(PreconditionError):
            parse_group_text("gens: a b\nrel: abAB\ndehn: true\n")

    def test_unknown_symbol(self):
        """Relators over unknown letters are parse errors."""
        with pytest.raises(ParseError):
            parse_group_text("gens: a b\nrel: abx\n")

    def test_fibered_needs_inverse_for_long_images(self):
        """A non-permutation monodromy without inverse lines is rejected."""
        with pytest.raises(ParseError):
            parse_group_text("gens: a b\nstable: t\nmonodromy: a -> ab\n")

    def test_permutation_inverse_is_derived(self):
        """a -> B, b -> a inverts to a -> b, b -> A."""
        f = parse_group_text("gens: a b\nstable: t\nmonodromy: a -> B\nmonodromy: b -> a\n")
        assert f.monodromy.inverse_images == {"b": "A", "a": "b"}

    def test_parse_word_identity(self):
        """'e' is the identity when e is not a generator."""
        assert parse_word(GeneratorAlphabet(("a", "b")), "e") == ""
