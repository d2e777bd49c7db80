"""Tests for monodromy action and fibered normal forms."""

import numpy as np
import pytest

from laminadesk.errors import ParseError
from laminadesk.presentation import Automorphism, FiberedGroup, Word, apply_automorphism, are_conjugate, normal_form
from laminadesk.presentation import words
from laminadesk.presentation.fibered import apply_power


class TestApplyAutomorphism:
    """Substitution automorphisms."""

    def test_identity(self):
        """Identity automorphism only reduces."""
        mu = Automorphism({"a": "a", "b": "b"}, {"a": "a", "b": "b"})
        assert apply_automorphism(mu, "abBa").letters == "aa"

    def test_twist(self):
        """a -> ab, b -> b on aa gives abab."""
        mu = Automorphism({"a": "ab", "b": "b"}, {"a": "aB", "b": "b"})
        assert apply_automorphism(mu, "aa").letters == "abab"

    def test_unknown_symbol(self):
        """Letters outside the domain are rejected."""
        mu = Automorphism({"a": "ab", "b": "b"})
        with pytest.raises(ParseError):
            apply_automorphism(mu, "ax")

    def test_round_trip_on_random_words(self, fibered_pa):
        """mu^-1(mu(w)) = reduce(w) on 1000 random words."""
        mu = fibered_pa.monodromy
        rng = np.random.default_rng(0)
        for _ in range(1000):
            w = words.random_reduced_word(rng, "aAbBcCdD", int(rng.integers(0, 10)))
            back = apply_automorphism(mu.inverse(), apply_automorphism(mu, w))
            assert back.letters == words.free_reduce(w)

    def test_handle_maps_fix_relator(self, fibered_handles):
        """mu(abABcdCD) = abABcdCD letter for letter."""
        assert apply_automorphism(fibered_handles.monodromy, "abABcdCD").letters == "abABcdCD"


class TestNormalForm:
    """w = t^k u."""

    def test_conjugation_by_t(self, fibered_pa):
        """t a t^-1 = mu(a) = aba."""
        assert normal_form(fibered_pa, "taT") == (0, Word("aba"))

    def test_fiber_letter(self, fibered_pa):
        """a is (0, a)."""
        assert normal_form(fibered_pa, "a") == (0, Word("a"))

    def test_stable_letters_first(self, fibered_pa):
        """t t a is already normal: (2, a)."""
        assert normal_form(fibered_pa, "tta") == (2, Word("a"))

    def test_moving_t_left(self, fibered_handles):
        """a t t = t t mu^-2(a); mu^-1(a) = aB, mu^-2(a) = aB.aBB."""
        assert normal_form(fibered_handles, "att") == (2, Word("aBaBB"))

    def test_multiply_back(self, fibered_handles):
        """t^k u w^-1 is the identity for random words."""
        group = FiberedGroup(fibered_handles)
        rng = np.random.default_rng(5)
        for _ in range(100):
            w = words.random_reduced_word(rng, "aAbBcCdDtT", int(rng.integers(1, 8)))
            k, u = group.normal_form(w)
            assert group.is_identity(group.to_word(k, u.letters) + words.inverse(w))

    def test_level_words(self, fibered_handles):
        """Level k reads mu^-k: lengths 1, 2, 5 upward and 3, 8 downward for a."""
        group = FiberedGroup(fibered_handles)
        lengths = [len(group.level_word("a", k)) for k in (-2, -1, 0, 1, 2)]
        assert lengths == [8, 3, 1, 2, 5]

    def test_level_words_across_handles(self, fibered_pa):
        """mu(a) = aba and mu^-1(a) = aBca; the positive word mu^2(a) has 14 letters."""
        group = FiberedGroup(fibered_pa)
        assert group.level_word("a", 1) == "aBca"
        lengths = [len(group.level_word("a", k)) for k in (-2, -1, 0, 1)]
        assert lengths == [14, 3, 1, 4]

    def test_apply_power_matches_levels(self, fibered_handles, fibered_pa):
        """apply_power with k = -1 is mu^-1."""
        assert apply_power(fibered_handles.monodromy, "b", -1) == "bbA"
        assert apply_power(fibered_pa.monodromy, "b", -1) == "ACbACbA"

    def test_verify(self, fibered_pa, fibered_handles, fibered_id):
        """All fixtures define automorphisms preserving the relator."""
        FiberedGroup(fibered_pa).verify()
        FiberedGroup(fibered_handles).verify()
        FiberedGroup(fibered_id).verify()


class TestTwistAcrossHandles:
    """The twist along ac moves the separating curve abAB."""

    def test_relator_up_to_conjugacy(self, fibered_pa):
        image = words.cyclic_reduce(apply_automorphism(fibered_pa.monodromy, "abABcdCD").letters)
        assert image != "abABcdCD"
        assert are_conjugate(fibered_pa.fiber, image, "abABcdCD")[0]

    def test_separating_curve_moves(self, fibered_pa):
        """mu(abAB) is not conjugate to abAB or its inverse."""
        image = apply_automorphism(fibered_pa.monodromy, "abAB").letters
        for target in ("abAB", "baBA"):
            assert not are_conjugate(fibered_pa.fiber, image, target)[0]

    def test_handle_maps_fix_separating_curve(self, fibered_handles):
        assert apply_automorphism(fibered_handles.monodromy, "abAB").letters == "abAB"
