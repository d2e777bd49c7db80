"""Tests for train tracks: legality, switch conditions, carrying, splitting and lengthening."""

from fractions import Fraction

import pytest

from laminadesk.errors import HypothesisViolation, ParseError, PreconditionError, SplittingError, TrackError
from laminadesk.surface import Multicurve
from laminadesk.traintrack import (
    Corner,
    CornerArc,
    Region,
    SplittingMove,
    Weighting,
    annular_components,
    carry,
    check_switch,
    corner_to_midpoint_move,
    frontier_cycles,
    lengthen_branches,
    longest_strip,
    parse_track_text,
    split,
    thick_branches,
    thick_loop,
    train_paths,
    validate,
)


def classes(multicurve: Multicurve) -> list[tuple[str, Fraction]]:
    return sorted((str(c), w) for c, w in multicurve.components)


def assert_pieces_cover(track, pullback):
    for b, stretches in pullback.pieces.items():
        assert sum(x1 - x0 for _, x0, x1, _ in stretches) == track.lengths[b]


class TestParsing:
    """Track files."""

    def test_handle_shape(self, handle_track):
        """One switch, two branches, lengths default to 1."""
        assert len(handle_track.switches) == 1
        assert handle_track.lengths == {"x": 1, "y": 1}
        assert handle_track.euler == -1

    def test_unknown_section(self):
        with pytest.raises(ParseError):
            parse_track_text("[bogus]\nx 1\n")

    def test_bad_half_branch(self):
        with pytest.raises(ParseError):
            parse_track_text("[branches]\nx s s\n[switches]\ns A: x.2 | B: x.0\n")

    def test_annulus_flag_checked(self):
        """A disk cannot be flagged as an annulus."""
        with pytest.raises(ParseError):
            parse_track_text("[regions]\nD sides=1 genus=0 annulus=yes\n")

    def test_boundary_sides_bounded(self):
        with pytest.raises(ParseError):
            parse_track_text("[regions]\nP sides=1 genus=0 boundary=2\n")

    def test_half_branch_attached_twice(self):
        with pytest.raises(ParseError):
            parse_track_text("[branches]\nx s s\n[switches]\ns A: x.1 x.1 | B: x.0\n")

    def test_values_for_unknown_branch(self):
        with pytest.raises(ParseError):
            parse_track_text("[branches]\ncore - -\n[weights]\nother 1\n")


class TestValidate:
    """Legality and census consistency."""

    def test_handle_is_legal(self, handle_track):
        assert validate(handle_track) == []

    def test_strip_is_legal(self, strip_track):
        assert validate(strip_track) == []

    def test_single_annular_branch_is_legal(self, annulus_track):
        assert validate(annulus_track) == []

    def test_bigon_reported(self, bigon_track):
        """A disk with two corners is forbidden."""
        problems = validate(bigon_track)
        assert any("D1" in p and "two or fewer" in p for p in problems)

    def test_cornerless_annulus_reported(self, annulus_track):
        region = Region("A", 0, (), sides=2)
        track = annulus_track.replace(regions=(region,), surface_euler=0)
        assert any("annulus with no corners" in p for p in validate(track))

    def test_euler_mismatch_reported(self, handle_track):
        track = handle_track.replace(surface_euler=-4)
        assert any("Euler count" in p for p in validate(track))

    def test_no_census_means_structure_only(self, handle_track):
        assert validate(handle_track.replace(regions=None)) == []

    def test_dangling_half_branch(self, handle_track):
        """A branch whose end sits on no switch is structural, not a legality problem."""
        branches = {**handle_track.branches, "z": ("s", "s")}
        with pytest.raises(TrackError):
            validate(handle_track.replace(branches=branches, lengths={**handle_track.lengths, "z": 1}))


class TestFrontier:
    """Boundary components of the track neighbourhood."""

    def test_handle_single_cycle(self, handle_track):
        cycles = frontier_cycles(handle_track)
        assert len(cycles) == 1
        assert set(cycles[0]) == {Corner("s", "A", 0), Corner("s", "B", 0)}

    def test_bigon_cycles(self, bigon_track):
        cycles = frontier_cycles(bigon_track)
        assert len(cycles) == 3
        assert sorted(len(c) for c in cycles) == [0, 0, 2]

    def test_strip_cycles(self, strip_track):
        cycles = frontier_cycles(strip_track)
        assert sorted(len(c) for c in cycles) == [2, 2]

    def test_closed_branch_two_sides(self, annulus_track):
        assert frontier_cycles(annulus_track) == [[], []]


class TestSwitchCondition:
    def test_all_zero(self, bigon_track):
        assert check_switch(bigon_track, Weighting.of({"u": 0, "v": 0, "t": 0}))

    def test_annulus_any_weight(self, annulus_track):
        """No switches, nothing to balance."""
        assert check_switch(annulus_track, Weighting.of({"core": 5}))

    def test_unbalanced_switch(self, bigon_track):
        """Sides {3} against {1, 1}."""
        assert not check_switch(bigon_track, Weighting.of({"u": 1, "v": 1, "t": 3}))

    def test_balanced_fixtures(self, bigon_track, strip_track, handle_track):
        for track in (bigon_track, strip_track, handle_track):
            assert check_switch(track, track.weights)

    def test_negative_weight_rejected(self, bigon_track):
        with pytest.raises(PreconditionError):
            check_switch(bigon_track, Weighting.of({"u": -1, "v": 1, "t": 0}))


class TestCarry:
    """Resolving integral weights into curves."""

    def test_annulus_weight_one(self, annulus_track, genus2):
        mc = carry(annulus_track, Weighting.of({"core": 1}), genus2)
        assert classes(mc) == classes(Multicurve(genus2, [("a", 1)]))

    def test_annulus_multiplicity(self, annulus_track, genus2):
        mc = carry(annulus_track, annulus_track.weights, genus2)
        assert classes(mc) == classes(Multicurve(genus2, [("a", 5)]))

    def test_handle_curve(self, handle_track, genus2):
        """Weights (2, 1) resolve into the single curve aab."""
        paths = train_paths(handle_track, handle_track.weights)
        assert len(paths) == 1
        assert sorted(b for b, _ in paths[0]) == ["x", "x", "y"]
        mc = carry(handle_track, handle_track.weights, genus2)
        assert classes(mc) == classes(Multicurve(genus2, [("aab", 1)]))

    def test_non_integral_rejected(self, annulus_track, genus2):
        with pytest.raises(PreconditionError):
            carry(annulus_track, Weighting.of({"core": Fraction(1, 2)}), genus2)

    def test_missing_chart_word(self, bigon_track, genus2):
        with pytest.raises(PreconditionError):
            carry(bigon_track, bigon_track.weights, genus2)


class TestThickness:
    def test_strip_thick_branches(self, strip_track):
        assert thick_branches(strip_track, strip_track.weights) == ["b1", "b2"]
        assert longest_strip(strip_track, strip_track.weights) == 2
        assert thick_loop(strip_track, strip_track.weights) is None

    def test_handle_thick_loop(self, handle_track):
        assert thick_loop(handle_track, handle_track.weights) == ["x"]

    def test_closed_branch_never_thick(self, annulus_track):
        assert thick_branches(annulus_track, annulus_track.weights) == []


class TestSplit:
    """Cutting along corner arcs."""

    def test_empty_move(self, strip_track):
        new, pullback = split(strip_track, SplittingMove())
        assert new is strip_track
        assert pullback(strip_track.weights) == strip_track.weights

    def test_needs_measure(self, strip_track):
        with pytest.raises(PreconditionError):
            split(strip_track.replace(weights=None), SplittingMove((CornerArc(Corner("s", "A", 0)),)))

    def test_cut_to_collision(self, strip_track):
        """From s:A:0 the arc runs through b2, k2 and b1 and hits s:B:0."""
        new, pullback = split(strip_track, SplittingMove((CornerArc(Corner("s", "A", 0)),)))
        assert sorted(new.lengths.values()) == [1, 1, 14]
        assert len(new.switches) == 2
        assert validate(new) == []
        (region,) = new.regions
        assert region.euler == -1
        assert len(region.corners) == 2
        assert pullback(new.weights) == strip_track.weights
        assert check_switch(new, new.weights)
        assert_pieces_cover(new, pullback)

    def test_cut_to_midpoint(self, strip_track):
        arc = CornerArc(Corner("s0", "A", 0), path=("b1",), exit=Fraction(1, 2))
        new, pullback = split(strip_track, SplittingMove((arc,)))
        assert len(new.branches) == 5
        assert len(new.switches) == 3
        assert sorted(new.lengths.values()) == [1, 1, 2, 2, 4]
        assert validate(new) == []
        assert pullback(new.weights) == strip_track.weights

    def test_arc_crossing_band(self, handle_track):
        """The arc from s:A:0 enters x, not y."""
        arc = CornerArc(Corner("s", "A", 0), path=("y",))
        with pytest.raises(SplittingError, match="positive-weight band"):
            split(handle_track, SplittingMove((arc,)))

    def test_unknown_corner(self, handle_track):
        with pytest.raises(SplittingError):
            split(handle_track, SplittingMove((CornerArc(Corner("s", "A", 3)),)))

    def test_exit_needs_path(self):
        with pytest.raises(SplittingError):
            CornerArc(Corner("s", "A", 0), exit=Fraction(1, 2))

    def test_handle_cut_off_annulus(self, handle_track, genus2):
        """Cutting the handle leaves a single closed branch carrying the same curve."""
        new, pullback = split(handle_track, SplittingMove((CornerArc(Corner("s", "B", 0)),)))
        assert len(new.branches) == 1
        (branch,) = new.branches
        assert new.is_closed(branch)
        assert len(annular_components(new)) > len(annular_components(handle_track))
        assert pullback(new.weights) == handle_track.weights
        before = carry(handle_track, handle_track.weights, genus2)
        after = carry(new, new.weights, genus2)
        assert classes(after) == classes(before)


class TestLengthen:
    """Branch lengthening passes."""

    def test_already_long(self, annulus_track):
        result = lengthen_branches(annulus_track, 1)
        assert result.moves == []
        assert result.passes == []
        assert result.track is annulus_track

    def test_midpoint_round_averages(self, strip_track):
        """Thick branches of lengths 2 and 4 leave a new thick branch of length 3."""
        new, _ = split(strip_track, corner_to_midpoint_move(strip_track))
        assert sorted(new.lengths.values()) == [3, 4, 4, 4]
        assert validate(new) == []

    def test_one_pass_on_strip(self, strip_track):
        """Minimum 1 grows past 3/2 and past the target 2 in one pass."""
        result = lengthen_branches(strip_track, 2)
        assert len(result.passes) == 1
        record = result.passes[0]
        assert record.min_before == 1
        assert record.growth >= Fraction(3, 2)
        assert result.track.min_length > 2
        assert validate(result.track) == []

    def test_composite_pullback(self, strip_track):
        result = lengthen_branches(strip_track, 2)
        total = result.pullback()
        assert total(result.track.weights) == strip_track.weights
        assert_pieces_cover(result.track, total)

    def test_supplied_lengths(self, strip_track):
        """Lengths passed in replace the file's; nothing to do when all exceed the target."""
        lengths = {b: 5 for b in strip_track.branches}
        result = lengthen_branches(strip_track, 4, lengths=lengths)
        assert result.moves == []
        assert result.track.lengths == lengths

    def test_annulus_cut_is_a_hypothesis_violation(self, handle_track):
        """Weights 2 and 1 put both corners at one height, so the loop cuts meet and close off an annulus."""
        with pytest.raises(HypothesisViolation) as info:
            lengthen_branches(handle_track, 2)
        assert info.value.diagnostic

    def test_loop_split_is_a_euclid_step(self, golden_track):
        """Cutting to the middle of the thick loop subtracts the thin weight and keeps one switch."""
        new, pullback = split(golden_track, corner_to_midpoint_move(golden_track, ["x"]))
        assert sorted(new.weights[b] for b in new.branches) == [34, 55]
        assert sorted(new.lengths.values()) == [1, 2]
        assert len(new.switches) == 1
        assert annular_components(new) == []
        assert validate(new) == []
        assert pullback(new.weights) == golden_track.weights

    def test_passes_on_golden(self, golden_track):
        """Every pass grows the minimum by at least 3/2 until it passes 8."""
        result = lengthen_branches(golden_track, 8)
        assert [p.min_after for p in result.passes] == [2, 3, 5, 8, 13]
        assert all(p.growth >= Fraction(3, 2) for p in result.passes)
        assert all(p.loops_removed > 0 for p in result.passes)
        assert len(result.moves) == 6
        assert annular_components(result.track) == []
        assert validate(result.track) == []
        assert result.track.weights.is_integral

    def test_golden_pullback(self, golden_track):
        result = lengthen_branches(golden_track, 8)
        total = result.pullback()
        assert total(result.track.weights) == golden_track.weights
        assert_pieces_cover(result.track, total)

    def test_target_must_be_positive(self, strip_track):
        with pytest.raises(PreconditionError):
            lengthen_branches(strip_track, 0)
