"""Tests for adapted maps, shortcuts, the straightening iteration, loop partitions and the drift pipeline."""

from fractions import Fraction
from itertools import product

import pytest

from laminadesk.cayley import build_ball, build_quotient_ball
from laminadesk.ending import (
    AdaptedMap,
    LoopArc,
    PathMetric,
    ShortcutSearch,
    bounds_report,
    compose_exit_curve,
    find_shortcuts,
    infiniteness_scan,
    lamination_image_length,
    leave_compact_check,
    long_run_fraction,
    maximal_shortcut_family,
    next_length_bound,
    partition_loop,
    run_until_stable,
    smallest_threshold,
    start,
    straighten_step,
    tighten,
    worst_long_run,
)
from laminadesk.ending import iteration
from laminadesk.errors import PreconditionError, StepError
from laminadesk.presentation.fibered import apply_power
from laminadesk.surface import build_surface
from laminadesk.traintrack import Weighting


@pytest.fixture(scope="module")
def hept(heptagon):
    return PathMetric(heptagon)


@pytest.fixture(scope="module")
def free(free2):
    return PathMetric(free2)


@pytest.fixture(scope="module")
def detour(detour_track, hept):
    return AdaptedMap.from_track(detour_track, hept)


@pytest.fixture(scope="module")
def overlap(handle_track, hept):
    return AdaptedMap(handle_track, hept, {"x": "abcdef" + "d" * 9, "y": "e" * 15})


@pytest.fixture(scope="module")
def one_switch(handle_track, hept):
    return AdaptedMap(handle_track, hept, {"x": "d" * 9 + "abc", "y": "de" + "e" * 10})


@pytest.fixture(scope="module")
def free_handle(handle_track, free):
    return AdaptedMap(handle_track, free, {"x": "aabbb", "y": "BBBaa"})


def brute_worst(n: int, k: int, L: int) -> int:
    best = None
    for seq in product((0, 1), repeat=n):
        if sum(seq) == k:
            got = long_run_fraction(seq, L) * n
            best = got if best is None else min(best, got)
    return int(best)


class TestPathMetric:
    def test_needs_solvable_word_problem(self, flat):
        with pytest.raises(PreconditionError):
            PathMetric(flat)

    def test_free_geodesic_certified(self, free):
        assert free.geodesic("aAb") == ("b", True)

    def test_dehn_geodesic_outside_ball(self, hept):
        """Five letters of the heptagon are two letters the other way round."""
        word, certified = hept.geodesic("abcde")
        assert word == "GF"
        assert not certified

    def test_free_ball_volume(self, free):
        assert free.ball_volume(2) == 17  # 1 + 4 + 12

    def test_ball_volume_needs_ball(self, hept, heptagon):
        assert hept.ball_volume(1) is None
        assert PathMetric(heptagon, build_ball(heptagon, 1)).ball_volume(1) == 15

    def test_minimal_loop_conjugator(self, free):
        loop, x, certified = free.minimal_loop("baB")
        assert loop == "a" and x == "B" and certified


class TestAdaptedMap:
    def test_missing_image(self, handle_track, free):
        with pytest.raises(PreconditionError):
            AdaptedMap(handle_track, free, {"x": "a"})

    def test_null_homotopic_annulus(self, annulus_track, free):
        with pytest.raises(PreconditionError):
            AdaptedMap(annulus_track, free, {"core": "aA"})

    def test_chart_words_by_default(self, detour):
        assert detour.images["x"] == "abcdeddddddd"
        assert detour.length("y") == 11

    def test_segment_backwards(self, detour):
        assert detour.segment("x", 0, 3) == "abc"
        assert detour.segment("x", 3, 0) == "CBA"

    def test_continuations(self, detour):
        """Leaving x at end 1 enters y or x at end 0."""
        assert sorted(detour.continuations(("x", 1))) == [("x", 1), ("y", 1)]
        assert sorted(detour.continuations(("y", -1))) == [("x", -1), ("y", -1)]

    def test_bad_path(self, annulus_track, free):
        m = AdaptedMap(annulus_track, free, {"core": "a"})
        with pytest.raises(PreconditionError):
            m.check_path([("core", 1), ("core", 1)])


class TestLaminationLength:
    def test_weighted_sum(self, handle_track, free):
        m = AdaptedMap(handle_track, free, {"x": "aab", "y": "abab"})
        assert lamination_image_length(m, Weighting.of({"x": 1, "y": 2})) == 11

    def test_zero_weights(self, handle_track, free):
        m = AdaptedMap(handle_track, free, {"x": "aab", "y": "abab"})
        assert lamination_image_length(m, Weighting.of({"x": 0, "y": 0})) == 0

    def test_annulus(self, annulus_track, free):
        m = AdaptedMap(annulus_track, free, {"core": "ab"})
        assert lamination_image_length(m) == 10  # weight 5, length 2

    def test_detour_length(self, detour):
        assert lamination_image_length(detour) == 1673  # 89 * 12 + 55 * 11


class TestTighten:
    def test_idempotent(self, free_handle):
        tight = tighten(free_handle)
        assert tight.images == free_handle.images
        assert all(tight.tight.values())

    def test_backtrack_removed(self, handle_track, free):
        m = AdaptedMap(handle_track, free, {"x": "aAb", "y": "b"})
        tight = tighten(m)
        assert tight.images["x"] == "b"
        assert lamination_image_length(tight) < lamination_image_length(m)

    def test_annulus_goes_to_minimal_loop(self, annulus_track, free):
        tight = tighten(AdaptedMap(annulus_track, free, {"core": "baB"}))
        assert tight.images["core"] == "a"

    def test_dehn_reduction_shortens(self, detour):
        tight = tighten(detour)
        assert tight.images["x"] == "GF" + "d" * 7
        assert not tight.tight["x"]


class TestFindShortcuts:
    def test_tight_annulus_has_none(self, annulus_track, free):
        m = AdaptedMap(annulus_track, free, {"core": "a"})
        assert len(find_shortcuts(m, 2)) == 0

    def test_planted_detour(self, detour):
        found = find_shortcuts(detour, 2)
        assert len(found) == 1
        s = found[0]
        assert (s.steps, s.start, s.end) == ((("x", 1),), 0, 5)
        assert (s.image, s.replacement) == ("abcde", "GF")

    def test_eps_zero(self, detour):
        assert len(find_shortcuts(detour, 0)) == 0

    def test_larger_eps_finds_more(self, detour):
        assert len(find_shortcuts(detour, 3)) > 1

    def test_overlapping(self, overlap):
        found = find_shortcuts(overlap, 2, bound=1)
        assert sorted((s.start, s.end) for s in found) == [(0, 5), (0, 6), (0, 7), (1, 6)]
        assert found.max_image_length == 7

    def test_one_switch(self, one_switch):
        found = find_shortcuts(one_switch, 2)
        assert len(found) == 1
        s = found[0]
        assert s.switches == 1
        assert (s.start, s.end, s.image) == (9, 2, "abcde")

    def test_truncation(self, detour, monkeypatch):
        monkeypatch.setattr("laminadesk.config.Config.MAX_SHORTCUTS", 1)
        found = find_shortcuts(detour, 3)
        assert len(found) == 1 and found.truncated


class TestMaximalFamily:
    def test_no_shortcuts(self, free_handle):
        fam = maximal_shortcut_family(free_handle, ShortcutSearch(eps=2))
        assert fam.family == [] and fam.moves == []
        assert fam.map is free_handle

    def test_branches_too_short(self, handle_track, hept):
        m = AdaptedMap(handle_track, hept, {"x": "abcde", "y": "e"})
        with pytest.raises(PreconditionError, match="lengthen"):
            maximal_shortcut_family(m, find_shortcuts(m, 2))

    def test_single_switch_free(self, detour):
        fam = maximal_shortcut_family(detour, find_shortcuts(detour, 2))
        assert len(fam.family) == 1
        assert fam.verified
        assert fam.map.images["x"] == "GF" + "d" * 7
        assert lamination_image_length(fam.map) == 1406  # 89 * 9 + 55 * 11

    def test_overlap_keeps_longest(self, overlap):
        fam = maximal_shortcut_family(overlap, find_shortcuts(overlap, 2, bound=1))
        assert [(s.start, s.end) for s in fam.family] == [(0, 7)]
        assert len(fam.excluded) == 3
        assert fam.checks["others_meet_family"]
        assert fam.map.images["x"] == "G" + "d" * 9

    def test_one_switch_isolated_by_splitting(self, one_switch):
        fam = maximal_shortcut_family(one_switch, find_shortcuts(one_switch, 2))
        assert len(fam.family) == 1
        assert len(fam.moves) == 1
        assert fam.checks["one_branch_each"]
        assert lamination_image_length(fam.split_map) == 36
        assert lamination_image_length(fam.map) == 33


class TestIteration:
    def test_annulus_fixpoint(self, annulus_track, free):
        state = start(AdaptedMap(annulus_track, free, {"core": "a"}), eps=2)
        nxt = straighten_step(state)
        assert nxt.map is state.map
        assert nxt.history == [5, 5]

    def test_planted_step_shortens(self, detour):
        state = start(detour, eps=2)
        nxt = straighten_step(state)
        assert nxt.length < state.length
        assert nxt.history == [1673, 1406]
        assert nxt.shortcut_counts == [1]

    def test_runs_to_stable_length(self, detour):
        states = run_until_stable(start(detour, eps=2))
        assert states[-1].stable(3)
        assert states[-1].length == 1406
        assert all(a.length >= b.length for a, b in zip(states, states[1:]))

    def test_failure_rolls_back(self, detour, monkeypatch):
        def boom(m, search):
            raise PreconditionError("planted failure")

        monkeypatch.setattr(iteration, "maximal_shortcut_family", boom)
        state = start(detour, eps=2)
        with pytest.raises(StepError) as info:
            straighten_step(state)
        assert info.value.state is state
        assert state.history == [1673]

    def test_short_shortcuts_need_no_lengthening(self, detour):
        assert straighten_step(start(detour, eps=2)).previous_map is detour

    @pytest.mark.parametrize("eps", [4, 6, 8])
    def test_lengthens_past_twice_the_longest_shortcut(self, detour, eps):
        state = start(detour, eps=eps)
        nxt = straighten_step(state)
        split_map = nxt.previous_map
        assert split_map is not detour
        bound = find_shortcuts(split_map, eps).max_image_length
        assert min(split_map.length(b) for b in split_map.open_branches) > 2 * bound
        assert nxt.length <= state.length

    def test_runs_to_stable_length_after_lengthening(self, detour):
        states = run_until_stable(start(detour, eps=4))
        assert states[-1].stable(3)
        assert all(a.length >= b.length for a, b in zip(states, states[1:]))

    def test_threshold_length(self, detour):
        state = start(detour, eps=2, delta=1)
        assert state.threshold_length == 16  # max(12 + 4, 8)
        assert start(detour, eps=2).threshold_length is None


class TestPartition:
    def test_hand_counted(self, free_handle):
        """x then y then an off-track bb: one backtrack, one off-track arc."""
        state = start(free_handle, eps=2)
        loop = [LoopArc(steps=(("x", 1), ("y", 1))), LoopArc(word="bb")]
        part = partition_loop(state, loop)
        assert part.word == "aabbbBBBaabb"
        assert part.star == "aaaabb"
        assert part.labels == [0, 4, 4, 4, 1, 1, 4, 4, 4, 0, 0, 0]
        assert part.class_lengths == {0: 4, 1: 2, 2: 0, 3: 0, 4: 6}

    def test_carried_tight_loop_is_all_class_4(self, handle_track, free):
        state = start(AdaptedMap(handle_track, free, {"x": "a", "y": "b"}), eps=2)
        part = partition_loop(state, [LoopArc(steps=(("x", 1), ("x", 1), ("y", 1)))])
        assert part.word == "aab"
        assert set(part.labels) == {4}
        assert part.class_lengths[0] == 0

    def test_classes_sum_to_length(self, detour):
        state = start(detour, eps=2)
        part = partition_loop(state, [LoopArc(steps=(("x", 1), ("y", 1))), LoopArc(word="ff")])
        assert sum(part.class_lengths.values()) == len(part) == 12 + 11 + 2

    def test_empty_loop(self, detour):
        with pytest.raises(PreconditionError):
            partition_loop(start(detour, eps=2), [])

    def test_runs_are_circular(self, free_handle):
        part = partition_loop(start(free_handle, eps=2), [LoopArc(steps=(("x", 1), ("y", 1))), LoopArc(word="bb")])
        assert sorted(part.runs(0)) == [4]
        assert sorted(part.runs(4)) == [3, 3]


class TestBounds:
    def test_all_class_4_passes(self, handle_track, free):
        state = start(AdaptedMap(handle_track, free, {"x": "a", "y": "b"}), eps=2, delta=0)
        loop = [LoopArc(steps=(("x", 1), ("x", 1), ("y", 1)))]
        report = bounds_report(state, loop, partition_loop(state, loop), K=1.0, c1=1.0)
        assert report.failures == 0
        statuses = {v.check: v.status for v in report.verdicts}
        assert statuses["class1_eps=2"] == "SKIP"
        assert statuses["long_class2_eps=2"] == "PASS"
        assert statuses["final_eps=2_t=0.5"] == "PASS"

    def test_missing_constants_skip(self, free_handle):
        state = start(free_handle, eps=2)
        loop = [LoopArc(steps=(("x", 1), ("y", 1))), LoopArc(word="bb")]
        report = bounds_report(state, loop, partition_loop(state, loop))
        skipped = [v for v in report.verdicts if v.status == "SKIP"]
        assert any("K" in v.detail for v in skipped)
        assert report.failures == 0

    def test_off_track_bound(self, free_handle):
        state = start(free_handle, eps=2)
        loop = [LoopArc(steps=(("x", 1), ("y", 1))), LoopArc(word="bb")]
        report = bounds_report(state, loop, partition_loop(state, loop))
        check = next(v for v in report.verdicts if v.check == "class0_eps=2")
        assert (check.lhs, check.rhs) == (6.0, 8.0)  # 10 - 4 * 1 against 12 - 4

    def test_next_length_bound(self, detour):
        state = start(detour, eps=2)
        after = straighten_step(state)
        assert next_length_bound(state, after, [LoopArc(steps=(("x", 1),))]) == 9

    def test_shortcut_class_with_volume(self, detour_track, heptagon):
        metric = PathMetric(heptagon, build_ball(heptagon, 2))
        state = start(AdaptedMap.from_track(detour_track, metric), eps=2)
        after = straighten_step(state)
        loop = [LoopArc(steps=(("x", 1),))]
        report = bounds_report(state, loop, partition_loop(state, loop), after=after)
        check = next(v for v in report.verdicts if v.check == "class1_eps=2")
        assert check.status == "PASS"
        assert check.slack > 0

    def test_long_class2_slack_shrinks_with_eps(self, detour):
        """No class-2 run reaches L, so the slack is the area bound and halves with every 2 added to eps."""
        loop = [LoopArc(steps=(("x", 1),))]
        slacks = []
        for eps in (4, 6, 8):
            state = start(detour, eps=eps, delta=1)
            after = straighten_step(state)
            part = partition_loop(state, loop)
            assert sum(part.class_lengths.values()) == len(part)
            report = bounds_report(state, loop, part, after=after, K=1.0, c1=1.0)
            statuses = {v.check: v.status for v in report.verdicts}
            assert statuses[f"class1_eps={eps}"] == "SKIP"
            check = next(v for v in report.verdicts if v.check == f"long_class2_eps={eps}")
            assert check.status == "PASS"
            assert check.lhs == 0
            slacks.append(check.slack)
        assert slacks[0] > slacks[1] > slacks[2]
        assert slacks[0] == pytest.approx(2 * slacks[1])


class TestThresholds:
    def test_long_run_fraction(self):
        assert long_run_fraction([1, 1, 0, 1, 0, 0], 2) == Fraction(1, 3)

    def test_runs_wrap(self):
        """The runs at both ends join."""
        assert long_run_fraction([1, 0, 0, 1], 2) == Fraction(1, 2)

    def test_all_marked(self):
        assert long_run_fraction([1, 1, 1], 4) == 0
        assert long_run_fraction([1, 1, 1], 3) == 1

    @pytest.mark.parametrize("n", range(1, 9))
    @pytest.mark.parametrize("L", [1, 2, 3])
    def test_worst_matches_brute_force(self, n, L):
        for k in range(n + 1):
            assert worst_long_run(n, k, L) == brute_worst(n, k, L)

    @pytest.mark.parametrize("n,L", [(6, 2), (8, 3), (7, 1)])
    def test_smallest_threshold(self, n, L):
        k0 = int(smallest_threshold(n, L) * n)
        assert all(2 * brute_worst(n, k, L) > n for k in range(k0, n + 1))
        assert 2 * brute_worst(n, k0 - 1, L) <= n

    def test_threshold_exists_only_for_long_sequences(self):
        assert smallest_threshold(3, 4) is None
        assert smallest_threshold(4, 1) == Fraction(3, 4)


class TestExitCurves:
    def test_needs_fibered_quotient(self, genus2):
        with pytest.raises(PreconditionError):
            compose_exit_curve(build_quotient_ball(2, None, build_ball(genus2, 1)), "a", "b")

    def test_identical_arcs_rejected(self, fibered_pa):
        curve = compose_exit_curve(build_quotient_ball(2, fibered_pa), "tab", "tab")
        assert not curve.accepted
        assert "trivial composition" in curve.reason

    def test_endpoints_must_match(self, fibered_pa):
        with pytest.raises(PreconditionError):
            compose_exit_curve(build_quotient_ball(2, fibered_pa), "t", "b")

    def test_separated_arcs(self, fibered_pa):
        curve = compose_exit_curve(build_quotient_ball(3, fibered_pa), "ttaTT", "b", delta=0.5)
        assert curve.separation == 2
        assert curve.separation_ok
        assert curve.nontrivial and curve.accepted
        assert curve.loop is not None

    def test_close_arcs_still_nontrivial(self, fibered_pa):
        curve = compose_exit_curve(build_quotient_ball(2, fibered_pa), "a", "b", delta=1.0)
        assert curve.separation == 0
        assert curve.separation_ok is False
        assert curve.accepted
        assert "word problem" in curve.reason


class TestDrift:
    def test_pseudo_anosov_drifts(self, fibered_pa):
        scan = infiniteness_scan(fibered_pa, "a", [1, 2], count=3)
        assert [e.level for e in scan.entries] == [0, -1, -2, -3]
        assert scan.drift == {1: 2, 2: 3}
        assert scan.witnessed and scan.monotone
        assert scan.periodic is None

    def test_identity_is_periodic(self, fibered_id):
        scan = infiniteness_scan(fibered_id, "a", [1, 2], count=3)
        assert {e.level for e in scan.entries} == {0}
        assert scan.drift == {1: None, 2: None}
        assert scan.periodic == 1
        assert not scan.witnessed

    def test_escapes_past_the_word_cap(self, fibered_pa):
        """Radii 8 and 10 are left even though mu^-i(a) is too long to write out."""
        scan = infiniteness_scan(fibered_pa, "a", [2, 8, 10], count=11, search_radius=3)
        assert scan.drift == {2: 3, 8: 9, 10: 11}
        assert [e.level for e in scan.entries] == [-i for i in range(12)]
        assert all(e.certified and not e.pruned for e in scan.entries)
        assert scan.entries[0].word_length == 1
        assert scan.entries[-1].word_length is None
        assert scan.witnessed and scan.monotone

    def test_shifted_lengths_match_the_seed(self, fibered_pa):
        """mu^-i(a) has the seed's minimal loop one level lower per step."""
        scan = infiniteness_scan(fibered_pa, "a", [1], count=2)
        assert [e.loop_length for e in scan.entries] == [1, 1, 1]

    def test_separating_curve_fixed_by_handle_maps(self, fibered_handles):
        scan = infiniteness_scan(fibered_handles, "abAB", [1], count=2)
        assert scan.periodic == 1
        assert scan.drift == {1: None}

    def test_separating_curve_not_periodic(self, fibered_pa):
        """The twist across both handles leaves no curve periodic."""
        scan = infiniteness_scan(fibered_pa, "abAB", [1], count=2)
        assert scan.periodic is None


class TestLeaveCompact:
    def test_constant_sequence_contained(self, fibered_pa):
        check = leave_compact_check(fibered_pa, ["a"] * 3, [0, 1])
        assert check.escapes == {0: False, 1: False}

    def test_drifting_sequence_escapes(self, fibered_pa, genus2):
        seq = [apply_power(fibered_pa.monodromy, "a", -i) for i in range(4)]
        check = leave_compact_check(fibered_pa, seq, [1, 2], surface=build_surface(genus2))
        assert check.escapes == {1: True, 2: True}
        assert all(r is not None for r in check.ratios)
        inf = check.running_infimum
        assert all(a >= b for a, b in zip(inf, inf[1:]))
