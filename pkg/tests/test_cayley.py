"""Tests for Cayley balls, delta estimates, quotient loops and the experiment harnesses."""

from fractions import Fraction

import pytest

from laminadesk.cayley import (
    QuotientBall,
    build_ball,
    coarse_projection,
    divergence_experiment,
    edge_lines,
    estimate_delta,
    geodesic,
    hausdorff_check,
    intersection_bound_suite,
    minimal_edge_loop,
    neighborhood_suite,
    oracle_is_identity,
    to_networkx,
    word_problem_suite,
)
from laminadesk.config import Config, effective_cap
from laminadesk.errors import CapacityError, ParseError, SubgroupError, UncertifiedError
from laminadesk.presentation import conjugacy_minimal


@pytest.fixture(scope="module")
def free_ball(free2):
    return build_ball(free2, 6)


@pytest.fixture(scope="module")
def genus2_ball(genus2):
    return build_ball(genus2, 4)


class TestBuildBall:
    def test_free_growth(self, free2):
        """1 + 4 + 12 = 17."""
        ball = build_ball(free2, 2)
        assert len(ball) == 17
        assert ball.sphere_sizes() == [1, 4, 12]

    def test_trivial_group(self, trivial):
        """<a | a> has one element."""
        assert len(build_ball(trivial, 5)) == 1

    def test_genus2_growth(self, genus2):
        """Spheres 1, 8, 56, 392 give 457."""
        ball = build_ball(genus2, 3)
        assert ball.sphere_sizes() == [1, 8, 56, 392]
        assert len(ball) == 457

    def test_flat_growth(self, flat):
        """Z^2: spheres of size 4r, so 1 + 4 + 8 + 12 = 25."""
        assert len(build_ball(flat, 3)) == 25

    def test_words_are_shortlex_sorted(self, genus2_ball, genus2):
        """Discovery order is shortlex order."""
        keys = [genus2.alphabet.shortlex_key(w) for w in genus2_ball.words]
        assert keys == sorted(keys)

    def test_edges_symmetric(self, genus2_ball):
        """v.s = u implies u.s^-1 = v."""
        for v, nbrs in enumerate(genus2_ball.neighbours):
            for s, u in nbrs.items():
                assert genus2_ball.neighbours[u][s.swapcase()] == v

    def test_locate_conjugate_spelling(self, genus2_ball):
        """abABcdC and d are the same element."""
        assert genus2_ball.locate("abABcdC") == genus2_ball.locate("d")
        assert genus2_ball.word_length("abABcdC") == 1

    def test_cap(self, free2):
        """17 vertices do not fit under a cap of 10."""
        with pytest.raises(CapacityError):
            build_ball(free2, 2, cap=10)

    def test_env_override(self, monkeypatch):
        monkeypatch.setenv(Config.CAP_ENV_VAR, "123")
        assert effective_cap(5) == 123

    def test_env_override_must_be_integer(self, monkeypatch):
        monkeypatch.setenv(Config.CAP_ENV_VAR, "12k")
        with pytest.raises(ParseError, match="not an integer"):
            effective_cap(5)

    def test_export(self, free2):
        """Radius 1: edges e-a, A-e, e-b, B-e."""
        ball = build_ball(free2, 1)
        lines = edge_lines(ball)
        assert len(lines) == 4
        assert "e a a" in lines
        assert to_networkx(ball).number_of_nodes() == 5


class TestGeodesic:
    def test_same_point(self, genus2_ball):
        assert geodesic(genus2_ball, "ab", "ab") == []

    def test_single_edge(self, genus2_ball):
        assert geodesic(genus2_ball, "a", "ab") == [("a", "b", "ab")]

    def test_tree_path(self, free_ball):
        """e to abab in a tree: the unique path of length 4."""
        path = geodesic(free_ball, "", "abab")
        assert [s for _, s, _ in path] == list("abab")

    def test_boundary_uncertified(self, genus2_ball):
        """|u| + |v| + d(u, v) = 3 + 3 + 6 > 8."""
        with pytest.raises(UncertifiedError, match="endpoints too near boundary"):
            geodesic(genus2_ball, "abc", "CBA")


class TestWordProblemOracle:
    def test_relator_is_trivial(self, genus2_ball):
        assert oracle_is_identity(genus2_ball, "abABcdCD")

    def test_nontrivial(self, genus2_ball):
        assert not oracle_is_identity(genus2_ball, "abAB")

    def test_suite_agrees(self, genus2, genus2_ball):
        """Dehn and the radius-8 oracle agree on every sampled word."""
        rows = word_problem_suite(genus2, genus2_ball, n_words=150, max_length=8, seed=4)
        assert all(r["agree"] for r in rows)
        assert any(r["dehn"] for r in rows)

    def test_certifies_minimal(self, genus2):
        """ab has no shorter conjugate; baB conjugates down to a."""
        ball = build_ball(genus2, 5)
        assert ball.certifies_minimal("ab")
        assert not ball.certifies_minimal("baB")


class TestDelta:
    def test_free_is_zero(self, free_ball):
        """Trees are 0-slim."""
        assert estimate_delta(free_ball).delta == 0

    def test_flat_grows(self, flat):
        """Z^2 with staircase geodesics: delta = R/2 on the whole ball."""
        values = [estimate_delta(build_ball(flat, r)).delta for r in (3, 4, 5)]
        assert values == [Fraction(3, 2), Fraction(2), Fraction(5, 2)]

    def test_genus2_exhaustive_is_seed_free(self, genus2_ball):
        first = estimate_delta(genus2_ball, seed=1)
        second = estimate_delta(genus2_ball, seed=2)
        assert first.delta == second.delta
        assert first.uncertified == 0
        assert first.radius_used == 2  # |B(2)| = 65, |B(3)| = 457

    def test_sampled_reports_four_point(self, genus2_ball):
        estimate = estimate_delta(genus2_ball, mode="sampled", seed=0, samples=200)
        assert estimate.method == "sampled"
        assert estimate.four_point is not None and estimate.four_point >= 0


class TestMinimalEdgeLoop:
    def test_generator_sits_at_level_zero(self, fibered_pa):
        """Level lengths 3, 1, 4 around k = 0."""
        loop, certified = minimal_edge_loop(QuotientBall(radius=2, fibered=fibered_pa), "a")
        assert (loop.level, len(loop)) == (0, 1)
        assert certified

    def test_image_drifts(self, fibered_pa):
        """mu(a) = aba is read as a one level up."""
        loop, certified = minimal_edge_loop(QuotientBall(radius=3, fibered=fibered_pa), "aba")
        assert loop.level == 1
        assert loop.word == "a"
        assert certified

    def test_identity_monodromy_is_periodic(self, fibered_id):
        loop, certified = minimal_edge_loop(QuotientBall(radius=2, fibered=fibered_id), "ab")
        assert loop.level == 0
        assert loop.periodic == 1
        assert certified

    def test_rotation_and_inverse_invariant(self, fibered_pa):
        q = QuotientBall(radius=2, fibered=fibered_pa)
        lengths = {len(minimal_edge_loop(q, w)[0]) for w in ("abc", "bca", "CBA")}
        assert len(lengths) == 1

    def test_proper_power(self, fibered_pa):
        """aa has twice the length of a."""
        loop, _ = minimal_edge_loop(QuotientBall(radius=2, fibered=fibered_pa), "aa")
        assert len(loop) == 2

    def test_not_in_subgroup(self, fibered_pa):
        with pytest.raises(SubgroupError, match="class not in subgroup"):
            minimal_edge_loop(QuotientBall(radius=2, fibered=fibered_pa), "ta")

    def test_trivial_subgroup_is_conjugacy(self, genus2, genus2_ball):
        loop, _ = minimal_edge_loop(QuotientBall(radius=4, ball=genus2_ball), "cbaBC")
        assert loop.word == conjugacy_minimal(genus2, "cbaBC").word.letters == "a"


class TestProjection:
    def test_identity(self, free_ball):
        path = ["", "a", "aa", "aaa"]
        report = coarse_projection(free_ball, path, path, delta=0)
        assert report.association == [0, 1, 2, 3]
        assert report.max_gap == 0
        assert not report.precondition_ok  # distance 0 is not > 2 delta

    def test_tree_detour(self, free_ball):
        """A backtracking detour projects onto every geodesic vertex."""
        star = ["", "a", "aa", "aaa"]
        sigma = ["", "b", "", "a", "ab", "a", "aa", "aaa"]
        report = coarse_projection(free_ball, sigma, star, delta=0)
        assert report.hits == [0, 1, 2, 3]
        assert report.max_gap <= 1

    def test_skipped_vertices_counted(self, free_ball):
        """Hits 0 and 2 leave the single vertex a unhit."""
        report = coarse_projection(free_ball, ["", "aa"], ["", "a", "aa"], delta=0)
        assert report.hits == [0, 2]
        assert report.max_gap == 1


class TestExperimentSuites:
    def test_flat_control_has_no_divergence(self, flat_fibered):
        """Trivial monodromy: every level has the same length."""
        rows, entry = divergence_experiment(flat_fibered, instances=9, delta=0, seed=1)
        assert rows
        assert all(r["len_sigma"] == r["len_min"] for r in rows)
        assert entry.extra["base"] == pytest.approx(1.0)

    def test_pa_divergence(self, fibered_pa):
        rows, entry = divergence_experiment(fibered_pa, instances=9, delta=1, seed=2)
        assert entry.value > 0
        assert entry.worst_residual >= -1e-12
        assert all(r["len_sigma"] >= r["len_min"] for r in rows)

    def test_hausdorff_same_loop(self, genus2, genus2_ball):
        assert hausdorff_check(genus2, genus2_ball, "abc", "abc", conjugator="") == 0

    def test_neighborhood_suite(self, genus2, genus2_ball):
        rows, entry = neighborhood_suite(genus2, genus2_ball, classes=6, max_length=4, delta=1, seed=3)
        assert rows
        assert entry.value == max(r["distance"] for r in rows)
        assert entry.worst_residual >= 0

    def test_intersection_bound(self, fibered_pa):
        rows, entry = intersection_bound_suite(fibered_pa, pairs=4, seed=5)
        assert all(r["D"] >= 1 for r in rows)
        assert all(r["residual"] >= -1e-9 for r in rows)
