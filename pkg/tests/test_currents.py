"""Tests for currents: normalisation, the pairing, the lamination criterion and limit diagnostics."""

import pytest

from laminadesk.currents import (
    Current,
    TestSet,
    is_lamination,
    is_unit,
    length,
    limit_diagnostics,
    load_current,
    normalize,
    pair,
    parse_current_text,
    trend_label,
)
from laminadesk.errors import ParseError, PreconditionError, ZeroCurrentError
from laminadesk.presentation.fibered import apply_power
from laminadesk.surface import build_surface, model_length


@pytest.fixture(scope="module")
def surface(genus2):
    return build_surface(genus2)


class TestNormalize:
    def test_single_curve(self, surface):
        """Weight w becomes w / (w l) = 1 / l."""
        unit = normalize(Current.curve(surface, "a", 3))
        ((_, weight),) = unit.weights()
        assert weight == pytest.approx(1 / model_length(surface, "a"))

    def test_idempotent(self, surface):
        once = normalize(Current.of(surface, [("a", 2), ("abAB", 1)]))
        twice = normalize(once)
        assert twice.scale == pytest.approx(once.scale)

    def test_two_components_unit_length(self, surface):
        unit = normalize(Current.of(surface, [("a", 2), ("c", 5)]))
        assert length(unit) == pytest.approx(1.0, abs=1e-9)
        assert is_unit(unit)

    def test_zero_current(self, surface):
        with pytest.raises(ZeroCurrentError):
            normalize(Current.of(surface, []))

    def test_powers_fold_into_weights(self, surface):
        """(aa, 1) is the curve a with weight 2."""
        c = Current.curve(surface, "aa")
        ((curve, weight),) = c.components
        assert str(curve) == "a"
        assert weight == 2


class TestPair:
    def test_bilinear(self, surface):
        """pair(2a, 3b) = 6 pair(a, b) = 6."""
        assert pair(Current.curve(surface, "a", 2), Current.curve(surface, "b", 3)) == 6

    def test_disjoint_simple(self, surface):
        assert pair(Current.curve(surface, "a"), Current.curve(surface, "c")) == 0

    def test_normalized_generators(self, surface):
        """int(a, b) = 1, so the unit currents pair to 1 / (l(a) l(b))."""
        a = normalize(Current.curve(surface, "a"))
        b = normalize(Current.curve(surface, "b"))
        expected = 1 / (model_length(surface, "a") * model_length(surface, "b"))
        assert pair(a, b) == pytest.approx(expected)

    def test_symmetric(self, surface):
        c1 = Current.of(surface, [("a", 1), ("ab", 2)])
        c2 = Current.of(surface, [("b", 3), ("cd", 1)])
        assert pair(c1, c2) == pair(c2, c1)

    def test_self_pairing_counts_double_points_twice(self, surface):
        """aabb has one double point."""
        c = Current.curve(surface, "aabb")
        assert pair(c, c) == 2


class TestLamination:
    def test_simple_curve(self, surface):
        assert is_lamination(Current.curve(surface, "a"))

    def test_disjoint_pair(self, surface):
        assert is_lamination(Current.of(surface, [("a", 2), ("c", 1)]))

    def test_non_simple_component(self, surface):
        assert not is_lamination(Current.of(surface, [("a", 1), ("aabb", 1)]))

    def test_crossing_components(self, surface):
        assert not is_lamination(Current.of(surface, [("a", 1), ("b", 1)]))

    def test_scale_invariant(self, surface):
        c = Current.of(surface, [("a", 2), ("c", 1)])
        assert is_lamination(c.scaled(7.5)) == is_lamination(c)
        assert is_lamination(normalize(c))

    def test_monodromy_images_stay_simple(self, surface, fibered_pa):
        """A homeomorphism carries simple curves to simple curves."""
        for i in range(3):
            word = apply_power(fibered_pa.monodromy, "a", -i)
            assert is_lamination(Current.curve(surface, word))


class TestTestSet:
    def test_conjugate_probes_rejected(self, surface):
        """baB is conjugate to a."""
        with pytest.raises(PreconditionError):
            TestSet(surface, ["a", "baB"])

    def test_empty_rejected(self, surface):
        with pytest.raises(PreconditionError):
            TestSet(surface, [])


class TestLimitDiagnostics:
    def test_constant_simple_sequence(self, surface):
        probes = TestSet(surface, ["b", "d"])
        result = limit_diagnostics(surface, ["a", "a", "a"], probes)
        assert result.normalized_self_pairings == [0, 0, 0]
        assert result.trend == "lamination-like"
        assert result.probes.shape == (3, 2)
        assert [r["probe_change"] for r in result.rows] == [None, 0, 0]

    def test_monodromy_sequence(self, surface, fibered_pa):
        sequence = [apply_power(fibered_pa.monodromy, "a", -i) for i in range(3)]
        result = limit_diagnostics(surface, sequence, distances=[0, 1, 2])
        assert result.normalized_self_pairings == [0, 0, 0]
        assert [r["distance"] for r in result.rows] == [0, 1, 2]

    def test_non_simple_term(self, surface):
        """int(aabb, aabb) = 2 over l(aabb)^2."""
        result = limit_diagnostics(surface, ["aabb"])
        (row,) = result.rows
        assert row["self_pairing"] == 2
        assert row["normalized_self_pairing"] == pytest.approx(2 / model_length(surface, "aabb") ** 2)

    def test_report_shape(self, surface):
        data = limit_diagnostics(surface, ["a", "c"], TestSet(surface, ["b"])).as_dict()
        assert set(data) == {"trend", "terms", "probe_matrix"}


class TestTrendLabel:
    def test_decreasing_below_threshold(self):
        assert trend_label([0.5, 0.2, 0.01]) == "lamination-like"

    def test_increasing(self):
        assert trend_label([0.01, 0.02]) == "undetermined"

    def test_decreasing_but_large(self):
        assert trend_label([0.3, 0.2, 0.1], threshold=0.05) == "undetermined"

    def test_empty(self):
        assert trend_label([]) == "undetermined"


class TestCurrentFiles:
    def test_load(self, surface, data_dir):
        current = load_current(data_dir / "disjoint.current", surface)
        assert sorted((str(c), w) for c, w in current.components) == [("a", 2), ("c", 0.5)]
        assert is_lamination(current)

    def test_crossing_file(self, surface, data_dir):
        assert not is_lamination(load_current(data_dir / "crossing.current", surface))

    def test_bad_weight(self, surface):
        with pytest.raises(ParseError):
            parse_current_text("x a\n", surface)

    def test_negative_weight(self, surface):
        with pytest.raises(ParseError):
            parse_current_text("-1 a\n", surface)

    def test_null_word(self, surface):
        with pytest.raises(ParseError):
            parse_current_text("1 aA\n", surface)

    def test_missing_file(self, surface, tmp_path):
        with pytest.raises(ParseError):
            load_current(tmp_path / "none.current", surface)
