"""Tests for the command line: reports, exit codes and run records."""

import asyncio
import csv
import json

import pytest

from laminadesk.errors import ParseError
from laminadesk.main import build_parser, main, parse_arc, parse_loop
from laminadesk.reports import RunDB
from laminadesk.traintrack import Corner


@pytest.fixture
def run_cli(tmp_path, data_dir):
    """Run one subcommand into tmp_path; returns (exit code, report dict or None)."""

    def _run(command, inputs, *extra):
        out = tmp_path / f"{command}.json"
        argv = [
            command,
            "--input", *[str(data_dir / name) for name in inputs],
            "--output", str(out),
            "--db", str(tmp_path / "runs.db"),
            "--summary", str(tmp_path / "summary.csv"),
            *extra,
        ]
        code = main(argv)
        report = json.loads(out.read_text()) if out.exists() else None
        return code, report

    return _run


def verdicts(report: dict) -> dict[str, str]:
    return {v["check"]: v["status"] for v in report["verdicts"]}


class TestParsing:
    def test_every_subcommand_registered(self):
        parser = build_parser()
        for name in ("wordproblem", "minloop", "delta", "diverge", "annulus", "intbound", "intersect",
                     "track-split", "track-lengthen", "straighten", "partition", "fibered-demo", "leave-check"):
            args = parser.parse_args([name, "--input", "x"])
            assert args.command == name

    def test_defaults(self):
        args = build_parser().parse_args(["delta", "--input", "x"])
        assert args.eps_list == "4,6,8"
        assert args.t == 0.5
        assert args.seed == 0

    def test_arc_with_exit(self):
        arc = parse_arc("s0:A:0/b1@1/2")
        assert arc.corner == Corner("s0", "A", 0)
        assert arc.path == ("b1",)
        assert arc.exit == 0.5

    def test_arc_to_collision(self):
        arc = parse_arc("s:B:1")
        assert arc.path is None and arc.exit is None

    def test_bad_arc(self):
        with pytest.raises(ParseError):
            parse_arc("s:B")

    def test_loop_pieces(self):
        """Steps group until an off-track word."""
        loop = parse_loop("x+ y- ~bb x+")
        assert [p.steps for p in loop] == [(("x", 1), ("y", -1)), (), (("x", 1),)]
        assert loop[1].word == "bb"

    def test_bad_loop_token(self):
        with pytest.raises(ParseError):
            parse_loop("x")


class TestSubcommands:
    def test_delta_free_group(self, run_cli):
        """Trees are 0-hyperbolic."""
        code, report = run_cli("delta", ["free2.txt"], "--radius", "3")
        assert code == 0
        assert report["results"]["delta"] == 0
        assert report["constants"]["delta_est"]["value"] == 0
        assert report["schema_version"] == "v1"

    def test_delta_exports_ball(self, run_cli, tmp_path):
        code, _ = run_cli("delta", ["free2.txt"], "--radius", "2", "--export-ball")
        lines = (tmp_path / "delta_ball.txt").read_text().splitlines()
        # 1 + 4 + 12 = 17 vertices, a tree, so 16 edges
        assert len(lines) == 16

    def test_intersect_dual_generators(self, run_cli, tmp_path):
        code, report = run_cli("intersect", ["genus2.txt"], "--words", "a", "b")
        assert code == 0
        assert report["results"]["int"] == 1
        assert report["results"]["self_intersection"] == {"a": 0, "b": 0}
        assert (tmp_path / "intersect_intersections.csv").exists()

    def test_intersect_currents(self, run_cli):
        code, report = run_cli("intersect", ["genus2.txt", "crossing.current", "disjoint.current"])
        assert code == 0
        assert report["results"]["pairings"]["index"] == ["crossing", "disjoint"]

    def test_wordproblem_given_words(self, run_cli):
        code, report = run_cli("wordproblem", ["genus2.txt"], "--words", "abABcdCD", "ab")
        assert code == 0
        assert report["results"]["identities"] == 1
        assert verdicts(report)["oracle_agreement"] == "PASS"

    def test_track_split(self, run_cli):
        code, report = run_cli("track-split", ["strip.track"], "--arc", "s0:A:0/b1@1/2")
        assert code == 0
        assert report["results"]["switches"] == 3
        assert set(verdicts(report).values()) == {"PASS"}

    def test_track_lengthen(self, run_cli):
        code, report = run_cli("track-lengthen", ["strip.track"], "--target", "2")
        assert code == 0
        assert verdicts(report)["pass_1_growth"] == "PASS"
        assert verdicts(report)["target_reached"] == "PASS"

    def test_track_lengthen_several_passes(self, run_cli):
        code, report = run_cli("track-lengthen", ["golden.track"], "--target", "8")
        assert code == 0
        assert report["results"]["instances"] == 5
        assert all(verdicts(report)[f"pass_{i}_growth"] == "PASS" for i in range(1, 6))
        assert verdicts(report)["legal"] == "PASS"

    def test_lengthen_annulus_cut_exits_1(self, run_cli):
        """Equal corner heights on the handle make the loop cuts close off an annulus."""
        code, report = run_cli("track-lengthen", ["handle.track"], "--target", "2")
        assert code == 1
        assert report is None

    def test_straighten_planted_detour(self, run_cli):
        code, report = run_cli("straighten", ["heptagon.txt", "detour.track"], "--eps-list", "2")
        assert code == 0
        run = report["results"]["runs"]["eps=2"]
        assert run["history"][:2] == ["1673", "1406"]
        assert verdicts(report)["fixpoint_eps=2"] == "PASS"

    def test_straighten_lengthens_at_larger_eps(self, run_cli):
        code, report = run_cli("straighten", ["heptagon.txt", "detour.track"], "--eps-list", "2,4")
        assert code == 0
        assert verdicts(report)["monotone_eps=4"] == "PASS"
        assert verdicts(report)["fixpoint_eps=4"] == "PASS"

    def test_partition_eps_sweep(self, run_cli):
        code, report = run_cli(
            "partition", ["heptagon.txt", "detour.track"], "--eps-list", "4,6,8",
            "--delta", "1", "--K", "1", "--c1", "1", "--loop", "x+",
        )
        assert code in (0, 2)
        checks = verdicts(report)
        assert all(checks[f"complete_eps={eps}"] == "PASS" for eps in (4, 6, 8))
        assert all(checks[f"long_class2_eps={eps}"] == "PASS" for eps in (4, 6, 8))
        assert checks["long_class2_slack_monotone"] == "PASS"

    def test_partition_classes_complete(self, run_cli):
        code, report = run_cli("partition", ["heptagon.txt", "detour.track"], "--eps-list", "2", "--loop", "x+")
        assert code in (0, 2)
        assert verdicts(report)["complete_eps=2"] == "PASS"
        assert "eps=2" in report["results"]["partitions"]

    def test_fibered_demo_drift(self, run_cli):
        code, report = run_cli("fibered-demo", ["fibered_pa.txt"], "--radii", "1,2", "--instances", "3")
        assert code == 0
        assert verdicts(report)["escapes_R=2"] == "PASS"

    def test_control_flags_pseudo_anosov(self, run_cli):
        """A drifting monodromy fails the no-drift control."""
        code, report = run_cli("fibered-demo", ["fibered_pa.txt"], "--radii", "1,2", "--instances", "3", "--control")
        assert code == 2
        assert report["verdict"] == "FAIL"

    def test_missing_input(self, run_cli):
        code, report = run_cli("delta", ["nope.txt"])
        assert code == 1
        assert report is None


class TestRunRecords:
    def test_runs_recorded(self, run_cli, tmp_path):
        run_cli("delta", ["free2.txt"], "--radius", "2")
        run_cli("delta", ["nope.txt"])

        async def fetch():
            db = RunDB(str(tmp_path / "runs.db"))
            try:
                return await db.recent_runs()
            finally:
                await db.close()

        runs = asyncio.run(fetch())
        assert [r.verdict for r in runs] == ["ERROR", "PASS"]
        assert [r.exit_code for r in runs] == [1, 0]
        assert json.loads(runs[1].config_json)["radius"] == 2

    def test_summary_rows(self, run_cli, tmp_path):
        run_cli("delta", ["free2.txt"], "--radius", "2")
        run_cli("delta", ["free2.txt"], "--radius", "3")
        with open(tmp_path / "summary.csv", newline="") as f:
            rows = list(csv.DictReader(f))
        assert [r["verdict"] for r in rows] == ["PASS", "PASS"]

    def test_identical_config_identical_report(self, run_cli, tmp_path):
        """Reports differ only in the timestamp."""
        _, first = run_cli("delta", ["free2.txt"], "--radius", "3")
        _, second = run_cli("delta", ["free2.txt"], "--radius", "3")
        first.pop("timestamp")
        second.pop("timestamp")
        assert first == second
