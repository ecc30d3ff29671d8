import json
import sys
from pathlib import Path

import pytest

from budgetagg.cli import main

SOLVER_CMD = f"{sys.executable} {Path(__file__).resolve().parent.parent / 'scripts' / 'solvesat.py'}"


def write_profile(tmp_path, data, name="profile.json"):
    path = tmp_path / name
    path.write_text(json.dumps(data))
    return str(path)


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


FIG1_PROFILE = {"n": 2, "m": 3, "b": 4, "votes": [[4, 0, 0], [3, 1, 0]]}

THM1_PROFILE = {
    "n": 10, "m": 6, "b": 8,
    "votes": [[8, 0, 0, 0, 0, 0]] * 5 + [
        [7, 1, 0, 0, 0, 0], [7, 0, 1, 0, 0, 0], [7, 0, 0, 1, 0, 0],
        [7, 0, 0, 0, 1, 0], [7, 0, 0, 0, 0, 1],
    ],
}


class TestAggregate:
    def test_floor_util_matches_composition(self, tmp_path, capsys):
        path = write_profile(tmp_path, FIG1_PROFILE)
        code, out, _ = run_cli(capsys, "aggregate", "--mechanism", "floor-util",
                               "--profile", path)
        assert code == 0
        direct = json.loads(out)
        code, out, _ = run_cli(capsys, "aggregate", "--mechanism",
                               "compose:utilitarian+hamilton+index",
                               "--profile", path)
        assert code == 0
        assert json.loads(out) == direct

    def test_im_rational_output(self, tmp_path, capsys):
        path = write_profile(tmp_path, THM1_PROFILE)
        code, out, _ = run_cli(capsys, "aggregate", "--mechanism", "im",
                               "--profile", path)
        assert code == 0
        assert json.loads(out) == ["16/3", "8/15", "8/15", "8/15", "8/15", "8/15"]

    def test_malformed_vote_names_voter(self, tmp_path, capsys):
        bad = {"n": 2, "m": 3, "b": 4, "votes": [[4, 0, 0], [3, 2, 0]]}
        path = write_profile(tmp_path, bad)
        code, _, err = run_cli(capsys, "aggregate", "--mechanism", "floor-im",
                               "--profile", path)
        assert code == 1
        assert "vote 2" in err

    def test_unknown_mechanism_usage_error(self, tmp_path, capsys):
        path = write_profile(tmp_path, FIG1_PROFILE)
        with pytest.raises(SystemExit) as exc:
            main(["aggregate", "--mechanism", "nope", "--profile", path])
        assert exc.value.code == 2

    def test_fractional_profile_rejected_for_integral_mechanism(self, tmp_path, capsys):
        data = {"n": 2, "m": 2, "b": 1, "votes": [["1/2", "1/2"], [1, 0]]}
        path = write_profile(tmp_path, data)
        code, _, err = run_cli(capsys, "aggregate", "--mechanism", "floor-im",
                               "--profile", path)
        assert code == 1


class TestApportion:
    def test_hamilton_with_tie_break(self, capsys):
        code, out, _ = run_cli(
            capsys, "apportion", "--method", "hamilton",
            "--input", '["1", "1/2", "1/2"]', "--tie-break", "index",
        )
        assert code == 0
        data = json.loads(out)
        assert data["selected"] == [1, 1, 0]
        assert [1, 0, 1] in data["outcomes"]

    def test_divisor_tie_set(self, capsys):
        code, out, _ = run_cli(
            capsys, "apportion", "--method", "divisor=1",
            "--input", '[1, "1/2", "1/4", "1/4"]', "--tie-break", "larger-input",
        )
        assert code == 0
        data = json.loads(out)
        assert data["outcomes"] == [[1, 1, 0, 0], [2, 0, 0, 0]]
        assert data["selected"] == [2, 0, 0, 0]


class TestCheck:
    def test_ejr_plus_violation_exit_code(self, tmp_path, capsys):
        profile = {"n": 3, "m": 4, "b": 3,
                   "votes": [[0, 3, 0, 0], [1, 0, 2, 0], [1, 0, 0, 2]]}
        path = write_profile(tmp_path, profile)
        code, out, _ = run_cli(capsys, "check", "--axiom", "ejr-plus",
                               "--profile", path, "--allocation", "[0, 1, 1, 1]")
        assert code == 3
        verdict = json.loads(out)
        assert verdict["satisfied"] is False
        assert verdict["witness"] == {"alternative": 1, "level": 2, "voters": [2, 3]}

    def test_jr_satisfied(self, tmp_path, capsys):
        profile = {"n": 3, "m": 4, "b": 3,
                   "votes": [[0, 0, 0, 3], [0, 0, 3, 0], [2, 0, 1, 0]]}
        path = write_profile(tmp_path, profile)
        code, out, _ = run_cli(capsys, "check", "--axiom", "jr",
                               "--profile", path, "--allocation", "[1, 0, 1, 1]")
        assert code == 0
        assert json.loads(out)["satisfied"] is True

    def test_range_respect_unanimous(self, tmp_path, capsys):
        profile = {"n": 2, "m": 2, "b": 2, "votes": [[1, 1], [1, 1]]}
        path = write_profile(tmp_path, profile)
        code, out, _ = run_cli(capsys, "check", "--axiom", "range-respect",
                               "--profile", path, "--allocation", "[1, 1]")
        assert code == 0

    def test_sm_quota_violation(self, tmp_path, capsys):
        profile = {"n": 6, "m": 4, "b": 4,
                   "votes": [[4, 0, 0, 0]] * 3
                   + [[0, 4, 0, 0], [0, 0, 4, 0], [0, 0, 0, 4]]}
        path = write_profile(tmp_path, profile)
        code, out, _ = run_cli(capsys, "check", "--axiom", "sm-quota",
                               "--profile", path, "--allocation", "[1, 1, 1, 1]")
        assert code == 3
        assert json.loads(out)["witness"] == {"alternative": 1}


class TestSearch:
    def test_floor_im_truthful_small(self, capsys):
        code, out, _ = run_cli(capsys, "search", "--property", "manipulation",
                               "--mechanism", "floor-im",
                               "--n", "2", "--m", "3", "--b", "2")
        assert code == 0
        assert json.loads(out)["witness"] is None

    def test_budget_exceeded(self, capsys):
        code, _, err = run_cli(capsys, "search", "--property", "manipulation",
                               "--mechanism", "floor-im",
                               "--n", "2", "--m", "3", "--b", "2",
                               "--max-evals", "3")
        assert code == 4
        assert "budget" in err

    def test_onto(self, capsys):
        code, out, _ = run_cli(capsys, "search", "--property", "onto",
                               "--mechanism", "floor-im",
                               "--n", "2", "--m", "2", "--b", "2")
        assert code == 0
        assert json.loads(out)["witness"] is None

    def test_dictator(self, capsys):
        code, out, _ = run_cli(capsys, "search", "--property", "dictator",
                               "--mechanism", "floor-im",
                               "--n", "2", "--m", "2", "--b", "2")
        assert code == 0
        assert json.loads(out)["witness"] is None


class TestEncodeSat:
    def test_writes_dimacs_and_solves(self, tmp_path, capsys):
        out_path = tmp_path / "single.cnf"
        code, out, _ = run_cli(
            capsys, "encode-sat", "--n", "1", "--m", "2", "--b", "1",
            "--out", str(out_path), "--solve", "--solver-cmd", SOLVER_CMD,
        )
        assert code == 0
        info = json.loads(out)
        assert info["status"] == "SAT"
        assert info["verified"] is True
        assert out_path.read_bytes().startswith(b"p cnf ")

    def test_missing_solver_cmd(self, tmp_path, capsys):
        out_path = tmp_path / "x.cnf"
        with pytest.raises(SystemExit) as exc:
            main(["encode-sat", "--n", "1", "--m", "2", "--b", "1",
                  "--out", str(out_path), "--solve"])
        assert exc.value.code == 2

    def test_comments_flag(self, tmp_path, capsys):
        out_path = tmp_path / "c.cnf"
        code, _, _ = run_cli(
            capsys, "encode-sat", "--n", "1", "--m", "2", "--b", "1",
            "--out", str(out_path), "--comments",
        )
        assert code == 0
        assert out_path.read_bytes().startswith(b"c var 1 = ")


class TestRepro:
    def test_single_case(self, capsys):
        code, out, _ = run_cli(capsys, "repro", "--case", "table2-linked")
        assert code == 0
        assert "table2-linked: PASS" in out

    def test_unknown_case(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["repro", "--case", "nope"])
        assert exc.value.code == 2

    def test_report_and_figures(self, tmp_path, capsys):
        code, out, _ = run_cli(capsys, "repro", "--case", "thm1-divisor-tie",
                               "--out-dir", str(tmp_path))
        assert code == 0
        report = (tmp_path / "report.tsv").read_text().splitlines()
        assert report[0].startswith("case\tstatus")
        assert report[1].startswith("thm1-divisor-tie\tPASS")
        assert (tmp_path / "thm1-divisor-tie.png").stat().st_size > 0
