"""End-to-end command line checks, driven through main()."""

import json
from pathlib import Path

import pytest

from brauer_terminal.cli import main

MODELS = Path(__file__).resolve().parents[1] / "models"
BAD = str(MODELS / "bad-case.model")
REMARK = str(MODELS / "remark.model")


def read_lines(path):
    return [json.loads(line) for line in path.read_text().splitlines()]


class TestBoundary:
    def test_exit_and_table(self, capsys):
        assert main(["boundary", "--model", BAD]) == 0
        out = capsys.readouterr().out
        assert "divisor" in out
        assert "x1" in out and "1/2" in out

    def test_machine_output(self, tmp_path, capsys):
        out = tmp_path / "b.jsonl"
        assert main(["boundary", "--model", REMARK, "--out", str(out)]) == 0
        lines = read_lines(out)
        assert [l["divisor"] for l in lines] == ["x1", "x2", "x3"]
        assert all(l["type"] == "boundary" for l in lines)
        assert lines[0]["coefficient"] == [2, 3]
        assert lines[2]["extra_degree"] == 3
        assert lines[2]["e"] == 3


class TestDiscrepancy:
    def test_bad_case_flagged(self, capsys):
        assert main(["discrepancy", "--model", BAD]) == 2
        out = capsys.readouterr().out
        assert "E(1,1,0)" in out

    def test_remark_root_clean(self, tmp_path, capsys):
        out = tmp_path / "d.jsonl"
        assert main(["discrepancy", "--model", REMARK, "--out", str(out)]) == 0
        lines = read_lines(out)
        assert len(lines) == 4  # three codim-2 strata plus the origin
        first = lines[0]
        assert first["divisor"] == "E(1,1,0)"
        assert first["a"] == [-1, 3]
        assert first["entries"] == [{"e": 3, "b": [1, 3], "weighted": [1, 1]}]


class TestResolve:
    def test_bad_case(self, tmp_path, capsys):
        out = tmp_path / "r.jsonl"
        assert main(["resolve", "--model", BAD, "--out", str(out)]) == 0
        text = capsys.readouterr().out
        assert "fixup rounds: 1" in text
        lines = read_lines(out)
        assert lines[0] == {"type": "fixup", "root": "r", "rounds": 1}
        edges = [l for l in lines if l["type"] == "edge"]
        assert len(edges) == 2
        assert all(e["kind"] == "fixup" for e in edges)
        assert all(e["exceptional"] == "E(1,1,0)" for e in edges)
        assert lines[-1] == {"type": "leaves", "charts": ["r.1-2p1", "r.1-2p2"]}

    def test_clean_model_no_rounds(self, tmp_path, capsys):
        path = tmp_path / "clean.model"
        path.write_text(
            "[model]\ntorsion = 2\ndimension = 3\nlabels = x1,x2,x3\n"
            "[symbols]\nx1 x2 1\nx1 x3 1\nx2 x3 1\n"
        )
        assert main(["resolve", "--model", str(path)]) == 0
        text = capsys.readouterr().out
        assert "fixup rounds: 0" in text
        assert "leaves: r" in text

    def test_wrong_torsion_errors(self, capsys):
        assert main(["resolve", "--model", REMARK]) == 1
        assert "torsion 2" in capsys.readouterr().err


class TestCertify:
    def test_bad_case_certifies_after_fixup(self, tmp_path, capsys):
        out = tmp_path / "c.jsonl"
        assert main(["certify", "--model", BAD, "--out", str(out)]) == 0
        text = capsys.readouterr().out
        assert "verdict: terminal-certified" in text
        assert "fixup rounds: 1" in text
        cert = read_lines(out)[0]
        assert cert["type"] == "certificate"
        assert cert["verdict"] == "terminal-certified"
        assert cert["min_weighted"] == [1, 1]
        assert cert["bad_strata"] == [["x1", "x2"]]
        assert cert["complete"] is True

    def test_no_fixup_reports_bad_stratum(self, capsys):
        assert main(["certify", "--model", BAD, "--no-fixup"]) == 2
        text = capsys.readouterr().out
        assert "verdict: bad-stratum-found" in text
        assert "bad strata at base: x1,x2" in text

    def test_remark_model_indeterminate(self, capsys):
        assert main(["certify", "--model", REMARK, "--depth", "2"]) == 3
        text = capsys.readouterr().out
        assert "verdict: indeterminate" in text
        assert "E(2,0,1)" in text

    def test_deterministic_machine_output(self, tmp_path, capsys):
        first = tmp_path / "one.jsonl"
        second = tmp_path / "two.jsonl"
        assert main(["certify", "--model", BAD, "--out", str(first)]) == 0
        assert main(["certify", "--model", BAD, "--out", str(second)]) == 0
        assert first.read_bytes() == second.read_bytes()

    def test_threaded_run_matches_serial(self, tmp_path, capsys, monkeypatch):
        serial = tmp_path / "serial.jsonl"
        threaded = tmp_path / "threaded.jsonl"
        assert main(["certify", "--model", BAD, "--out", str(serial)]) == 0
        monkeypatch.setenv("BRAUER_TERMINAL_THREADS", "4")
        assert main(["certify", "--model", BAD, "--out", str(threaded)]) == 0
        assert serial.read_bytes() == threaded.read_bytes()


class TestRemark:
    def test_exit_and_narrative(self, capsys):
        assert main(["remark"]) == 3
        text = capsys.readouterr().out
        assert "E(1,0,1)" in text
        assert "degree candidates [1, 3]" in text
        assert "verdict: indeterminate" in text

    def test_machine_output(self, tmp_path, capsys):
        out = tmp_path / "m.jsonl"
        assert main(["remark", "--out", str(out)]) == 3
        lines = read_lines(out)
        summary = lines[0]
        assert summary["type"] == "remark"
        assert summary["b_e"] == [1, 3]
        assert summary["a_f_on_x"] == [0, 1]
        assert summary["a_f_on_y"] == [-1, 3]
        assert [c["e"] for c in summary["candidates"]] == [1, 3]
        assert summary["candidates"][1]["weighted"] == [2, 1]
        composition = lines[-1]
        assert composition["type"] == "composition"
        assert composition["passed"] is True
        failed = [c for c in composition["side_conditions"] if c["ok"] is False]
        assert [c["name"] for c in failed] == ["a(E(2,0,1),Y,Delta_Y) >= 0"]


class TestErrors:
    def test_missing_file(self, capsys):
        assert main(["boundary", "--model", "/nonexistent/x.model"]) == 1
        assert "error:" in capsys.readouterr().err

    def test_malformed_file(self, tmp_path, capsys):
        path = tmp_path / "broken.model"
        path.write_text("torsion = 2\n")
        assert main(["boundary", "--model", str(path)]) == 1
        err = capsys.readouterr().err
        assert "line 1" in err

    def test_usage_error(self, capsys):
        assert main(["certify"]) == 1

    def test_unknown_command(self, capsys):
        assert main(["frobnicate"]) == 1

    def test_help_exits_zero(self, capsys):
        assert main(["--help"]) == 0
        assert "boundary" in capsys.readouterr().out

    def test_warnings_on_stderr(self, tmp_path, capsys):
        path = tmp_path / "warn.model"
        path.write_text(
            "[model]\ntorsion = 2\ndimension = 2\nlabels = a,b\n"
            "[symbols]\na a 1\n"
        )
        assert main(["boundary", "--model", str(path)]) == 0
        assert "warning:" in capsys.readouterr().err

    @pytest.mark.parametrize("depth", ["0", "-1", "two"])
    def test_bad_depth_rejected(self, depth, capsys):
        assert main(["certify", "--model", BAD, "--depth", depth]) == 1
