import json

import pytest

from hwrbench.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def write_log(tmp_path, text, name="episodes.log"):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return str(path)


class TestScore:
    def test_alien_example(self, capsys):
        code, out, _ = run(capsys, "score", "--game", "alien",
                           "--score", "9491.7", "--frames", "2e8")
        assert code == 0
        assert "hns_pct: 134.26" in out
        assert "hwrns_pct: 3.68" in out
        assert "saber_pct: 3.68" in out
        assert "hwrb: False" in out
        assert "game_time_days: 38.58" in out

    def test_boxing_breakthrough(self, capsys):
        code, out, _ = run(capsys, "score", "--game", "boxing", "--score", "100",
                           "--format", "json")
        assert code == 0
        payload = json.loads(out)
        assert payload["hns_pct"] == "832.50"
        assert payload["hwrns_pct"] == "100.00"
        assert payload["hwrb"] is True

    def test_random_anchor_all_zero(self, capsys):
        code, out, _ = run(capsys, "score", "--game", "pong", "--score", "-20.7",
                           "--format", "json")
        assert code == 0
        payload = json.loads(out)
        assert payload["hns_pct"] == payload["hwrns_pct"] == "0.00"

    def test_unknown_game_is_data_error(self, capsys):
        code, out, err = run(capsys, "score", "--game", "foo", "--score", "1")
        assert code == 1
        assert json.loads(err)["error"] == "UnknownGameError"
        assert out == ""

    def test_cap_mode_flag(self, capsys):
        _, out, _ = run(capsys, "score", "--game", "skiing", "--score", "-29970.32",
                        "--cap-mode", "table-compat", "--format", "json")
        assert json.loads(out)["saber_pct"] == "-93.10"
        _, out, _ = run(capsys, "score", "--game", "skiing", "--score", "-29970.32",
                        "--format", "json")
        assert json.loads(out)["saber_pct"] == "0.00"

    def test_cap_mode_env_override(self, capsys, monkeypatch):
        monkeypatch.setenv("HWRBENCH_CAP_MODE", "table-compat")
        _, out, _ = run(capsys, "score", "--game", "skiing", "--score", "-29970.32",
                        "--format", "json")
        assert json.loads(out)["saber_pct"] == "-93.10"


class TestUsageErrors:
    def test_unknown_flag_rejected(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["score", "--game", "alien", "--score", "1", "--bogus"])
        assert exc.value.code == 2

    def test_unknown_verb_rejected(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["frobnicate"])
        assert exc.value.code == 2


class TestValidate:
    def test_bundled_data_validates(self, capsys):
        code, out, _ = run(capsys, "validate")
        assert code == 0
        assert "57 games OK" in out

    def test_bad_baselines_exit_1(self, capsys, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text(
            "game,random,human_average,human_world_record,source_tag\n"
            "alien,10,5,251916,x\n", encoding="utf-8")
        code, _, err = run(capsys, "validate", "--baselines", str(path))
        assert code == 1
        assert json.loads(err)["error"] == "ValidationError"


class TestReport:
    def test_hns_table_contains_rainbow_alien_cell(self, capsys):
        code, out, _ = run(capsys, "report", "--metric", "hns",
                           "--dataset", "sota-200m-model-free", "--format", "csv")
        assert code == 0
        alien = next(l for l in out.splitlines() if l.startswith("alien"))
        cells = alien.split(",")
        assert cells[1] == "9491.7" and cells[2] == "134.26"

    def test_leader_marks_boxing_tie(self, capsys):
        _, out, _ = run(capsys, "report", "--metric", "hns",
                        "--dataset", "sota-200m-model-free", "--format", "csv",
                        "--algorithms", "Rainbow", "LASER", "GDI-H3")
        boxing = next(l for l in out.splitlines() if l.startswith("boxing"))
        assert boxing.count("100*") == 2  # LASER and GDI-H3, not Rainbow

    def test_out_file(self, capsys, tmp_path):
        out_path = tmp_path / "table.csv"
        code, out, _ = run(capsys, "report", "--format", "csv",
                           "--out", str(out_path))
        assert code == 0 and out == ""
        assert out_path.read_text(encoding="utf-8").startswith("game,")


class TestAggregate:
    def test_json_aggregates(self, capsys):
        code, out, _ = run(capsys, "aggregate", "--format", "json",
                           "--cap-mode", "table-compat")
        assert code == 0
        payload = json.loads(out)
        rainbow = payload["aggregates"]["Rainbow"]
        assert rainbow["hns"]["mean"] == pytest.approx(8.7397, abs=5e-4)
        assert rainbow["hwrns"]["hwrb"] == 4

    def test_text_aggregates(self, capsys):
        code, out, _ = run(capsys, "aggregate", "--dataset", "sota-other")
        assert code == 0
        assert "Muesli" in out and "Go-Explore" in out and "hwrb" in out


class TestCompare:
    def test_leader_diff(self, capsys):
        code, out, _ = run(capsys, "compare", "Rainbow", "LASER",
                           "--dataset", "sota-200m-model-free")
        assert code == 0
        payload = json.loads(out)
        assert payload["games_compared"] == 57
        assert payload["Rainbow"]["wins"] + payload["LASER"]["wins"] + \
            len(payload["ties"]) == 57
        assert "pong" in payload["LASER"]["games"]  # 21 beats 20.9
        assert "amidar" in payload["Rainbow"]["games"]

    def test_ties_reported(self, capsys):
        _, out, _ = run(capsys, "compare", "LASER", "GDI-H3",
                        "--dataset", "sota-200m-model-free")
        payload = json.loads(out)
        assert "boxing" in payload["ties"] and "pong" in payload["ties"]

    def test_missing_algorithm_is_data_error(self, capsys):
        code, _, err = run(capsys, "compare", "Rainbow", "NotAnAlgo")
        assert code == 1
        assert json.loads(err)["error"] == "BenchmarkError"


class TestProtocolCheck:
    CONFORMING = "1 3 0 4\n-2 3 0 4\n3 0 1 4\n---\n5 1 0 4\n0 0 1 4\n"

    def test_conforming_log(self, capsys, tmp_path):
        log = write_log(tmp_path, self.CONFORMING)
        code, out, _ = run(capsys, "protocol-check", "--log", log, "--k", "2")
        assert code == 0
        payload = json.loads(out)
        assert payload["conforming"] is True
        assert payload["episodes"] == 2
        assert payload["total_env_frames"] == 20
        assert payload["training_score"] == 3.5  # mean of [2.0, 5.0]

    def test_budget_violation(self, capsys, tmp_path):
        log = write_log(tmp_path, self.CONFORMING)
        code, out, _ = run(capsys, "protocol-check", "--log", log, "--budget", "16")
        assert code == 1
        payload = json.loads(out)
        assert [v["code"] for v in payload["violations"]] == ["budget_exceeded"]

    def test_reduced_action_set_violation(self, capsys, tmp_path):
        log = write_log(tmp_path, self.CONFORMING)
        code, out, _ = run(capsys, "protocol-check", "--log", log,
                           "--action-set", "4")
        assert code == 1
        payload = json.loads(out)
        assert [v["code"] for v in payload["violations"]] == ["reduced_action_set"]

    def test_malformed_log_is_data_error(self, capsys, tmp_path):
        log = write_log(tmp_path, "1 2 0 4\n")  # truncated episode
        code, _, err = run(capsys, "protocol-check", "--log", log)
        assert code == 1
        assert json.loads(err)["error"] == "MalformedLogError"


class TestReproduce:
    def test_writes_artifacts_and_is_idempotent(self, capsys, tmp_path):
        out_dir = tmp_path / "repro"
        code, out, _ = run(capsys, "reproduce", "--out", str(out_dir))
        assert code == 0
        assert "cells compared: 3174" in out
        log = json.loads((out_dir / "inconsistency_log.json").read_text())
        assert any(m["printed"] == "441/32" for m in log)
        summary = json.loads((out_dir / "summary.json").read_text())
        assert summary["match_rate"] >= 0.95
        first = (out_dir / "summary.json").read_bytes()
        code, _, _ = run(capsys, "reproduce", "--out", str(out_dir))
        assert code == 0
        assert (out_dir / "summary.json").read_bytes() == first
        assert (out_dir / "tables" / "hwrns-sota-200m-model-free.csv").exists()
        assert (out_dir / "figures" / "hwrb_vs_gametime.json").exists()
