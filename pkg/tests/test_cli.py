import json

import pytest

from partition_lab import cli
from partition_lab.cli import RunConfig, main, parse_h_file, run_config
from partition_lab.inversion import QuadratureError


def run_main(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


class TestVerifyCommand:
    def test_csv_schema(self, capsys):
        code, out, _ = run_main(
            capsys, "verify", "--family", "plain", "--n-max", "8", "--format", "csv"
        )
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "label,N,exact,lower,upper,log_lower_margin,log_upper_margin,pass"
        assert len(lines) == 9
        first = lines[1].split(",")
        assert first[0] == "prefix_sandwich" and first[1] == "1" and first[2] == "2"
        assert first[4].endswith("e0") and "." in first[4]
        assert first[7] == "true"

    def test_byte_identical_reruns(self, capsys):
        args = ("verify", "--family", "plane", "--n-max", "6", "--format", "csv")
        _, out1, _ = run_main(capsys, *args)
        _, out2, _ = run_main(capsys, *args)
        assert out1 == out2

    def test_json_shape(self, capsys):
        code, out, _ = run_main(
            capsys, "verify", "--family", "qpower", "--q", "2", "--n-max", "5",
            "--format", "json",
        )
        assert code == 0
        doc = json.loads(out)
        assert set(doc) == {"config", "rows", "summary"}
        assert doc["summary"] == {"total": 5, "failures": 0, "passed": True}
        assert doc["config"]["family"] == "qpower"

    def test_output_file(self, tmp_path, capsys):
        target = tmp_path / "rows.csv"
        code, out, _ = run_main(
            capsys, "verify", "--n-max", "3", "--format", "csv", "--output", str(target)
        )
        assert code == 0
        assert out == ""
        assert target.read_text().startswith("label,N")

    def test_corrupt_bound_hook_flips_exit(self, capsys):
        code, out, _ = run_main(
            capsys, "verify", "--n-max", "4", "--format", "csv",
            "--corrupt-bound", "prefix_sandwich",
        )
        assert code == 1
        assert "false" in out

    def test_theorem_a_family(self, tmp_path, capsys):
        hfile = tmp_path / "h.txt"
        hfile.write_text("# triangular knots\n0 0\n1 1\n2 3\n3 6\n4 10\n")
        code, out, _ = run_main(
            capsys, "verify", "--family", "theoremA", "--h-file", str(hfile),
            "--n-max", "12", "--format", "json",
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["rows"][0]["pass"] is True

    def test_theorem_a_requires_h_file(self, capsys):
        code, _, err = run_main(capsys, "verify", "--family", "theoremA", "--n-max", "5")
        assert code == 3
        assert "h-file" in err


class TestHFileValidation:
    def test_rejects_nonzero_origin(self, tmp_path):
        f = tmp_path / "h.txt"
        f.write_text("1 1\n2 2\n")
        with pytest.raises(cli.InputValidationError, match="row 1"):
            parse_h_file(str(f), 4)

    def test_rejects_nonmonotone(self, tmp_path):
        f = tmp_path / "h.txt"
        f.write_text("0 0\n2 5\n1 7\n")
        with pytest.raises(cli.InputValidationError, match="row 3"):
            parse_h_file(str(f), 4)

    def test_rejects_noninteger_at_integers(self, tmp_path):
        f = tmp_path / "h.txt"
        f.write_text("0 0\n2 1\n")  # h(1) = 1/2
        with pytest.raises(cli.InputValidationError, match="integer"):
            parse_h_file(str(f), 2)

    def test_comments_and_blanks_ignored(self, tmp_path):
        f = tmp_path / "h.txt"
        f.write_text("\n# c\n0 0\n\n1 1 # inline\n")
        h = parse_h_file(str(f), 1)
        assert h.value(1) == 1

    def test_missing_file_is_validation_error(self, capsys):
        code, _, err = run_main(
            capsys, "verify", "--family", "theoremA", "--h-file", "/nonexistent",
            "--n-max", "4",
        )
        assert code == 3


class TestTableCommand:
    def test_values(self, capsys):
        code, out, _ = run_main(
            capsys, "table", "--family", "plane", "--n-max", "3", "--format", "json"
        )
        assert code == 0
        doc = json.loads(out)
        counts = [r["count"] for r in doc["rows"]]
        prefixes = [r["prefix"] for r in doc["rows"]]
        assert counts == [1, 1, 3, 6]
        assert prefixes == [1, 2, 5, 11]


class TestOracleCommand:
    def test_small_run_all_true(self, capsys):
        code, out, _ = run_main(
            capsys, "oracle", "--rho-max", "2", "--weight-max", "3", "--n-max", "6",
            "--instances", "25", "--format", "json",
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["summary"]["failures"] == 0
        labels = {r["label"] for r in doc["rows"]}
        assert {"monomial", "sandwich", "curved"} <= labels

    def test_seed_changes_instances_not_exit(self, capsys):
        code1, out1, _ = run_main(
            capsys, "oracle", "--rho-max", "1", "--n-max", "3", "--instances", "5",
            "--seed", "1", "--format", "json",
        )
        code2, out2, _ = run_main(
            capsys, "oracle", "--rho-max", "1", "--n-max", "3", "--instances", "5",
            "--seed", "2", "--format", "json",
        )
        assert code1 == code2 == 0
        assert out1 != out2


class TestSlopeCommand:
    def test_small_window(self, capsys):
        code, out, _ = run_main(
            capsys, "slope", "--q", "1", "--window", "100", "400", "--format", "json"
        )
        doc = json.loads(out)
        labels = [r["label"] for r in doc["rows"]]
        assert "upper_ratio_q1" in labels and "upper_ratio_q1_asymptotic" in labels


class TestExitCodes:
    def test_quadrature_failure_maps_to_2(self, capsys, monkeypatch):
        def boom(*a, **k):
            raise QuadratureError("forced")

        monkeypatch.setattr(cli, "invert_power_symbol", boom)
        code, _, err = run_main(capsys, "bromwich-check")
        assert code == 2
        assert "quadrature" in err

    def test_bad_env_precision(self, capsys, monkeypatch):
        monkeypatch.setenv("PARTITION_LAB_PRECISION", "not-a-number")
        code, _, err = run_main(capsys, "table", "--n-max", "2")
        assert code == 3

    def test_env_precision_respected(self, capsys, monkeypatch):
        monkeypatch.setenv("PARTITION_LAB_PRECISION", "128")
        code, out, _ = run_main(capsys, "verify", "--n-max", "2", "--format", "json")
        assert code == 0


def test_run_config_pretty_summary():
    code, text = run_config(RunConfig(command="verify", family="plain", n_max=3))
    assert code == 0
    assert text.strip().endswith("0 failures")
