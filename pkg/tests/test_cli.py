"""
Tests for the Command-Line Front End

Validates:
1. expand in text, JSON and CSV
2. Exit codes for success, failure and usage errors
3. RunConfig validation
4. verify and scan JSON payloads
5. Excel export
"""

import json

import pytest
from pathlib import Path
import sys

# Add project root to path
sys.path.insert(0, str(Path(__file__).parent.parent))


class TestExpand:
    """Tests for the expand subcommand."""

    def test_json(self, capsys):
        from app.cli import main

        code = main(["expand", "psi(-q^2,q)", "--trunc", "26", "--json"])
        payload = json.loads(capsys.readouterr().out)

        assert code == 0
        assert payload["spec"] == "psi(-q^2,q)"
        assert payload["trunc"] == 26
        coeffs = payload["coefficients"]
        assert len(coeffs) == 27
        assert [coeffs[n] for n in (0, 1, 2, 5, 7, 12, 15, 22, 26)] == [1, -1, -1, 1, -1, 1, 1, -1, 1]

    def test_text_format(self, capsys):
        from app.cli import main

        assert main(["expand", "f1", "--trunc", "5"]) == 0
        out = capsys.readouterr().out
        assert out.splitlines()[0] == "#trunc=5"
        assert "1\t-1" in out

    def test_eta_csv_mod(self, capsys):
        from app.cli import main

        assert main(["expand", "f3^3/f1", "--trunc", "4", "--mod", "2", "--output", "csv"]) == 0
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] == "exponent,coefficient"
        assert len(lines) == 6

    def test_negative_trunc_is_usage_error(self, capsys):
        from app.cli import main

        assert main(["expand", "psi(-q^2,q)", "--trunc", "-1"]) == 2
        assert "error" in capsys.readouterr().err

    def test_parse_error_is_usage_error(self, capsys):
        from app.cli import main

        assert main(["expand", "psi(-q^2;q)", "--trunc", "10"]) == 2
        assert "position" in capsys.readouterr().err

    def test_output_file(self, tmp_path, capsys):
        from app.cli import main

        target = tmp_path / "series.txt"
        assert main(["expand", "f(q,q^2)", "--trunc", "10", "--output-file", str(target)]) == 0
        assert capsys.readouterr().out == ""
        assert target.read_text(encoding="utf-8").startswith("#trunc=10")

    def test_excel_output(self, tmp_path, capsys):
        pytest.importorskip("openpyxl")
        from openpyxl import load_workbook
        from app.cli import main

        target = tmp_path / "series.xlsx"
        assert main(["expand", "psi(-q^2,q)", "--trunc", "8", "--excel-output", str(target)]) == 0
        ws = load_workbook(target).active
        assert ws.cell(row=1, column=1).value == "exponent"
        assert ws.cell(row=3, column=2).value == -1


class TestVerify:
    """Tests for the verify subcommand."""

    def test_json_is_deterministic(self, capsys):
        from app.cli import main

        argv = ["verify", "c5_32n_31_mod4", "--trunc", "640", "--json"]
        assert main(argv) == 0
        first = capsys.readouterr().out
        assert main(argv) == 0
        second = capsys.readouterr().out

        assert first == second
        (report,) = json.loads(first)
        assert report["status"] == "verified"
        assert report["modulus"] == 4
        assert report["first_mismatch"] is None

    def test_unknown_identity(self, capsys):
        from app.cli import main

        assert main(["verify", "no_such_identity"]) == 2


class TestScan:
    """Tests for the scan subcommand."""

    def test_scan_c5(self, capsys):
        from app.cli import main

        code = main(["scan", "--t", "5", "--mod", "2", "--amax", "10", "--min-hits", "50", "--json"])
        payload = json.loads(capsys.readouterr().out)

        assert code == 0
        assert payload["trunc"] == 499
        pairs = {(p["A"], p["B"]) for p in payload["progressions"]}
        assert {(10, 5), (10, 9)} <= pairs

    def test_scan_from_file(self, tmp_path, capsys):
        from app.cli import main
        from app.tools.identities import c_t_series
        from app.tools.series import dumps_series

        source = tmp_path / "c5.txt"
        source.write_text(dumps_series(c_t_series(5, 999, 2)), encoding="utf-8")
        assert main(["scan", "--from-file", str(source), "--amax", "10", "--json"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["modulus"] == 2

    @pytest.mark.parametrize("text", ["#trunc=abc\n0\t1\n", "#trunc=10\n0\tx\n"])
    def test_scan_malformed_file_is_usage_error(self, tmp_path, capsys, text):
        from app.cli import main

        source = tmp_path / "bad.txt"
        source.write_text(text, encoding="utf-8")
        assert main(["scan", "--from-file", str(source), "--amax", "4"]) == 2

    def test_scan_needs_one_source(self, capsys):
        from app.cli import main

        assert main(["scan", "--amax", "10"]) == 2

    def test_scan_truncation_error(self, capsys):
        from app.cli import main

        assert main(["scan", "--t", "5", "--mod", "2", "--amax", "10", "--trunc", "20"]) == 2


class TestOtherCommands:
    """Tests for mex and asymptotics."""

    def test_mex_table(self, capsys):
        from app.cli import main

        assert main(["mex", "--k", "2", "--n", "12", "--output", "csv"]) == 0
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] == "n,gf_coeff,oracle_count,diff_sum"
        assert lines[9].split(",")[:3] == ["8", "1", "1"]

    def test_asymptotics_json(self, capsys):
        from app.cli import main

        assert main(["asymptotics", "--t", "2", "--n", "600", "--json"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["sandwich_ok"] is True
        assert set(payload) >= {"ratio_lo", "ratio_hi", "root_deg7", "root_deg26"}


class TestRunConfig:
    """Tests for RunConfig validation."""

    def test_scan_t_needs_mod(self):
        from pydantic import ValidationError
        from app.models.schemas import RunConfig

        with pytest.raises(ValidationError):
            RunConfig(command="scan", t=5)

    def test_verify_needs_target(self):
        from pydantic import ValidationError
        from app.models.schemas import RunConfig

        with pytest.raises(ValidationError):
            RunConfig(command="verify")

    def test_modulus_floor(self):
        from pydantic import ValidationError
        from app.models.schemas import RunConfig

        with pytest.raises(ValidationError):
            RunConfig(command="expand", spec="f1", modulus=1)
