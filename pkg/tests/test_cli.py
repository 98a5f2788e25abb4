import json
import subprocess
import sys

import numpy as np
import pytest

from drcw import document as doc_io
from drcw.cli import main, parse_angle, parse_null


def run_cli(*argv):
    return main(list(argv))


class TestAngleParsing:
    def test_pi_multiples(self):
        assert parse_angle("0.8pi") == pytest.approx(0.8 * np.pi)
        assert parse_angle("1pi") == pytest.approx(np.pi)

    def test_radians(self):
        assert parse_angle("1.25rad") == 1.25

    def test_rejects_bare_numbers(self):
        with pytest.raises(ValueError, match="pi"):
            parse_angle("0.8")

    def test_null_syntax(self):
        theta, k = parse_null("0.8pi:4")
        assert theta == pytest.approx(0.8 * np.pi)
        assert k == 4
        with pytest.raises(ValueError):
            parse_null("0.8pi")
        with pytest.raises(ValueError):
            parse_null("0.8pi:x")


class TestDesignCommand:
    def test_uniform_document(self, tmp_path, capsys):
        out = tmp_path / "u.json"
        code = run_cli(
            "design", "uniform", "--m", "12", "--n", "8", "--grid", "256", "-o", str(out)
        )
        assert code == 0
        doc = json.loads(out.read_text())
        assert doc["method"] == "uniform"
        assert doc["metrics"]["nag"] == 0.0
        assert len(doc["s"]) == 12
        assert "wrote" in capsys.readouterr().out

    def test_nm_design_with_null(self, tmp_path):
        out = tmp_path / "d.json"
        code = run_cli(
            "design", "nm", "--m", "16", "--n", "8", "--k0", "3",
            "--null", "0.7pi:1", "--window", "hamming", "--seed", "5",
            "--trials", "50", "--grid", "512", "-o", str(out),
        )
        assert code == 0
        doc = json.loads(out.read_text())
        assert doc["method"] == "nm_drcw"
        assert doc["null_spec"]["k0"] == 3
        assert doc["objective"] <= doc["sdp_bound"] + 1e-6
        assert doc["seed"] == 5

    def test_ptm_non_power_of_two_is_usage_error(self, capsys):
        assert run_cli("design", "ptm", "--m", "48") == 2
        assert "power of two" in capsys.readouterr().err

    def test_invalid_null_budget_is_usage_error(self):
        assert run_cli("design", "nm", "--m", "10", "--k0", "12", "--grid", "128") == 2

    def test_baseline_rejects_null_options(self):
        assert run_cli("design", "bd", "--m", "8", "--k0", "3") == 2

    def test_document_round_trip_bytes(self, tmp_path):
        out = tmp_path / "r.json"
        run_cli("design", "bd", "--m", "10", "--n", "8", "--grid", "128", "-o", str(out))
        raw = out.read_text()
        doc = json.loads(raw)
        assert doc_io.dumps_document(doc) == raw

    def test_solver_trace_dump(self, tmp_path):
        out = tmp_path / "d.json"
        trace = tmp_path / "trace.csv"
        code = run_cli(
            "design", "nm", "--m", "10", "--n", "8", "--k0", "2", "--trials", "20",
            "--grid", "128", "-o", str(out), "--trace", str(trace),
        )
        assert code == 0
        lines = trace.read_text().splitlines()
        assert lines[0] == "iteration,objective,certified_gap,diag_deviation"
        assert len(lines) > 2
        last = lines[-1].split(",")
        assert int(last[0]) >= 1
        assert float(last[2]) >= 0.0
        assert float(last[3]) >= 0.0

    def test_legacy_quadratic_flag(self, tmp_path):
        out = tmp_path / "d.json"
        code = run_cli(
            "design", "nm", "--m", "12", "--n", "8", "--null", "0.5pi:1",
            "--trials", "20", "--grid", "128", "--legacy-eq11", "-o", str(out),
        )
        assert code == 0
        doc = json.loads(out.read_text())
        assert doc["legacy_quadratic"] is True

    def test_solver_budget_exhaustion_exit_code(self, capsys):
        code = run_cli(
            "design", "nm", "--m", "16", "--n", "8", "--k0", "4",
            "--grid", "128", "--max-iter", "1",
        )
        assert code == 3
        assert "solver failure" in capsys.readouterr().err


class TestAnalyzeCommand:
    @pytest.fixture()
    def document(self, tmp_path):
        out = tmp_path / "d.json"
        run_cli("design", "bd", "--m", "10", "--n", "8", "--grid", "128", "-o", str(out))
        return out

    def test_csv_outputs(self, document, tmp_path):
        outdir = tmp_path / "a"
        assert run_cli("analyze", str(document), "--out-dir", str(outdir)) == 0
        prsl = (outdir / "prsl.csv").read_text().splitlines()
        assert prsl[0] == "theta_rad,prsl_db"
        assert len(prsl) == 1 + 128
        doppler = (outdir / "doppler.csv").read_text().splitlines()
        assert doppler[0] == "theta_rad,g_db"
        caf_lines = (outdir / "caf.csv").read_text().splitlines()
        assert caf_lines[0] == "lag,theta_rad,re,im,mag_db"
        assert len(caf_lines) == 1 + (2 * 8 - 1) * 128

    def test_byte_identical_repeats(self, document, tmp_path):
        d1, d2 = tmp_path / "r1", tmp_path / "r2"
        run_cli("analyze", str(document), "--out-dir", str(d1))
        run_cli("analyze", str(document), "--out-dir", str(d2))
        for name in ("prsl.csv", "doppler.csv", "caf.csv"):
            assert (d1 / name).read_bytes() == (d2 / name).read_bytes()

    def test_svg_rendering(self, document, tmp_path):
        outdir = tmp_path / "s"
        assert run_cli("analyze", str(document), "--out-dir", str(outdir), "--svg") == 0
        for name in ("prsl.svg", "doppler.svg", "caf.svg"):
            text = (outdir / name).read_text()
            assert text.startswith("<svg")
            assert text.rstrip().endswith("</svg>")

    def test_unreadable_document_is_usage_error(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text("{not json")
        assert run_cli("analyze", str(bad)) == 2
        assert run_cli("analyze", str(tmp_path / "missing.json")) == 2

    def test_wrong_schema_rejected(self, tmp_path):
        bad = tmp_path / "v99.json"
        bad.write_text(json.dumps({"schema_version": 99}))
        assert run_cli("analyze", str(bad)) == 2


class TestTableCommand:
    def test_markdown_output(self, capsys):
        code = run_cli(
            "table", "--k0", "2,4", "--windows", "hamming", "--m", "12", "--n", "8",
            "--trials", "30", "--grid", "256",
        )
        assert code == 0
        out = capsys.readouterr().out
        assert out.startswith("| window | k0 |")
        assert out.count("hamming") == 2

    def test_csv_deterministic(self, tmp_path):
        args = (
            "table", "--k0", "2,3", "--windows", "rectangular", "--m", "10", "--n", "8",
            "--trials", "30", "--grid", "256", "--format", "csv",
        )
        f1, f2 = tmp_path / "t1.csv", tmp_path / "t2.csv"
        assert run_cli(*args, "-o", str(f1)) == 0
        assert run_cli(*args, "-o", str(f2)) == 0
        assert f1.read_bytes() == f2.read_bytes()
        header = f1.read_text().splitlines()[0]
        assert header == "window,k0,rsba_halfwidth_over_pi,dmbr_percent,pdsl_db,nag_db"

    def test_empty_k0_is_usage_error(self, capsys):
        assert run_cli("table", "--k0", "", "--m", "10") == 2
        assert "must not be empty" in capsys.readouterr().err

    def test_k0_budget_checked(self):
        assert run_cli("table", "--k0", "12", "--m", "10", "--grid", "128") == 2


class TestVerifyCommand:
    def test_golay_pass(self, capsys):
        assert run_cli("verify", "--golay", "64") == 0
        assert "ok: complementary pair n=64" in capsys.readouterr().out

    def test_golay_bad_length_usage_error(self):
        assert run_cli("verify", "--golay", "63") == 2

    def test_document_pass(self, tmp_path, capsys):
        out = tmp_path / "d.json"
        run_cli(
            "design", "nm", "--m", "12", "--n", "8", "--k0", "3", "--window", "hamming",
            "--trials", "50", "--grid", "256", "-o", str(out),
        )
        assert run_cli("verify", str(out)) == 0
        report = capsys.readouterr().out
        assert "ok: null orders" in report
        assert "ok: re-analysis reproduces embedded metrics" in report

    def test_tampered_weight_fails_null_check(self, tmp_path, capsys):
        out = tmp_path / "d.json"
        run_cli(
            "design", "nm", "--m", "12", "--n", "8", "--k0", "3", "--window", "hamming",
            "--trials", "50", "--grid", "256", "-o", str(out),
        )
        doc = json.loads(out.read_text())
        doc["w"][4] += 1e-3
        out.write_text(json.dumps(doc))
        assert run_cli("verify", str(out)) == 1
        assert "FAIL: null orders" in capsys.readouterr().out

    def test_bd_document_divisible_by_full_order(self, tmp_path, capsys):
        out = tmp_path / "bd.json"
        run_cli("design", "bd", "--m", "10", "--n", "8", "--grid", "128", "-o", str(out))
        assert run_cli("verify", str(out)) == 0
        assert "ok: null orders (k0=9" in capsys.readouterr().out

    def test_requires_some_target(self):
        assert run_cli("verify") == 2


class TestSubprocessEntry:
    def test_module_invocation(self):
        proc = subprocess.run(
            [sys.executable, "-m", "drcw", "verify", "--golay", "16"],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0
        assert "ok" in proc.stdout

    def test_usage_error_exit_code(self):
        proc = subprocess.run(
            [sys.executable, "-m", "drcw", "design", "ptm", "--m", "48"],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 2
