import csv
import io
import json
import math
import subprocess
import sys
from pathlib import Path

import pytest
from hypothesis import given, settings, strategies as st

from qdeform.cli import EXIT_ERROR, EXIT_FAIL, EXIT_PASS, main
from qdeform.cli.config import ConfigError, RunConfig, merge_sources, parse_grid
from qdeform.cli.reports import CSV_COLUMNS, emit_report, emit_sweep, report_dict
from qdeform.dsl import RelationRecord, ResidualReport
from qdeform.exotic import evaluate_preset, make_params

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "scripts"))
import update_golden  # noqa: E402

GOLDEN = Path(__file__).parent / "golden"


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


class TestGrid:
    @pytest.mark.parametrize("text,expected", [
        ("0", [0.0]),
        ("0.3", [0.3]),
        ("0:0:0.1", [0.0]),
        ("0:1:0.25", [0.0, 0.25, 0.5, 0.75, 1.0]),
        ("0:1:0.3", [0.0, 0.3, 0.6, 0.9]),
        ("0.1:0.3:0.1", [0.1, 0.2, 0.3]),
    ])
    def test_values(self, text, expected):
        assert parse_grid(text) == expected

    def test_twenty_one_points(self):
        g = parse_grid("0:1:0.05")
        assert len(g) == 21 and g[-1] == 1.0 and g[7] == 0.35

    @pytest.mark.parametrize("text", ["1:0:0.1", "0:1:0", "0:1:-0.1", "0:1", "a:b:c", "nan", "0:inf:1"])
    def test_invalid(self, text):
        with pytest.raises(ConfigError):
            parse_grid(text)

    @settings(max_examples=200, deadline=None)
    @given(st.integers(0, 50), st.integers(1, 40), st.integers(0, 30))
    def test_count(self, start, step, n):
        s, h = start / 100, step / 100
        text = f"{s}:{(start + n * step) / 100}:{h}"
        assert len(parse_grid(text)) == n + 1


class TestConfig:
    def test_precedence(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("# run\npreset = boson\ntol = 1e-9\ndim = 5\nlambda = 1\n")
        env = {"QDEFORM_TOL": "1e-6"}
        c = merge_sources({"preset": "boson"}, None, env)
        assert c.tolerance == 1e-6
        c = merge_sources({}, str(cfg), env)
        assert (c.tolerance, c.dim, c.lam) == (1e-9, 5, 1)
        c = merge_sources({"tolerance": "1e-8", "dim": None}, str(cfg), env)
        assert (c.tolerance, c.dim) == (1e-8, 5)

    @pytest.mark.parametrize("kw", [
        dict(), dict(preset="boson", dsl="x.qdl"), dict(preset="boson", dim=1), dict(preset="boson", sign=2),
        dict(preset="boson", mu_omega=0.0), dict(preset="boson", tolerance=-1.0), dict(preset="boson", fmt="xml"),
        dict(preset="boson", mask="many"), dict(preset="boson", nu="1:0:1"),
    ])
    def test_invalid(self, kw):
        with pytest.raises(ConfigError):
            RunConfig(**kw)

    def test_unknown_key(self, tmp_path):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text("colour = blue\n")
        with pytest.raises(ConfigError, match="colour"):
            merge_sources({}, str(cfg), {})

    def test_measure_cross(self):
        c = RunConfig(preset="case1", measure=("pp_*",), measure_cross=True)
        assert c.measure_patterns() == ("pp_*", "*_12", "*_21")


class TestExitCodes:
    def test_cv_example(self, tmp_path, capsys):
        out = tmp_path / "report.json"
        code, _, _ = run(["check", "--preset", "calogero_vasiliev", "--dim", "64", "--lambda", "2",
                          "--alphas", "0.5,-0.5", "--tol", "1e-10", "--out", str(out)], capsys)
        assert code == EXIT_PASS
        doc = json.loads(out.read_text())
        assert [r["pass"] for r in doc["relations"]] == [True, True]

    def test_bosonic_example(self, capsys):
        code, out, _ = run(["check", "--preset", "bosonic", "--dim", "16", "--nu", "0"], capsys)
        assert code == EXIT_PASS and json.loads(out)["overall_pass"] is True

    def test_bad_dsl(self, tmp_path, capsys):
        bad = tmp_path / "bad.qdl"
        bad.write_text("algebra bad;\ngen a;\nrel r: bracket(a, a = 0;\n")
        code, _, err = run(["check", "--dsl", str(bad)], capsys)
        assert code == EXIT_ERROR
        assert "line 3, column" in err and str(bad) in err

    def test_failing_relation(self, tmp_path, capsys):
        src = tmp_path / "wrong.qdl"
        src.write_text("algebra wrong;\ngen a;\nrel heis: bracket(a, dagger(a), 1) = 2*I;\n")
        code, out, _ = run(["check", "--dsl", str(src), "--dim", "8", "--lambda", "1"], capsys)
        assert code == EXIT_FAIL and json.loads(out)["relations"][0]["pass"] is False

    @pytest.mark.parametrize("argv", [
        ["check", "--preset", "nope"],
        ["check"],
        ["check", "--preset", "boson", "--dim", "x"],
        ["check", "--preset", "boson", "--nu", "0:1:0.5"],
        ["check", "--preset", "calogero_vasiliev", "--alphas", "-2,2"],
        ["check", "--preset", "boson", "--out", "/nonexistent/dir/r.json"],
        ["check", "--dsl", "/nonexistent.qdl"],
        ["check", "--preset", "case1", "--lambda", "2", "--phase-space", "literal"],
        ["frobnicate"],
        [],
    ])
    def test_errors(self, argv, capsys):
        code, _, err = run(argv, capsys)
        assert code == EXIT_ERROR
        assert err

    def test_presets_and_validate(self, capsys):
        code, out, _ = run(["presets"], capsys)
        assert code == EXIT_PASS and "case2" in out and "limit of case1" in out
        code, out, _ = run(["validate", str(Path(__file__).parent / "golden" / "missing.qdl")], capsys)
        assert code == EXIT_ERROR

    def test_validate_ok(self, tmp_path, capsys):
        f = tmp_path / "cv.qdl"
        f.write_text("algebra cv;\ngen a, K;\nparam kappa = 0.5;\nrel r1: bracket(a, dagger(a), 1) = I + kappa*K;\n")
        code, out, _ = run(["validate", str(f)], capsys)
        assert code == EXIT_PASS and "1 relations" in out

    def test_module_entry_point(self):
        proc = subprocess.run([sys.executable, "-m", "qdeform.cli", "check", "--preset", "boson", "--dim", "4",
                               "--format", "text"], capture_output=True, text=True)
        assert proc.returncode == 0
        assert "heis" in proc.stdout and "overall: pass" in proc.stdout


class TestReports:
    def test_json_round_trip(self, capsys):
        code, out, _ = run(["check", "--preset", "case2", "--dim", "4", "--lambda", "4", "--nu", "0.3"], capsys)
        doc = json.loads(out)
        assert code == EXIT_FAIL
        assert set(doc) >= {"schema_version", "presentation", "params", "relations", "warnings", "overall_pass"}
        assert set(doc["params"]) == {"nu", "sign", "mu_omega", "lambda", "chi_re", "chi_im", "theta_re",
                                      "theta_im", "eta_re", "eta_im", "f_choice"}
        assert "f_hermiticity_violated" in doc["warnings"]
        rep = evaluate_preset("case2", make_params(0.3, lam=4), 4)
        for rec, row in zip(rep, doc["relations"]):
            assert row["raw_norm"] == rec.raw_norm and row["masked_norm"] == rec.masked_norm

    def test_empty_report(self):
        rep = ResidualReport("empty", [], 4, 1)
        doc = json.loads(emit_report(rep))
        assert doc["relations"] == [] and doc["overall_pass"] is True

    def test_no_warning_at_zero(self, capsys):
        _, out, _ = run(["check", "--preset", "bosonic", "--dim", "4", "--nu", "0"], capsys)
        assert "f_hermiticity_violated" not in json.loads(out)["warnings"]

    def test_text_and_csv_formats(self, capsys):
        _, out, _ = run(["check", "--preset", "boson", "--dim", "4", "--format", "csv"], capsys)
        rows = list(csv.reader(io.StringIO(out)))
        assert tuple(rows[0]) == CSV_COLUMNS and rows[1][1] == "heis" and rows[1][4] == "true"

    def test_infinite_tolerance_is_null(self):
        rec = RelationRecord("x", 1.0, 1.0, 0, math.inf, 1.0, None)
        doc = report_dict(ResidualReport("t", [rec], 4, 1))
        assert doc["relations"][0]["tolerance"] is None

    def test_unknown_format(self):
        with pytest.raises(ValueError):
            emit_sweep([], "yaml")


class TestSweep:
    def test_row_count(self, tmp_path, capsys):
        out = tmp_path / "sweep.csv"
        code, _, _ = run(["sweep", "--preset", "case2", "--nu", "0:1:0.25", "--dim", "4", "--lambda", "4",
                          "--out", str(out)], capsys)
        rows = list(csv.DictReader(out.open()))
        assert code == EXIT_FAIL
        assert len(rows) == 5 * 32
        nus = [float(r["nu"]) for r in rows]
        assert nus == sorted(nus)
        first = [r for r in rows if float(r["nu"]) == 0.0]
        assert [r["relation_label"] for r in first] == sorted(r["relation_label"] for r in first)
        assert all(float(r["masked_norm"]) < 1e-12 for r in first)

    def test_degenerate_grid(self, capsys):
        code, out, _ = run(["sweep", "--preset", "bosonic", "--nu", "0:0:0.1", "--dim", "4"], capsys)
        rows = list(csv.DictReader(io.StringIO(out)))
        assert code == EXIT_PASS and {r["nu"] for r in rows} == {"0.0"} and len(rows) == 12

    def test_json_sweep(self, capsys):
        code, out, _ = run(["sweep", "--preset", "bosonic", "--nu", "0:0.1:0.1", "--dim", "4", "--format", "json",
                            "--workers", "2"], capsys)
        doc = json.loads(out)
        assert code == EXIT_PASS and len(doc["points"]) == 2
        assert doc["points"][1]["params"]["nu"] == 0.1


def _close(a, b, path="$"):
    if isinstance(a, dict):
        assert set(a) == set(b), path
        for k in a:
            _close(a[k], b[k], f"{path}.{k}")
    elif isinstance(a, list):
        assert len(a) == len(b), path
        for k, (x, y) in enumerate(zip(a, b)):
            _close(x, y, f"{path}[{k}]")
    elif isinstance(a, float) and isinstance(b, float):
        assert b == pytest.approx(a, rel=1e-9, abs=1e-13), path
    else:
        assert a == b, path


@pytest.mark.parametrize("name", sorted(update_golden.CASES))
def test_golden(name, tmp_path, capsys):
    out = tmp_path / f"{name}.json"
    main(update_golden.argv_for(name, out))
    capsys.readouterr()
    _close(json.loads((GOLDEN / f"{name}.json").read_text()), json.loads(out.read_text()))
