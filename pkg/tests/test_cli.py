from __future__ import annotations

import csv
import io
import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from steklab import cli, report
from steklab.errors import InternalInvariantError, ParameterError, ParseError, SpectrumIndexError
from steklab.mesh import load
from steklab.spectrum import BOUNDARY_LAPLACIAN, STEKLOV, Spectrum
from steklab.suite import LE, make_report


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    return code, (json.loads(out) if out.strip() else None), err


class TestSpectrumCommand:
    def test_analytic_disk(self, capsys):
        code, env, _ = run_json(capsys, "spectrum", "--analytic", "disk:1", "--count", "5")
        assert code == 0
        assert env["reports"][0]["values"] == [0.0, 1.0, 1.0, 2.0, 2.0]
        assert env["schema_version"] == 1 and env["tool"] == "steklab" and "timestamp" in env

    def test_boundary_laplacian_circle(self, capsys):
        code, env, _ = run_json(capsys, "spectrum", "--analytic", f"circle:{2 * math.pi!r}",
                                "--kind", "boundary-laplacian", "--count", "3")
        assert code == 0 and env["reports"][0]["values"] == pytest.approx([0, 1, 1])

    def test_circle_has_no_steklov(self, capsys):
        code, _, err = run(capsys, "spectrum", "--analytic", "circle:1")
        assert code == 2 and "error" in err

    def test_fem_csv(self, capsys):
        code, out, _ = run(capsys, "spectrum", "--shape", "disk", "--refinement", "2", "--count", "4",
                           "--format", "csv")
        rows = list(csv.DictReader(io.StringIO(out)))
        assert code == 0 and [r["index"] for r in rows] == ["1", "2", "3", "4"]
        assert rows[0]["source"] == "fem"

    @pytest.mark.parametrize(
        "argv",
        [
            ("--analytic", "annulus:1,0.5"),
            ("--analytic", "square:1"),
            ("--analytic", "disk:1", "--shape", "disk"),
            ("--shape", "annulus", "--inner", "0.5"),
            ("--shape", "disk", "--refinement", "1", "--count", "10000"),
        ],
    )
    def test_usage_errors(self, capsys, argv):
        code, _, err = run(capsys, "spectrum", *argv)
        assert code == 2 and err.startswith("error:")

    def test_missing_mesh_file(self, capsys, tmp_path):
        code, _, _ = run(capsys, "spectrum", "--mesh", str(tmp_path / "none.json"))
        assert code == 2


class TestMeshCommand:
    def test_to_file(self, capsys, tmp_path):
        path = tmp_path / "a.json"
        code, out, _ = run(capsys, "mesh", "--shape", "annulus", "--inner", "0.5", "--outer", "1",
                           "--refinement", "2", "--out", str(path))
        assert code == 0 and "boundary_loops=2" in out
        mesh = load(path)
        assert len(mesh.boundary_loops) == 2

    def test_stdout_and_reuse(self, capsys, tmp_path):
        code, out, err = run(capsys, "mesh", "--shape", "disk", "--refinement", "1")
        assert code == 0 and "vertices=25" in err
        path = tmp_path / "d.json"
        path.write_text(out)
        code, env, _ = run_json(capsys, "spectrum", "--mesh", str(path), "--count", "3")
        assert code == 0 and env["reports"][0]["values"][0] == 0.0

    def test_perturbed(self, capsys, tmp_path):
        code, _, _ = run(capsys, "mesh", "--shape", "perturbed", "--cos", "0.1,0.05", "--sin", "0.02",
                         "--refinement", "2", "--out", str(tmp_path / "p.json"))
        assert code == 0

    def test_shape_required(self):
        with pytest.raises(SystemExit) as exc:
            cli.main(["mesh"])
        assert exc.value.code == 2


class TestVerifyCommand:
    def test_sharp_cor1(self, capsys):
        code, env, _ = run_json(capsys, "verify", "--analytic", "disk:1", "--inequality", "cor1", "--n", "3")
        rep = env["reports"][0]
        assert code == 0 and rep["pass"] and rep["sharp"]
        assert env["summary"] == {"total": 1, "passed": 1, "sharp": 1}

    def test_cor1_limit(self, capsys):
        code, env, _ = run_json(capsys, "verify", "--analytic", "disk:2", "--inequality", "cor1", "--n", "inf")
        assert code == 0 and env["reports"][0]["params"]["n"] == "inf"

    def test_all_on_disk(self, capsys):
        code, env, _ = run_json(capsys, "verify", "--analytic", "disk:1", "--all")
        assert code == 0 and env["summary"]["total"] == len(env["reports"]) > 10

    def test_violation_exit_code(self, capsys):
        # thin-hole annulus: the planar trace bound fails
        code, env, _ = run_json(capsys, "verify", "--analytic", "annulus:0.1,1", "--inequality", "hps-trace",
                                "--n", "1")
        assert code == 1 and not env["reports"][0]["pass"]

    def test_fem_annulus_thm2(self, capsys):
        code, env, _ = run_json(capsys, "verify", "--shape", "annulus", "--inner", "0.5", "--outer", "1",
                                "--refinement", "3", "--inequality", "thm2", "--m", "2", "--k", "2")
        assert code == 0 and env["reports"][0]["inputs"][0]["source"] == "fem"

    @pytest.mark.parametrize(
        "argv",
        [
            ("--inequality", "thm1", "--q", "0.5"),
            ("--inequality", "hps", "--n", "2"),
            ("--inequality", "thm1", "--a", "1,x"),
            ("--inequality", "yy", "--p", "1.5"),
            ("--all", "--inequality", "yy"),
            (),
        ],
    )
    def test_usage_errors(self, capsys, argv):
        code, _, _ = run(capsys, "verify", "--analytic", "disk:1", *argv)
        assert code == 2

    def test_deterministic_without_timestamp(self, capsys):
        argv = ("verify", "--analytic", "annulus:0.5,1", "--all", "--no-timestamp")
        a = run(capsys, *argv)[1]
        b = run(capsys, *argv)[1]
        assert a == b and "timestamp" not in json.loads(a)

    def test_csv_columns(self, capsys):
        code, out, _ = run(capsys, "verify", "--analytic", "disk:1", "--all", "--format", "csv")
        rows = list(csv.DictReader(io.StringIO(out)))
        assert tuple(rows[0]) == report.REPORT_COLUMNS
        assert rows[0]["inputs"].startswith("steklov:analytic:")
        json.loads(rows[0]["params"])

    def test_config_precedence(self, capsys, tmp_path):
        cfg = tmp_path / "c.json"
        cfg.write_text(json.dumps({"format": "steklab-config", "version": 1,
                                   "options": {"analytic": "disk:1", "inequality": "hps-trace", "n": "2"}}))
        code, env, _ = run_json(capsys, "verify", "--config", str(cfg))
        assert code == 0 and env["reports"][0]["params"]["n"] == 2
        code, env, _ = run_json(capsys, "verify", "--config", str(cfg), "--n", "4")
        assert env["reports"][0]["params"]["n"] == 4
        assert "config" not in env["config"]

    @pytest.mark.parametrize(
        "content",
        [
            {"format": "steklab-config", "version": 1, "options": {"bogus": 1}},
            {"format": "other", "version": 1, "options": {}},
            {"format": "steklab-config", "version": 9, "options": {}},
        ],
    )
    def test_bad_config(self, capsys, tmp_path, content):
        cfg = tmp_path / "c.json"
        cfg.write_text(json.dumps(content))
        code, _, _ = run(capsys, "verify", "--config", str(cfg), "--analytic", "disk:1", "--all")
        assert code == 2

    def test_config_syntax_error(self, tmp_path):
        cfg = tmp_path / "c.json"
        cfg.write_text("{\n  oops")
        with pytest.raises(ParseError, match=r"c.json:2:\d+"):
            cli.load_config(str(cfg))

    def test_output_dir_env(self, capsys, tmp_path, monkeypatch):
        monkeypatch.setenv(cli.OUTPUT_DIR_ENV, str(tmp_path))
        code, out, _ = run(capsys, "verify", "--analytic", "disk:1", "--inequality", "yy")
        assert code == 0 and out == ""
        assert json.loads((tmp_path / "verify.json").read_text())["summary"]["passed"] == 1

    def test_out_flag(self, capsys, tmp_path):
        path = tmp_path / "sub" / "r.csv"
        code, _, _ = run(capsys, "verify", "--analytic", "disk:1", "--inequality", "yy", "--format", "csv",
                         "--out", str(path))
        assert code == 0 and path.read_text().startswith("name,relation")


class TestConvergenceCommand:
    def test_disk(self, capsys):
        code, env, _ = run_json(capsys, "convergence", "--shape", "disk", "--levels", "2,3,4")
        table = env["reports"][0]
        assert code == 0 and table["steklov_monotone"] and table["laplacian_monotone"]

    def test_rows_csv(self, capsys):
        code, out, _ = run(capsys, "convergence", "--levels", "2,3", "--format", "csv")
        rows = list(csv.DictReader(io.StringIO(out)))
        assert code == 0 and {r["kind"] for r in rows} == {"steklov", "boundary_laplacian"}
        assert min(int(r["index"]) for r in rows) == 2

    @pytest.mark.parametrize("argv", [("--shape", "perturbed"), ("--levels", "4,3"), ("--levels", "a")])
    def test_usage_errors(self, capsys, argv):
        assert run(capsys, "convergence", *argv)[0] == 2


class TestLemmasCommand:
    def test_reproducible(self, capsys):
        a = run(capsys, "lemmas", "--trials", "50", "--seed", "1", "--no-timestamp")
        b = run(capsys, "lemmas", "--trials", "50", "--seed", "1", "--no-timestamp")
        assert a[0] == 0 and a[1] == b[1]
        assert all(r["violations"] == 0 for r in json.loads(a[1])["reports"])

    def test_zero_trials(self, capsys):
        assert run(capsys, "lemmas", "--trials", "0")[0] == 2


def test_unexpected_exception_maps_to_internal(capsys, monkeypatch):
    def boom(args):
        raise RuntimeError("x")

    monkeypatch.setattr(cli, "cmd_lemmas", boom)
    monkeypatch.setattr(cli, "build_parser", _parser_with(boom))
    code, _, err = run(capsys, "lemmas")
    assert code == 3 and "internal error" in err


def _parser_with(fn):
    original = cli.build_parser

    def build():
        parser = original()
        parser._subparsers._group_actions[0].choices["lemmas"].set_defaults(func=fn)
        return parser

    return build


class TestReportFormat:
    @given(st.floats(allow_nan=False, allow_infinity=False))
    def test_float_roundtrip(self, x):
        assert float(report.format_float(x)) == x

    def test_non_finite(self):
        assert report.format_float(math.inf) == '"inf"'
        assert report.format_float(math.nan) == '"nan"'
        assert report.format_float(3) == "3.0"

    def test_dumps_is_json(self):
        obj = {"a": [1.0, 2.5], "b": {"c": None, "d": True, "e": "x"}, "f": np.float64(0.1)}
        back = json.loads(report.dumps(obj))
        assert back == {"a": [1.0, 2.5], "b": {"c": None, "d": True, "e": "x"}, "f": 0.1}

    def test_envelope_summary_must_match(self):
        with pytest.raises(InternalInvariantError):
            report.envelope("x", {}, [{}], {"total": 2, "passed": 0, "sharp": 0})

    def test_reports_to_csv(self):
        s = Spectrum([0, 1], STEKLOV, label="d")
        rep = make_report("yy", 1.0, 2.0, LE, {"p": 1}, (s,))
        rows = list(csv.reader(io.StringIO(report.reports_to_csv([rep]))))
        assert rows[1][:4] == ["yy", "<=", "1.0", "2.0"]
        assert rows[1][-1] == "steklov:analytic:d" and rows[1][-2] == '{"p":1}'


class TestSpectrum:
    def test_at_and_roundtrip(self):
        s = Spectrum([0, 1, 2], BOUNDARY_LAPLACIAN, label="x")
        assert s.at(3) == 2.0
        assert np.array_equal(Spectrum.from_dict(s.to_dict()).values, s.values)
        with pytest.raises(SpectrumIndexError):
            s.at(0)
        with pytest.raises(SpectrumIndexError):
            s.at(4)

    @pytest.mark.parametrize(
        "values, kind", [([1, 0], STEKLOV), ([-1, 0], STEKLOV), ([0, math.nan], STEKLOV), ([0], "other")]
    )
    def test_invalid(self, values, kind):
        with pytest.raises(ParameterError):
            Spectrum(values, kind)

    def test_values_are_readonly(self):
        s = Spectrum([0, 1], STEKLOV)
        with pytest.raises(ValueError):
            s.values[0] = 5

    def test_from_dict_missing_field(self):
        with pytest.raises(ParseError):
            Spectrum.from_dict({"values": [0]})
