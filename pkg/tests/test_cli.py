import csv
import io
import json
import subprocess
import sys

import numpy as np
import pytest

from mmtoeplitz.cli import main, parse_xi_grid, ConfigError


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    return list(csv.reader(io.StringIO(text)))


class TestXiGrid:
    def test_grid(self):
        assert parse_xi_grid("-2:2:5") == [-2.0, -1.0, 0.0, 1.0, 2.0]
        assert parse_xi_grid("0.5") == [0.5]
        assert parse_xi_grid([1, 2]) == [1.0, 2.0]

    @pytest.mark.parametrize("bad", ["1:2", "a:b:c", "0:1:0"])
    def test_bad(self, bad):
        with pytest.raises(ConfigError):
            parse_xi_grid(bad)


class TestGamma:
    def test_qe_closed_form(self, capsys):
        code, out, _ = run(["gamma", "--case", "qe", "--n", "1", "--lambda", "0", "--symbol", "1/(1+h1)",
                            "--pmax", "10"], capsys)
        assert code == 0
        table = rows(out)
        assert table[0] == ["p1", "xi", "gamma_re", "gamma_im", "err"]
        for r in table[1:]:
            assert float(r[2]) == pytest.approx(1 / (int(r[0]) + 2), rel=1e-10)

    def test_hyperbolic_monotone(self, capsys):
        code, out, _ = run(["gamma", "--case", "hyp", "--lambda", "0", "--symbol", "ind(u>0)", "--xi", "-20:20:81"],
                           capsys)
        assert code == 0
        table = rows(out)
        assert table[0] == ["xi", "gamma_re", "gamma_im", "err"]
        vals = np.array([float(r[1]) for r in table[1:]])
        assert len(vals) == 81
        assert np.all(np.diff(vals[:41]) > 0)

    def test_output_file_and_summary(self, tmp_path, capsys):
        path = tmp_path / "t.json"
        code, out, _ = run(["gamma", "--case", "qh", "--n", "2", "--symbol", "h1/(1+h1)", "--pmax", "2",
                            "--xi", "0:1:3", "--format", "json", "--output", str(path)], capsys)
        assert code == 0
        summary = json.loads(out)
        assert summary["entries"] == 9
        data = json.loads(path.read_text())
        assert data["metadata"]["n"] == 2 and data["metadata"]["symbol"] == "h1/(1+h1)"

    @pytest.mark.parametrize("method", ["duffy-simplex", "monte-carlo"])
    def test_byte_identical(self, tmp_path, capsys, method):
        args = ["gamma", "--case", "qe", "--n", "2", "--symbol", "exp(-h1-h2)", "--pmax", "2", "--method", method,
                "--seed", "5"]
        for name in ("a.csv", "b.csv"):
            assert run(args + ["--output", str(tmp_path / name)], capsys)[0] == 0
        assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()

    def test_threads_byte_identical(self, tmp_path, capsys):
        args = ["gamma", "--case", "hyp", "--symbol", "atan(u)", "--xi", "-1:1:7"]
        run(args + ["--output", str(tmp_path / "a.csv"), "--threads", "1"], capsys)
        run(args + ["--output", str(tmp_path / "b.csv"), "--threads", "4"], capsys)
        assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()

    def test_config_file_with_override(self, tmp_path, capsys):
        cfg = tmp_path / "run.json"
        cfg.write_text(json.dumps({"case": "qe", "n": 1, "lambda": 0, "symbol": "1/(1+h1)", "pmax": 2,
                                   "quadrature": {"nodes_per_axis": 16}}))
        code, out, _ = run(["gamma", "--config", str(cfg)], capsys)
        assert code == 0 and len(rows(out)) == 4
        code, out, _ = run(["gamma", "--config", str(cfg), "--pmax", "4", "--format", "json"], capsys)
        data = json.loads(out)
        assert len(data["entries"]) == 5
        assert data["metadata"]["quadrature"]["nodes_per_axis"] == 16

    def test_symbols_file(self, tmp_path, capsys):
        syms = tmp_path / "s.json"
        syms.write_text(json.dumps({"symbols": {"decay": "1/(1+h1)"}}))
        code, out, _ = run(["gamma", "--n", "1", "--symbol", "decay", "--symbols-file", str(syms), "--pmax", "0"],
                           capsys)
        assert code == 0
        assert float(rows(out)[1][2]) == pytest.approx(0.5, rel=1e-12)


class TestExitCodes:
    @pytest.mark.parametrize(
        "argv",
        [
            ["gamma", "--case", "qe", "--n", "1", "--symbol", "u"],
            ["gamma", "--case", "qe", "--symbol", "1/(1+"],
            ["gamma", "--case", "qe", "--lambda", "-2"],
            ["gamma", "--case", "qh", "--n", "2"],
            ["gamma", "--case", "qe", "--xi", "0:1:2"],
            ["gamma", "--case", "hyp", "--n", "2", "--xi", "0"],
            ["gamma", "--case", "qe", "--nodes", "1"],
            ["gamma", "--case", "qe", "--symbol", "foo(h1)"],
        ],
    )
    def test_config_errors(self, argv, capsys):
        code, _, err = run(argv, capsys)
        assert code == 2
        assert err.startswith("error:")

    def test_arity_message(self, capsys):
        _, _, err = run(["gamma", "--case", "qe", "--n", "1", "--symbol", "h1*u"], capsys)
        assert "'u' is not allowed" in err

    def test_syntax_caret(self, capsys):
        _, _, err = run(["gamma", "--symbol", "1 + * h1"], capsys)
        assert "^" in err

    def test_missing_config_file(self, tmp_path, capsys):
        assert run(["gamma", "--config", str(tmp_path / "nope.json")], capsys)[0] == 2

    def test_unknown_config_key(self, tmp_path, capsys):
        cfg = tmp_path / "c.json"
        cfg.write_text(json.dumps({"colour": "red"}))
        assert run(["gamma", "--config", str(cfg)], capsys)[0] == 2

    def test_divergence(self, monkeypatch, capsys):
        from mmtoeplitz import cli
        from mmtoeplitz.errors import DivergenceError

        def boom(*a, **k):
            raise DivergenceError("integral diverges")

        monkeypatch.setattr(cli, "gamma_table", boom)
        assert run(["gamma", "--case", "qe"], capsys)[0] == 3


class TestVerify:
    def test_moment(self, capsys):
        code, out, _ = run(["verify", "moment", "--n", "2", "--samples", "100"], capsys)
        report = json.loads(out)
        assert code == 0 and report["passed"]
        assert all(c["residual"] < c["tolerance"] for c in report["checks"])

    def test_diagonal(self, capsys):
        code, out, _ = run(["verify", "diagonal", "--n", "2", "--lambda", "0.5", "--symbol", "h1/(1+h1+h2)",
                            "--degree", "4"], capsys)
        assert code == 0 and json.loads(out)["passed"]

    def test_failure_exit_code(self, monkeypatch, capsys):
        from mmtoeplitz import verify

        monkeypatch.setattr(verify, "pde_suite", lambda *a, **k: [verify.check("broken", 1.0, 1e-12)])
        code, out, _ = run(["verify", "pde"], capsys)
        assert code == 1
        assert not json.loads(out)["passed"]

    def test_all(self, tmp_path, capsys):
        path = tmp_path / "report.json"
        code, out, _ = run(["verify", "all", "--output", str(path)], capsys)
        report = json.loads(path.read_text())
        assert code == 0 and report["passed"]
        assert {c["suite"] for c in report["checks"]} == {"moment", "coords", "pde", "isometry", "diagonal"}


def test_console_script_entry():
    out = subprocess.run([sys.executable, "-m", "mmtoeplitz.cli", "--version"], capture_output=True, text=True)
    assert out.returncode == 0 and out.stdout.strip()
