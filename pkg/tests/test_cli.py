import csv
import io
import os
from contextlib import redirect_stdout

from butterflyshift.cli import EXIT_CONFIG, EXIT_OK, EXIT_ORACLE_FAIL, main

CFG = os.path.join(os.path.dirname(__file__), "..", "configs", "reference.cfg")


def run(argv):
    buf = io.StringIO()
    with redirect_stdout(buf):
        code = main(argv)
    return code, buf.getvalue()


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


class TestConfig:
    def test_malformed_key_exits_2(self, tmp_path, capsys):
        bad = tmp_path / "bad.cfg"
        bad.write_text("alpha = 1.0\nbogus_knob = 3\n")
        code, _ = run(["critical", "--config", str(bad)])
        assert code == EXIT_CONFIG
        assert "bogus_knob" in capsys.readouterr().err

    def test_bad_value_exits_2(self, tmp_path, capsys):
        bad = tmp_path / "bad.cfg"
        bad.write_text("alpha = banana\n")
        code, _ = run(["critical", "--config", str(bad)])
        assert code == EXIT_CONFIG
        assert "alpha" in capsys.readouterr().err

    def test_flag_overrides_file(self, tmp_path):
        code, out = run(["critical", "--config", CFG, "--delta", "2.0"])
        assert code == EXIT_OK
        code2, out2 = run(["critical", "--config", CFG])
        assert out != out2

    def test_invalid_param_value_exits_2(self):
        code, _ = run(["critical", "--alpha", "-3"])
        assert code == EXIT_CONFIG


class TestCritical:
    def test_prints_transitions(self):
        code, out = run(["critical", "--config", CFG])
        assert code == EXIT_OK
        assert "beta_1" in out and "beta_c" in out and "zeta" in out
        b1 = float(out.split("beta_1 = ")[1].split()[0])
        bc = float(out.split("beta_c = ")[1].split()[0])
        assert b1 < bc

    def test_csv_record(self, tmp_path):
        out_path = tmp_path / "crit.csv"
        code, _ = run(["critical", "--config", CFG, "--out", str(out_path)])
        assert code == EXIT_OK
        rows = read_csv(out_path)
        assert len(rows) == 1
        assert float(rows[0]["zeta_eps_beta_lo"]) > 5.0
        assert abs(float(rows[0]["residual_lo"])) < 1e-9


class TestCurves:
    def test_csv_schema_and_invariants(self, tmp_path):
        out_path = tmp_path / "curves.csv"
        code, _ = run(["curves", "--config", CFG, "--beta-stop", "1.1",
                       "--beta-step", "0.05", "--out", str(out_path)])
        assert code == EXIT_OK
        rows = read_csv(out_path)
        assert list(rows[0].keys()) == ["beta", "p34", "p_mid", "p_full", "ztilde", "regime"]
        betas = [float(r["beta"]) for r in rows]
        assert betas == sorted(betas) and len(set(betas)) == len(betas)
        for r in rows:
            assert float(r["p_full"]) >= float(r["p_mid"]) - 1e-10
            assert float(r["p_mid"]) >= float(r["p34"]) - 1e-10
            if r["regime"] == "above_hi":
                assert r["p_full"] == r["p34"]
                assert r["ztilde"] == ""

    def test_deterministic_byte_identical(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        for path in (a, b):
            code, _ = run(["curves", "--config", CFG, "--beta-stop", "0.4",
                           "--beta-step", "0.1", "--out", str(path)])
            assert code == EXIT_OK
        assert a.read_bytes() == b.read_bytes()

    def test_svg_written(self, tmp_path):
        out_path = tmp_path / "curves.csv"
        code, _ = run(["curves", "--config", CFG, "--beta-stop", "1.1",
                       "--beta-step", "0.1", "--out", str(out_path), "--svg"])
        assert code == EXIT_OK
        svg = (tmp_path / "curves.svg").read_text()
        assert svg.startswith("<svg") and "polyline" in svg and "beta_lo" in svg


class TestEquilibria:
    def test_reference_verdicts(self):
        code, out = run(["equilibria", "--config", CFG])
        assert code == EXIT_OK
        assert "at_beta_lo" in out and "at_beta_hi" in out
        assert "no equilibrium state gives weight" in out

    def test_large_L_verdict(self):
        code, out = run(["equilibria", "--config", CFG, "--L", "250"])
        assert code == EXIT_OK
        assert "at least 2 equilibrium states; weight on [1]" in out

    def test_variant_b(self):
        code, out = run(["equilibria", "--config", CFG, "--variant", "B"])
        assert code == EXIT_OK
        assert "two equilibrium states (one per wing)" in out


class TestOracleCmd:
    def test_pass_on_reference(self):
        code, out = run(["oracle", "--config", CFG, "--n-return", "16",
                         "--n-period", "8", "--n-ln", "12"])
        assert code == EXIT_OK
        assert out.strip().endswith("PASS")

    def test_corrupted_edge_fails(self):
        code, out = run(["oracle", "--config", CFG, "--n-return", "16",
                         "--n-period", "8", "--n-ln", "12",
                         "--corrupt-edge", "4:2"])
        assert code == EXIT_ORACLE_FAIL
        assert "FAIL" in out


class TestSweep:
    def test_delta_sweep_monotone(self, tmp_path):
        out_path = tmp_path / "sweep.csv"
        code, _ = run(["sweep", "--config", CFG, "--param", "delta",
                       "--values", "1,2,5", "--out", str(out_path)])
        assert code == EXIT_OK
        rows = read_csv(out_path)
        eb = [float(r["eps_beta_hi"]) for r in rows]
        assert eb[0] > eb[1] > eb[2]
        assert all(float(r["zeta_eps_beta_lo"]) > 5.0 for r in rows)

    def test_L_sweep_monotone(self, tmp_path):
        out_path = tmp_path / "sweep.csv"
        code, _ = run(["sweep", "--config", CFG, "--param", "L",
                       "--values", "1,20,50", "--out", str(out_path)])
        assert code == EXIT_OK
        rows = read_csv(out_path)
        eb = [float(r["eps_beta_hi"]) for r in rows]
        assert eb[0] < eb[1] < eb[2]

    def test_empty_values_exits_2(self):
        code, _ = run(["sweep", "--config", CFG, "--param", "L", "--values", ""])
        assert code == EXIT_CONFIG


class TestThreadEnv:
    def test_threaded_run_matches_serial(self, tmp_path, monkeypatch):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        code, _ = run(["curves", "--config", CFG, "--beta-stop", "0.3",
                       "--beta-step", "0.1", "--out", str(a)])
        assert code == EXIT_OK
        monkeypatch.setenv("BUTTERFLYSHIFT_THREADS", "4")
        code, _ = run(["curves", "--config", CFG, "--beta-stop", "0.3",
                       "--beta-step", "0.1", "--out", str(b)])
        assert code == EXIT_OK
        assert a.read_bytes() == b.read_bytes()
