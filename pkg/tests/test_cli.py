"""Command-line interface: exit statuses, CSV artifact format, and
byte-level determinism."""

import re

from nlops.cli import ExperimentConfig, main, parse_terms

SCI = re.compile(r"-?\d\.\d{16}e[+-]\d{2,3}$")


def run(tmp_path, *argv):
    return main([*argv, "--out", str(tmp_path)])


def write_config(tmp_path, text):
    path = tmp_path / "exp.ini"
    path.write_text(text)
    return str(path)


class TestSubcommandsRun:
    def test_bessel(self, tmp_path, capsys):
        assert run(tmp_path, "bessel") == 0
        assert capsys.readouterr().out.startswith("PASS bessel")
        assert (tmp_path / "bessel.csv").exists()

    def test_zeros(self, tmp_path, capsys):
        assert run(tmp_path, "zeros") == 0
        assert "worst residual" in capsys.readouterr().out

    def test_multiplier(self, tmp_path, capsys):
        assert run(tmp_path, "multiplier") == 0
        out = capsys.readouterr().out
        assert out.startswith("PASS multiplier")
        assert "positivity certificate" in out

    def test_localize(self, tmp_path, capsys):
        cfg = write_config(tmp_path, "[run]\neps_list = 0.1 0.05\n")
        assert run(tmp_path, "localize", "--config", cfg) == 0
        assert "error decreases" in capsys.readouterr().out

    def test_kernel_check(self, tmp_path, capsys):
        assert run(tmp_path, "kernel-check") == 0
        out = capsys.readouterr().out
        assert "kernel frequencies found" in out
        assert (tmp_path / "kernel_check.csv").exists()

    def test_witness(self, tmp_path, capsys):
        assert run(tmp_path, "witness") == 0
        assert "sup|A_s u|" in capsys.readouterr().out

    def test_counterexample_linf(self, tmp_path, capsys):
        cfg = write_config(tmp_path, "[run]\neps_list = 0.15 0.08\n")
        assert run(tmp_path, "counterexample-linf", "--config", cfg) == 0
        assert "uniform floor" in capsys.readouterr().out
        body = (tmp_path / "counterexample_linf.csv").read_text()
        assert "1.4999999999999999e-01" in body
        assert "8.0000000000000002e-02" in body

    def test_gauss_green(self, tmp_path, capsys):
        assert run(tmp_path, "gauss-green") == 0
        assert capsys.readouterr().out.startswith("PASS gauss-green")
        body = (tmp_path / "gauss_green.csv").read_text()
        assert "heaviside" in body and "trig" in body

    def test_area(self, tmp_path, capsys):
        cfg = write_config(tmp_path, "[run]\ns_list = 0.2 0.1 0.05\n")
        assert run(tmp_path, "area", "--config", cfg) == 0
        assert "gap decreases" in capsys.readouterr().out
        rows = [l for l in (tmp_path / "area.csv").read_text().splitlines() if not l.startswith("#")]
        assert len(rows) == 4  # header + one row per scale

    def test_atomic_demo(self, tmp_path, capsys):
        assert run(tmp_path, "atomic-demo") == 0
        assert "discontinuous ball average" in capsys.readouterr().out

    def test_bench(self, tmp_path, capsys):
        cfg = write_config(tmp_path, "[run]\nn_grid = 32\n")
        assert run(tmp_path, "bench", "--config", cfg) == 0
        assert capsys.readouterr().out.startswith("PASS bench")


class TestExitStatuses:
    def test_increasing_eps_list_is_config_error(self, tmp_path):
        cfg = write_config(tmp_path, "[run]\neps_list = 0.05 0.1\n")
        assert run(tmp_path, "localize", "--config", cfg) == 2

    def test_unknown_operator_preset(self, tmp_path):
        cfg = write_config(tmp_path, "[operator]\npreset = hessian\n")
        assert run(tmp_path, "localize", "--config", cfg) == 2

    def test_unknown_weight_preset(self, tmp_path):
        cfg = write_config(tmp_path, "[weight]\npreset = cauchy\n")
        assert run(tmp_path, "multiplier", "--config", cfg) == 2

    def test_bad_field_term(self, tmp_path):
        cfg = write_config(tmp_path, "[field]\nterms = 1 2 3\n")
        assert run(tmp_path, "localize", "--config", cfg) == 2

    def test_malformed_ini(self, tmp_path):
        cfg = write_config(tmp_path, "n_grid = 64\nno section header\n")
        assert run(tmp_path, "bessel", "--config", cfg) == 2

    def test_missing_config_file(self, tmp_path):
        assert run(tmp_path, "bessel", "--config", str(tmp_path / "absent.ini")) == 2

    def test_odd_grid_size(self, tmp_path):
        cfg = write_config(tmp_path, "[run]\nn_grid = 33\n")
        assert run(tmp_path, "localize", "--config", cfg) == 2

    def test_failed_invariant_exits_one(self, tmp_path, capsys):
        # s = 0.3 is not a kernel scale, so the witness comparison fails
        # numerically rather than through configuration
        cfg = write_config(tmp_path, "[witness]\ns = 0.3\n")
        assert run(tmp_path, "witness", "--config", cfg) == 1
        assert capsys.readouterr().out.startswith("FAIL witness")


class TestCsvFormat:
    def test_metadata_block(self, tmp_path):
        cfg = write_config(tmp_path, "[run]\neps_list = 0.2 0.1\n[tolerance]\nlocalize_monotone_slack = 0.1\n")
        assert run(tmp_path, "localize", "--config", cfg) == 0
        lines = (tmp_path / "localize.csv").read_text().splitlines()
        assert lines[0] == "# tool: nlops 0.1.0"
        assert lines[1] == "# subcommand: localize"
        assert any(l.startswith("# config run.eps_list") for l in lines)
        assert any(l.startswith("# tolerance localize_monotone_slack") for l in lines)
        header = next(l for l in lines if not l.startswith("#"))
        assert header == "eps,lp_error"

    def test_seventeen_digit_floats(self, tmp_path):
        assert run(tmp_path, "zeros") == 0
        lines = (tmp_path / "zeros.csv").read_text().splitlines()
        data = [l for l in lines if not l.startswith("#")][1:]
        for line in data:
            k, zero, resid = line.split(",")
            assert k.isdigit()
            assert SCI.match(zero)
            assert SCI.match(resid)

    def test_defaults_echoed_without_config(self, tmp_path):
        assert run(tmp_path, "zeros") == 0
        assert "# config config = <defaults>" in (tmp_path / "zeros.csv").read_text()


class TestDeterminism:
    CONFIG = "[run]\nn_grid = 32\n[field]\nkind = random\n"

    def test_same_seed_same_bytes(self, tmp_path):
        cfg = write_config(tmp_path, self.CONFIG)
        a, b = tmp_path / "a", tmp_path / "b"
        assert main(["localize", "--config", cfg, "--out", str(a), "--seed", "7"]) == 0
        assert main(["localize", "--config", cfg, "--out", str(b), "--seed", "7"]) == 0
        assert (a / "localize.csv").read_bytes() == (b / "localize.csv").read_bytes()

    def test_thread_count_does_not_change_output(self, tmp_path):
        a, b = tmp_path / "a", tmp_path / "b"
        assert main(["multiplier", "--out", str(a), "--threads", "1"]) == 0
        assert main(["multiplier", "--out", str(b), "--threads", "8"]) == 0
        assert (a / "multiplier.csv").read_bytes() == (b / "multiplier.csv").read_bytes()


class TestConfigParsing:
    def test_terms_roundtrip(self):
        terms = parse_terms("1 0 | 0.5-0.25j 0; 2 1 | 0 1j", 2, 2)
        assert terms[0][0] == (1, 0)
        assert terms[0][1][0] == 0.5 - 0.25j
        assert terms[1][0] == (2, 1)
        assert terms[1][1][1] == 1j

    def test_defaults_without_file(self):
        cfg = ExperimentConfig.from_ini(None)
        assert cfg.N == 64
        assert cfg.echo == (("config", "<defaults>"),)

    def test_inline_comments_stripped(self, tmp_path):
        path = tmp_path / "c.ini"
        path.write_text("[run]\nn_grid = 32  # keep it small\n")
        assert ExperimentConfig.from_ini(str(path)).N == 32
