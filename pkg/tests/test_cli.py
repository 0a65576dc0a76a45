"""
Command line tests: output formats, flag resolution and exit codes.
Run with: python -m pytest tests/test_cli.py -v
"""

import csv
import io
import json

import numpy as np
import pytest

from harmonic_chain.commands import chain as chain_commands
from harmonic_chain.errors import ComputeError
from harmonic_chain.utils import fluctuations


def _rows(text):
    return list(csv.reader(io.StringIO(text)))


class TestChainCommands:
    """modes, fluct, pairfluct and crossover."""

    def test_fluct_single_oscillator(self, run_cli):
        """A single atom has variance alpha/2."""
        code, out, err = run_cli("fluct", "--n", 1, "--alpha", 0.04, "--eta", 0)
        assert code == 0
        assert err == ""
        rows = _rows(out)
        assert rows[0] == ["n", "u2_over_a2"]
        assert len(rows) == 2
        assert rows[1][0] == "1"
        assert float(rows[1][1]) == pytest.approx(0.02, rel=1e-12)

    def test_fluct_window(self, run_cli):
        code, out, _ = run_cli("fluct", "--n", 50, "--alpha", 0.02, "--n-min", 10, "--n-max", 14)
        assert code == 0
        assert [row[0] for row in _rows(out)[1:]] == ["10", "11", "12", "13", "14"]

    def test_fluct_classical(self, run_cli):
        """--classical with alpha = 0 uses eta_cl directly."""
        code, out, _ = run_cli("fluct", "--n", 5, "--classical", "--eta-cl", 0.01)
        assert code == 0
        values = [float(row[1]) for row in _rows(out)[1:]]
        assert values == pytest.approx([0.01, 0.02, 0.03, 0.04, 0.05], rel=1e-10)

    def test_modes(self, run_cli):
        code, out, _ = run_cli("modes", "--n", 3)
        rows = _rows(out)
        assert code == 0
        assert rows[0] == ["j", "k_tilde", "omega_ratio", "omega_ratio_squared"]
        assert [row[0] for row in rows[1:]] == ["1", "2", "3"]
        assert float(rows[1][1]) == pytest.approx(np.pi / 7.0)

    def test_pairfluct(self, run_cli):
        code, out, _ = run_cli("pairfluct", "--n", 6, "--classical", "--eta-cl", 0.1, "--n-max", 3)
        rows = _rows(out)
        assert code == 0
        assert rows[0] == ["n", "l", "d_over_a2"]
        assert len(rows) == 10
        table = {(int(n), int(l)): float(d) for n, l, d in rows[1:]}
        assert table[(1, 3)] == pytest.approx(0.2, rel=1e-9)
        assert table[(2, 2)] == 0.0

    def test_pairfluct_bulk_window_on_long_chain(self, run_cli):
        """A narrow bulk window never builds the full N x N matrix."""
        code, out, err = run_cli("pairfluct", "--n", 200000, "--alpha", 0.02, "--method", "bulk",
                                 "--n-min", 1, "--n-max", 2)
        rows = _rows(out)
        assert code == 0
        assert err == ""
        assert len(rows) == 5
        table = {(int(n), int(l)): float(d) for n, l, d in rows[1:]}
        assert table[(1, 2)] == table[(2, 1)] > 0.0

    def test_crossover(self, run_cli):
        code, out, _ = run_cli("crossover", "--eta-steps", 3, "--eta-max", 1.0)
        rows = _rows(out)
        assert code == 0
        assert rows[0] == ["eta", "x2_over_sigma2", "equipartition"]
        assert float(rows[1][1]) == 1.0
        assert float(rows[2][1]) == pytest.approx(1.0 / np.tanh(1.0))


class TestScatteringCommands:
    """density, sq, bragg, moessbauer, classify and alpha-from-si."""

    def test_sq_includes_bragg_point(self, run_cli):
        code, out, _ = run_cli("sq", "--n", 40, "--alpha", 0.02, "--eta-cl", 0.001, "--q-steps", 20)
        rows = _rows(out)
        assert code == 0
        assert rows[0] == ["qa", "S"]
        qs = [float(row[0]) for row in rows[1:]]
        assert 2.0 * np.pi in qs
        assert qs == sorted(qs)

    def test_sq_without_bragg_point(self, run_cli):
        code, out, _ = run_cli("sq", "--n", 40, "--alpha", 0.02, "--q-steps", 20, "--no-bragg-points",
                               "--method", "bulk")
        assert code == 0
        assert len(_rows(out)) == 21

    def test_sq_refinement(self, run_cli):
        code, out, _ = run_cli("sq", "--n", 400, "--alpha", 0.02, "--q-steps", 10, "--refine-points", 5,
                               "--method", "bulk")
        assert code == 0
        assert len(_rows(out)) == 1 + 10 + 1 + 10

    def test_density(self, run_cli):
        code, out, _ = run_cli("density", "--n", 30, "--alpha", 0.02, "--x-steps", 101, "--format", "json")
        document = json.loads(out)
        assert code == 0
        assert len(document["data"]["x_over_a"]) == 101
        assert document["data"]["x_over_a"][0] == 10.0
        assert 0.0 < document["meta"]["contrast"] <= 1.0

    def test_bragg(self, run_cli):
        code, out, _ = run_cli("bragg", "--alpha", 0.02, "--nu", 1, 3)
        rows = _rows(out)
        assert code == 0
        assert rows[0] == ["nu", "beta", "divergent", "n_scaling_exponent", "shape_exponent"]
        assert rows[1][2] == "true"
        assert rows[2][2] == "false"
        assert rows[2][3] == ""
        assert float(rows[1][1]) == pytest.approx(0.1256637, rel=1e-6)

    def test_moessbauer(self, run_cli):
        code, out, _ = run_cli("moessbauer", "--n", 100, "--alpha", 0.02, "--l-min", 5, "--l-max", 8,
                               "--format", "json")
        document = json.loads(out)
        assert code == 0
        assert document["data"]["l"] == [5, 6, 7, 8]
        assert document["meta"]["beta"] == pytest.approx(0.1256637, rel=1e-6)

    def test_classify(self, run_cli):
        code, out, _ = run_cli("classify", "--d", 3, "--regime", "thermal")
        assert code == 0
        assert _rows(out)[1] == ["3", "thermal", "LongRangeOrder"]

    def test_alpha_from_si(self, run_cli):
        """A = 1 at c = 4 km/s and a = 4 Angstrom gives alpha of about 0.04."""
        code, out, _ = run_cli("alpha-from-si", "--c", 4e3, "--a", 4e-10, "--A", 1)
        assert code == 0
        alpha = float(_rows(out)[1][0])
        assert alpha == pytest.approx(0.0394, rel=1e-3)
        assert alpha == pytest.approx(0.04, rel=0.02)


class TestOutput:
    """Output destinations and metadata."""

    def test_output_file(self, run_cli, tmp_path):
        target = tmp_path / "profile.csv"
        code, out, _ = run_cli("fluct", "--n", 4, "--alpha", 0.02, "--output", target)
        assert code == 0
        assert out == ""
        assert target.read_text().startswith("n,u2_over_a2\n")

    def test_json_meta_reproduces_run(self, run_cli):
        """Re-running with the recorded parameters gives identical data."""
        code, out, _ = run_cli("fluct", "--n", 20, "--alpha", 0.05, "--eta-cl", 0.015, "--format", "json")
        assert code == 0
        first = json.loads(out)
        params = first["meta"]["params"]
        grid = first["meta"]["grid"]

        code, out, _ = run_cli(
            "fluct", "--n", params["n_atoms"], "--alpha", repr(params["alpha"]), "--eta", repr(params["eta"]),
            "--pin-ratio", repr(params["pin_ratio"]), "--dispersion", params["dispersion"],
            "--n-min", grid["n_min"], "--n-max", grid["n_max"], "--format", "json",
        )
        assert code == 0
        assert json.loads(out)["data"] == first["data"]

    def test_meta_records_regime_and_method(self, run_cli):
        code, out, _ = run_cli("pairfluct", "--n", 4, "--alpha", 0.1, "--eta", 0.5, "--method", "bulk",
                               "--format", "json")
        meta = json.loads(out)["meta"]
        assert code == 0
        assert meta["subcommand"] == "pairfluct"
        assert meta["regime"] == {"kind": "finite-t", "eta": 0.5, "eta_cl": 0.0}
        assert meta["method"] == "bulk"
        assert meta["format"] == "json"

    def test_version(self, run_cli):
        code, out, _ = run_cli("--version")
        assert code == 0
        assert out.startswith("harmonic_chain ")


class TestExitCodes:
    """Usage errors exit 2, compute errors exit 1."""

    def test_unknown_flag(self, run_cli):
        code, out, err = run_cli("fluct", "--n", 3, "--bogus")
        assert code == 2
        assert out == ""
        assert "unrecognized arguments" in err

    def test_missing_subcommand(self, run_cli):
        code, _, _ = run_cli()
        assert code == 2

    def test_invalid_parameter(self, run_cli):
        code, out, err = run_cli("fluct", "--n", 0)
        assert code == 2
        assert out == ""
        assert len(err.strip().splitlines()) == 1
        assert "n_atoms" in err

    def test_conflicting_temperatures(self, run_cli):
        code, _, err = run_cli("fluct", "--n", 3, "--alpha", 0.1, "--eta", 0.1, "--eta-cl", 0.01)
        assert code == 2
        assert "--eta-cl" in err

    def test_eta_cl_needs_alpha(self, run_cli):
        code, _, _ = run_cli("fluct", "--n", 3, "--eta-cl", 0.01)
        assert code == 2

    def test_cost_guard(self, run_cli):
        code, _, err = run_cli("pairfluct", "--n", 5000, "--alpha", 0.02)
        assert code == 2
        assert "--method bulk" in err

    def test_site_window(self, run_cli):
        code, _, _ = run_cli("fluct", "--n", 10, "--alpha", 0.02, "--n-max", 11)
        assert code == 2

    @pytest.mark.parametrize("argv", [
        ("fluct", "--n", 10, "--alpha", 0.02, "--n-min", 0),
        ("moessbauer", "--n", 10, "--alpha", 0.02, "--l-min", 0),
    ])
    def test_explicit_zero_window_start(self, run_cli, argv):
        """Site 0 is rejected, not silently replaced by site 1."""
        code, out, err = run_cli(*argv)
        assert code == 2
        assert out == ""
        assert "[0, 10]" in err

    def test_pair_window_guard(self, run_cli):
        code, out, err = run_cli("pairfluct", "--n", 5000, "--alpha", 0.02, "--method", "bulk")
        assert code == 2
        assert out == ""
        assert "--n-min" in err

    def test_out_of_memory(self, run_cli, monkeypatch):
        def exhausted(*args, **kwargs):
            raise MemoryError("Unable to allocate 11.9 GiB")

        monkeypatch.setattr(chain_commands, "pair_variance_window", exhausted)
        code, out, err = run_cli("pairfluct", "--n", 4, "--alpha", 0.02, "--method", "bulk")
        assert code == 1
        assert out == ""
        assert "out of memory" in err
        assert len(err.strip().splitlines()) == 1

    def test_non_finite_values(self, run_cli, monkeypatch):
        """NaN variances are a compute error (exit 1), not a usage error."""
        original = fluctuations.mode_weights

        def broken(params, regime):
            modes, weights = original(params, regime)
            return modes, np.full_like(weights, np.nan)

        monkeypatch.setattr(fluctuations, "mode_weights", broken)
        code, out, err = run_cli("fluct", "--n", 5, "--alpha", 0.02)
        assert code == 1
        assert out == ""
        assert "non-finite variance" in err

    def test_density_without_fluctuations(self, run_cli):
        code, _, _ = run_cli("density", "--n", 10)
        assert code == 2

    def test_bad_worker_setting(self, run_cli, monkeypatch):
        monkeypatch.setenv("HARMONIC_CHAIN_WORKERS", "zero")
        code, _, err = run_cli("sq", "--n", 10, "--alpha", 0.02, "--q-steps", 4)
        assert code == 2
        assert "HARMONIC_CHAIN_WORKERS" in err

    def test_compute_error(self, run_cli, monkeypatch):
        def broken(*args, **kwargs):
            raise ComputeError("non-finite variance")

        monkeypatch.setattr(chain_commands, "fluctuation_profile", broken)
        code, out, err = run_cli("fluct", "--n", 3, "--alpha", 0.02)
        assert code == 1
        assert out == ""
        assert "non-finite variance" in err

    def test_verbose_logs_to_stderr(self, run_cli):
        code, out, err = run_cli("fluct", "--n", 3, "--alpha", 0.02, "--verbose")
        assert code == 0
        assert out.startswith("n,u2_over_a2")
        assert "DEBUG" in err
