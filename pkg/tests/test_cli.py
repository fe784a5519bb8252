"""CLI: file outputs, manifests, determinism, and exit codes."""

import json
import math

import numpy as np
import pytest

from chiralrmt import (
    EnsembleParams,
    LimitLaw,
    density,
    empirical_cdf,
    endpoints,
    ks_distance,
    limit_cdf,
    read_draw_archive,
)
from chiralrmt.cli import main


def _read_csv(path):
    data = np.loadtxt(path, delimiter=",", skiprows=1)
    return data[:, 0], data[:, 1]


class TestDensityCommand:
    def test_csv_and_manifest(self, tmp_path):
        out = tmp_path / "h.csv"
        rc = main(
            ["density", "--n", "12", "--mu", "1.5", "--grid=-8:8:161", "--out", str(out)]
        )
        assert rc == 0
        t, h = _read_csv(out)
        assert t.size == 161
        p = EnsembleParams(12, 1.5)
        np.testing.assert_allclose(h, density(p, t), rtol=1e-15)
        manifest = json.loads((tmp_path / "h.csv.manifest.json").read_text())
        assert manifest["schema"] == "chiralrmt/run-manifest-v1"
        assert manifest["command"] == "density"
        assert manifest["parameters"]["n"] == 12
        assert str(out) in manifest["outputs"]

    def test_trapezoid_mass_on_covering_grid(self, tmp_path):
        out = tmp_path / "h.csv"
        upper = EnsembleParams(10, 0.5).support_cutoff()
        rc = main(
            ["density", "--n", "10", "--mu", "0.5", f"--grid=-{upper}:{upper}:4001", "--out", str(out)]
        )
        assert rc == 0
        t, h = _read_csv(out)
        assert np.trapezoid(h, t) == pytest.approx(1.0, abs=1e-3)

    def test_sqrtn_scaling(self, tmp_path):
        out = tmp_path / "hs.csv"
        rc = main(
            ["density", "--n", "9", "--mu", "0", "--grid=-2:2:41", "--scaling", "sqrtn", "--out", str(out)]
        )
        assert rc == 0
        t, h = _read_csv(out)
        p = EnsembleParams(9, 0.0)
        np.testing.assert_allclose(h, 3.0 * density(p, 3.0 * t), rtol=1e-15)

    def test_bad_mu_exit_code(self, tmp_path, capsys):
        rc = main(["density", "--n", "5", "--mu", "-0.7", "--grid=0:1:5", "--out", str(tmp_path / "x.csv")])
        assert rc == 2
        assert "error" in capsys.readouterr().err

    def test_bad_grid_exit_code(self, tmp_path):
        rc = main(["density", "--n", "5", "--mu", "0", "--grid=oops", "--out", str(tmp_path / "x.csv")])
        assert rc == 2


class TestLimitCommand:
    def test_wigner_curve_pointwise(self, tmp_path):
        out = tmp_path / "f0.csv"
        rc = main(["limit", "--c", "0", "--grid=-2.2:2.2:1001", "--out", str(out)])
        assert rc == 0
        t, f = _read_csv(out)
        inside = np.abs(t) <= math.sqrt(2.0)
        ref = np.sqrt(np.maximum(2.0 - t[inside] ** 2, 0.0)) / math.pi
        assert np.max(np.abs(f[inside] - ref)) < 1e-12
        assert np.all(f[~inside] == 0.0)

    @pytest.mark.parametrize("c", [0.1, 1.0])
    def test_support_matches_endpoints(self, tmp_path, c):
        out = tmp_path / "fc.csv"
        rc = main(["limit", "--c", str(c), "--grid=-2.2:2.2:1001", "--out", str(out)])
        assert rc == 0
        t, f = _read_csv(out)
        a, b = endpoints(c)
        spacing = t[1] - t[0]
        support = np.abs(t[f > 0.0])
        assert abs(support.min() - a) <= spacing
        assert abs(support.max() - b) <= spacing

    def test_peak_location_matches_dense_grid_argmax(self, tmp_path):
        # stationarity of f_c: t^4 = (ab)^2 => peak at sqrt(c) for c = 1
        out = tmp_path / "f1.csv"
        rc = main(["limit", "--c", "1", "--grid=0:2.2:22001", "--out", str(out)])
        assert rc == 0
        t, f = _read_csv(out)
        assert t[np.argmax(f)] == pytest.approx(1.0, abs=2e-4)

    def test_negative_c_exit_code(self, tmp_path):
        rc = main(["limit", "--c", "-1", "--grid=0:1:5", "--out", str(tmp_path / "x.csv")])
        assert rc == 2


class TestSampleCommand:
    def test_archive_summary_and_determinism(self, tmp_path):
        out1 = tmp_path / "a.txt"
        out2 = tmp_path / "b.txt"
        args = [
            "sample", "--n", "16", "--mu", "16", "--seed", "11",
            "--sweeps", "2100", "--burn-in", "2000", "--thin", "10",
            "--chains", "3",
        ]
        assert main(args + ["--out", str(out1)]) == 0
        assert main(args + ["--out", str(out2)]) == 0
        assert out1.read_text().splitlines()[2:] == out2.read_text().splitlines()[2:]

        params, draws = read_draw_archive(out1)
        assert params == EnsembleParams(16, 16.0)
        assert len(draws) == 30

        summary = json.loads((tmp_path / "a.txt.summary.json").read_text())
        assert summary["draws"] == 30
        assert 0.0 < summary["acceptance_rate"] < 1.0
        # the KS field must match a recomputation from the archive itself
        law = LimitLaw(1.0)
        ecdf = empirical_cdf(draws, 1.0 / math.sqrt(16))
        ks = ks_distance(ecdf, lambda t: limit_cdf(law, t))
        assert summary["ks_vs_limit"] == pytest.approx(ks, abs=1e-12)
        assert summary["manifest"]["command"] == "sample"
        assert summary["manifest"]["seed"] == 11

    def test_bad_config_exit_code(self, tmp_path):
        rc = main(
            ["sample", "--n", "4", "--mu", "0", "--sweeps", "10", "--burn-in", "50",
             "--out", str(tmp_path / "x.txt")]
        )
        assert rc == 2


class TestVerifyCommand:
    def test_fast_report_consistency(self, tmp_path, capsys):
        out = tmp_path / "report.json"
        rc = main(["verify", "--level", "fast", "--out", str(out)])
        table = capsys.readouterr().out
        report = json.loads(out.read_text())
        assert report["level"] == "fast"
        assert rc == (0 if report["passed"] else 3)
        for check in report["checks"]:
            assert check["id"] in table
        # every fast check other than the known finite-size laplace-limit gap passes
        for check in report["checks"]:
            if check["id"] != "laplace-limit":
                assert check["passed"], f"{check['id']}: {check['detail']}"

    def test_unknown_level_exit_code(self):
        assert main(["verify", "--level", "bogus"]) == 2


class TestParserBasics:
    def test_help_exits_zero(self):
        assert main(["--help"]) == 0

    def test_missing_subcommand(self):
        assert main([]) == 2
