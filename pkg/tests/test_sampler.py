"""Log-gas sampler: joint density values, determinism, equilibrium
statistics against the exact finite-n density, and the concentration bound."""

import math
import os
import subprocess
import sys

import numpy as np
import pytest
from scipy import special as sps

from chiralrmt import (
    DomainError,
    EnsembleParams,
    LimitLaw,
    SamplerConfig,
    b_n_value,
    concentration_check,
    density,
    empirical_cdf,
    endpoints,
    extreme_stats,
    ks_distance,
    limit_cdf,
    log_joint_density,
    mcmc_sample,
    read_draw_archive,
    write_draw_archive,
)
from chiralrmt.quadrature import gauss_legendre
from chiralrmt.sampler import SpectrumDraw, proposal_step


class TestLogJointDensity:
    def test_single_gaussian_term(self):
        assert log_joint_density(EnsembleParams(1, 0.0), [2.0]) == -4.0

    def test_two_point_hand_expansion(self):
        val = log_joint_density(EnsembleParams(2, 0.0), [-1.0, 1.0])
        assert val == pytest.approx(-2.0 + 2.0 * math.log(2.0), rel=1e-15)

    def test_weight_term(self):
        # n=1, mu=1.5: -x^2 + 3 log|x|
        val = log_joint_density(EnsembleParams(1, 1.5), [0.5])
        assert val == pytest.approx(-0.25 + 3.0 * math.log(0.5), rel=1e-14)

    def test_permutation_invariance(self):
        p = EnsembleParams(6, 1.0)
        rng = np.random.default_rng(0)
        x = rng.normal(size=6) * 2.0
        ref = log_joint_density(p, x)
        for _ in range(4):
            assert log_joint_density(p, rng.permutation(x)) == pytest.approx(ref, rel=1e-12)

    def test_sign_flip_invariance(self):
        p = EnsembleParams(5, 0.7)
        x = np.array([-2.0, -0.5, 0.3, 1.1, 2.4])
        assert log_joint_density(p, -x) == pytest.approx(log_joint_density(p, x), rel=1e-14)

    def test_sentinels(self):
        p = EnsembleParams(3, 1.0)
        assert log_joint_density(p, [0.0, 1.0, 2.0]) == -math.inf
        assert log_joint_density(p, [1.0, 1.0, 2.0]) == -math.inf

    def test_wrong_length_rejected(self):
        with pytest.raises(DomainError):
            log_joint_density(EnsembleParams(3, 0.0), [1.0, 2.0])


class TestBnValue:
    def test_smallest_case(self):
        assert b_n_value(EnsembleParams(1, 0.0)) == pytest.approx(
            math.sqrt(3.0 + math.sqrt(5.0)), rel=1e-15
        )

    def test_limit_is_wigner_edge(self):
        assert b_n_value(EnsembleParams(10**7, 0.0)) == pytest.approx(math.sqrt(2.0), abs=1e-3)

    def test_approaches_deformed_edge(self):
        b = endpoints(1.0)[1]
        assert abs(b_n_value(EnsembleParams(1000, 1000.0)) - b) <= 0.05


class TestSamplerConfig:
    @pytest.mark.parametrize(
        "kwargs",
        [
            {"sweeps": 100, "burn_in": 100},
            {"sweeps": 50, "burn_in": 100},
            {"proposal_scale": 0.0},
            {"chains": 0},
            {"thin": 0},
        ],
    )
    def test_validation(self, kwargs):
        with pytest.raises(DomainError):
            SamplerConfig(**kwargs)

    def test_step_formula(self):
        p = EnsembleParams(50, 50.0)
        cfg = SamplerConfig(proposal_scale=0.4)
        expected = 0.4 * max(1.0, math.sqrt(50 / 2 + 50)) / math.sqrt(50)
        assert proposal_step(p, cfg) == pytest.approx(expected, rel=1e-15)


class TestMcmcSampling:
    def test_deterministic_for_fixed_seed(self):
        p = EnsembleParams(12, 3.0)
        cfg = SamplerConfig(sweeps=2100, burn_in=2000, thin=10, chains=2, seed=99)
        a = mcmc_sample(p, cfg)
        b = mcmc_sample(p, cfg)
        assert len(a) == len(b) == 20
        for da, db in zip(a, b):
            np.testing.assert_array_equal(da.eigenvalues, db.eigenvalues)
            assert da.acceptance_rate == db.acceptance_rate
            assert da.seed_path == db.seed_path

    def test_chains_differ(self):
        p = EnsembleParams(10, 1.0)
        cfg = SamplerConfig(sweeps=2010, burn_in=2000, thin=10, chains=2, seed=5)
        d = mcmc_sample(p, cfg)
        assert not np.array_equal(d[0].eigenvalues, d[1].eigenvalues)

    def test_draws_stay_inside_admissible_set(self):
        p = EnsembleParams(15, 0.2)
        cfg = SamplerConfig(sweeps=2200, burn_in=2000, thin=10, chains=1, seed=1)
        for d in mcmc_sample(p, cfg):
            assert np.all(np.diff(d.eigenvalues) > 0.0)
            assert np.all(d.eigenvalues != 0.0)
            assert math.isfinite(log_joint_density(p, d.eigenvalues))

    def test_acceptance_band_at_reference_point(self):
        p = EnsembleParams(50, 50.0)
        cfg = SamplerConfig(sweeps=2600, burn_in=2000, thin=10, chains=1, seed=7)
        draws = mcmc_sample(p, cfg)
        rate = draws[-1].acceptance_rate
        assert 0.2 < rate < 0.6  # inside the (0.1, 0.7) contract with margin

    def test_one_dimensional_law_is_exact_gaussian(self):
        # n=1, mu=0: stationary density e^{-x^2}/sqrt(pi), CDF (1+erf(x))/2
        p = EnsembleParams(1, 0.0)
        cfg = SamplerConfig(sweeps=500 + 10000 * 20, burn_in=500, thin=20, chains=1, seed=424242)
        draws = mcmc_sample(p, cfg)
        assert len(draws) == 10000
        ecdf = empirical_cdf(draws, 1.0)
        ks = ks_distance(ecdf, lambda t: 0.5 * (1.0 + sps.erf(t)))
        assert ks <= 0.02

    def test_pooled_mean_is_centered(self):
        p = EnsembleParams(20, 2.0)
        cfg = SamplerConfig(sweeps=2000 + 40 * 10, burn_in=2000, thin=10, chains=8, seed=31)
        draws = mcmc_sample(p, cfg)
        per_chain = {}
        for d in draws:
            per_chain.setdefault(d.seed_path, []).append(np.mean(d.eigenvalues))
        means = np.array([np.mean(v) for v in per_chain.values()])
        se = means.std(ddof=1) / math.sqrt(means.size)
        assert abs(means.mean()) <= 3.0 * se + 1e-12

    def test_histogram_matches_exact_density(self):
        # chi^2/dof over 40 bins for 1e5 pooled eigenvalues at n=8, mu=1
        n, mu = 8, 1.0
        p = EnsembleParams(n, mu)
        per_chain = 100000 // n // 8
        cfg = SamplerConfig(
            sweeps=2000 + per_chain * 30, burn_in=2000, thin=30, chains=8, seed=5000
        )
        draws = mcmc_sample(p, cfg)
        pooled = np.concatenate([d.eigenvalues for d in draws])
        assert pooled.size >= 99000
        upper = math.sqrt(2.0 * n + 4.0 * mu)
        edges = np.linspace(-upper, upper, 41)
        counts, _ = np.histogram(pooled, edges)
        xs, ws = gauss_legendre(48)
        lo, hi = edges[:-1], edges[1:]
        mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
        nodes = mid[:, None] + half[:, None] * xs[None, :]
        probs = (density(p, nodes.ravel()).reshape(nodes.shape) * ws[None, :]).sum(axis=1) * half
        expected = pooled.size * probs
        chi2 = float(np.sum((counts - expected) ** 2 / expected))
        assert chi2 / 40.0 <= 1.5

    def test_empirical_cdf_against_limit_law(self):
        # n=50, c=1, >=100 draws pooled: KS below the statistical tolerance
        p = EnsembleParams(50, 50.0)
        cfg = SamplerConfig(sweeps=2000 + 30 * 10, burn_in=2000, thin=10, chains=4, seed=31000)
        draws = mcmc_sample(p, cfg)
        assert len(draws) >= 100
        law = LimitLaw(1.0)
        ecdf = empirical_cdf(draws, 1.0 / math.sqrt(p.n))
        ks = ks_distance(ecdf, lambda t: limit_cdf(law, t))
        assert ks <= 0.05

    def test_thread_pool_matches_serial(self, monkeypatch):
        p = EnsembleParams(6, 1.0)
        cfg = SamplerConfig(sweeps=300, burn_in=250, thin=10, chains=3, seed=55)
        serial = mcmc_sample(p, cfg)
        monkeypatch.setenv("CHIRALRMT_THREADS", "3")
        threaded = mcmc_sample(p, cfg)
        assert len(serial) == len(threaded)
        for a, b in zip(serial, threaded):
            np.testing.assert_array_equal(a.eigenvalues, b.eigenvalues)
            assert a.seed_path == b.seed_path

    def test_empirical_cdf_semantics(self):
        draws = [
            SpectrumDraw(np.array([1.0, 2.0]), 0.5, 10, "0/0"),
            SpectrumDraw(np.array([3.0, 4.0]), 0.5, 20, "0/0"),
        ]
        ecdf = empirical_cdf(draws, 1.0)
        assert ecdf(0.0) == 0.0
        assert ecdf(2.5) == 0.5
        assert ecdf(100.0) == 1.0
        grid = np.linspace(0.0, 5.0, 40)
        assert np.all(np.diff(ecdf(grid)) >= 0.0)


class TestExtremeStats:
    def test_min_is_flipped_max(self):
        p = EnsembleParams(9, 1.0)
        cfg = SamplerConfig(sweeps=2100, burn_in=2000, thin=10, chains=2, seed=21)
        draws = mcmc_sample(p, cfg)
        flipped = [
            SpectrumDraw(np.sort(-d.eigenvalues), d.acceptance_rate, d.sweeps_used, d.seed_path)
            for d in draws
        ]
        direct = extreme_stats(draws, 0.5)
        mirror = extreme_stats(flipped, 0.5)
        assert direct.lambda_min.mean == -mirror.lambda_max.mean
        assert direct.lambda_min.sd == mirror.lambda_max.sd
        assert direct.lambda_min.min == -mirror.lambda_max.max
        assert direct.lambda_min.max == -mirror.lambda_max.min


class TestConcentration:
    def test_huge_epsilon_tail_is_zero(self):
        p = EnsembleParams(10, 10.0)
        cfg = SamplerConfig(sweeps=600, burn_in=500, thin=10, chains=16, seed=2)
        res = concentration_check(p, cfg, "clipped_identity", eps=10.0)
        assert res.empirical_tail == 0.0
        assert res.empirical_tail <= res.bound

    def test_bound_formula_and_monotonicity(self):
        p20 = EnsembleParams(20, 20.0)
        p100 = EnsembleParams(100, 100.0)
        cfg = SamplerConfig(sweeps=600, burn_in=500, thin=10, chains=4, seed=3)
        r20 = concentration_check(p20, cfg, "clipped_identity", eps=0.2)
        r100 = concentration_check(p100, cfg, "clipped_identity", eps=0.2)
        assert r20.bound == pytest.approx(2.0 * math.exp(-20 * 0.04 / 2.0), rel=1e-13)
        assert r100.bound == pytest.approx(2.0 * math.exp(-100 * 0.04 / 2.0), rel=1e-13)
        assert r100.bound < r20.bound  # shrinks with n at fixed eps

    def test_small_run_within_bound(self):
        p = EnsembleParams(20, 20.0)
        cfg = SamplerConfig(sweeps=2010, burn_in=2000, thin=10, chains=32, seed=4)
        res = concentration_check(p, cfg, "clipped_identity", eps=0.2)
        assert res.draws_used == 32
        assert res.empirical_tail <= res.bound + 3.0 * res.binomial_se

    def test_unknown_function_id(self):
        with pytest.raises(DomainError):
            concentration_check(
                EnsembleParams(5, 0.0), SamplerConfig(sweeps=20, burn_in=10), "nope", 0.1
            )


class TestDrawArchive:
    def test_roundtrip(self, tmp_path):
        p = EnsembleParams(7, 1.25)
        cfg = SamplerConfig(sweeps=2050, burn_in=2000, thin=10, chains=2, seed=77)
        draws = mcmc_sample(p, cfg)
        path = tmp_path / "draws.txt"
        write_draw_archive(path, p, draws)
        p2, loaded = read_draw_archive(path)
        assert p2 == p
        assert len(loaded) == len(draws)
        for a, b in zip(draws, loaded):
            np.testing.assert_array_equal(a.eigenvalues, b.eigenvalues)  # %.17g is lossless
            assert a.sweeps_used == b.sweeps_used
            assert a.seed_path == b.seed_path

    def test_empty_archive_rejected(self, tmp_path):
        path = tmp_path / "empty.txt"
        path.write_text("# chiralrmt-draws v1\n")
        with pytest.raises(ValueError):
            read_draw_archive(path)

    def test_row_length_mismatch_rejected(self, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("3,0.5,0/0,10,1.0,2.0\n")
        with pytest.raises(ValueError):
            read_draw_archive(path)


class TestBackendAgreement:
    def test_numpy_fallback_matches_numba_statistically(self, tmp_path):
        """The pure-numpy kernel path reproduces the numba path's draws."""
        script = (
            "import numpy as np\n"
            "import chiralrmt as cr\n"
            "p = cr.EnsembleParams(8, 2.0)\n"
            "cfg = cr.SamplerConfig(sweeps=300, burn_in=250, thin=10, chains=1, seed=13)\n"
            "d = cr.mcmc_sample(p, cfg)\n"
            "np.save(OUT, np.vstack([x.eigenvalues for x in d]))\n"
        )
        results = {}
        for name, extra_env in (("numba", {}), ("numpy", {"CHIRALRMT_NO_NUMBA": "1"})):
            out = tmp_path / f"{name}.npy"
            env = {**os.environ, **extra_env}
            code = script.replace("OUT", repr(str(out)))
            proc = subprocess.run(
                [sys.executable, "-c", code], env=env, capture_output=True, text=True
            )
            assert proc.returncode == 0, proc.stderr
            results[name] = np.load(out)
        # identical streams and identical arithmetic graphs; summation order may
        # differ in the last ulp, so compare with a tight tolerance
        np.testing.assert_allclose(results["numba"], results["numpy"], rtol=1e-9, atol=1e-9)
