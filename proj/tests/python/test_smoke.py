"""End-to-end smoke tests for the python bindings."""

import json
import math

import numpy as np
import pytest

import rahbo


def test_version():
    assert rahbo.__version__


def test_kernel_round_trip():
    spec = rahbo.KernelSpec("squared_exponential", [1.0])
    assert rahbo.eval_kernel(spec, [0.3], [0.3]) == 1.0
    assert rahbo.eval_kernel(spec, [0.0], [1.0]) == pytest.approx(math.exp(-0.5))
    X = np.array([[0.1], [0.4], [0.9]])
    K = rahbo.kernel_matrix(spec, X)
    assert K.shape == (3, 3)
    assert np.allclose(K, K.T)
    with pytest.raises(ValueError):
        rahbo.KernelSpec("matern52", [-1.0])


def test_gp_posterior_closed_form():
    spec = rahbo.KernelSpec("squared_exponential", [1.0])
    gp = rahbo.HeteroGP(spec, np.array([[0.5]]), np.array([2.0]), np.array([1.0]))
    assert gp.posterior_mean([0.5]) == pytest.approx(1.0)
    assert gp.posterior_var([0.5]) == pytest.approx(0.5)
    assert gp.beta(rahbo.BetaSchedule()) == 2.0


def test_sample_stats_and_eta():
    mean, var = rahbo.sample_stats([1.0, 2.0, 3.0])
    assert mean == pytest.approx(2.0)
    assert var == pytest.approx(1.0)
    assert rahbo.eta_variance_proxy(1.0, 10) == pytest.approx(2.0 / 9.0)


def test_benchmark_surface():
    bench = rahbo.Benchmark("sine")
    assert bench.dim == 1
    assert bench.objective([0.25]) == pytest.approx(1.0)
    assert bench.noise_var([0.25]) == pytest.approx(0.02, abs=1e-3)
    assert bench.mv_optimum(1.0) == pytest.approx(0.98, abs=1e-3)
    samples = bench.sample([0.25], 5, seed=1)
    assert samples == bench.sample([0.25], 5, seed=1)
    design = rahbo.sobol_design(bench, 4, seed=0)
    assert design.shape == (4, 1)
    assert design[0, 0] == pytest.approx(1.0)  # domain midpoint
    assert "branin" in rahbo.benchmark_names()


def test_run_loop_and_reporting():
    kern = rahbo.KernelSpec("matern52", [0.2])
    result = rahbo.run(
        benchmark="sine",
        algorithm="rahbo",
        seed=3,
        alpha=1.0,
        k=4,
        T=4,
        n_init=3,
        kernel_f=kern,
        kernel_var=kern,
        candidate_grid=128,
    )
    assert len(result.trace) == 4
    assert result.sampler_calls == (3 + 4) * 4
    r_cums = [row.r_cum for row in result.trace]
    assert all(b >= a for a, b in zip(r_cums, r_cums[1:]))
    assert all(row.r_inst >= 0.0 for row in result.trace)

    again = rahbo.run(
        benchmark="sine",
        algorithm="rahbo",
        seed=3,
        alpha=1.0,
        k=4,
        T=4,
        n_init=3,
        kernel_f=kern,
        kernel_var=kern,
        candidate_grid=128,
    )
    assert [tuple(row.x) for row in result.trace] == [tuple(row.x) for row in again.trace]

    reported = rahbo.report_point(result, "sine", 1.0, rule="best_observed")
    assert any(np.allclose(reported, row.x) for row in result.trace)


def test_config_validation_and_experiment(tmp_path):
    bad = {"benchmark": "sine", "algorithm": "rahbo", "k": 1, "alpha": -2.0}
    errors = rahbo.validate_config(json.dumps(bad))
    assert any("k:" in e for e in errors)
    assert any("alpha:" in e for e in errors)

    good = {
        "benchmark": "sine",
        "algorithm": "gp_ucb",
        "alpha": 1.0,
        "k": 4,
        "T": 2,
        "n_init": 3,
        "candidate_grid": 64,
        "seeds": [1, 2],
        "output_dir": str(tmp_path / "out"),
    }
    out_dir, config_hash = rahbo.run_experiment(json.dumps(good))
    assert (tmp_path / "out" / "trace_seed1.csv").exists()
    assert (tmp_path / "out" / "aggregate.csv").exists()
    meta = json.loads((tmp_path / "out" / "meta.json").read_text())
    assert meta["config_hash"] == config_hash
    header = (tmp_path / "out" / "trace_seed1.csv").read_text().splitlines()[0]
    assert header.startswith("round,x_0,sample_mean,sample_var,mv_true")
