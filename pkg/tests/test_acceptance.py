"""
End-to-end regret checks

Regret bounds, decay with the prediction window, the lower-bound Monte Carlo
and the full dispatch pipeline, each on the instances the CLI runs.
"""

import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from adversary import AdversaryConfig, bound_report, lowerbound_monte_carlo
from cost_model import ActionSpace, isotropic_sequence, path_length, total_cost
from experiment import ExperimentConfig, build_instance, cmd_sweep, cmd_traces, read_trace_csv
from mpc import MpcConfig, run_mpc
from offline import solve
from online import AlgoConfig, StageRecorder, evaluate_regret, run_ogd, run_rhag, run_rhgd
from scenarios import build_special_example


def make_random_instance(seed):
    rng = np.random.default_rng(1000 + seed)
    n = int(rng.integers(1, 4))
    T = int(rng.integers(2, 51))
    space = ActionSpace(lower=-np.ones(n), upper=np.ones(n))
    return isotropic_sequence(rng.uniform(-1.5, 1.5, size=(T, n)),
                              alpha=float(rng.uniform(0.1, 10.0)),
                              beta=float(rng.uniform(0.1, 10.0)),
                              x0=np.zeros(n), space=space)


def regrets_by_window(seq, runner, windows):
    optimum = solve(seq)
    return np.array([evaluate_regret(seq, runner(seq, W), optimum, 1e-10).regret
                     for W in windows])


class TestUpperBounds:
    @pytest.mark.parametrize("seed", range(100))
    def test_measured_regret_below_bounds(self, seed):
        seq = make_random_instance(seed)
        budget = path_length(seq)
        if budget == 0.0:
            pytest.skip("constant minimizers")
        params = seq.class_params
        optimum = solve(seq)
        offline_cost = total_cost(seq, optimum)
        W = seed % 8
        report = bound_report(params.alpha, params.l, seq.beta, params.G,
                              seq.space.diameter, budget, W)

        ogd = total_cost(seq, run_ogd(seq, AlgoConfig())) - offline_cost
        rhgd = total_cost(seq, run_rhgd(seq, AlgoConfig(W=W))) - offline_cost
        rhag = total_cost(seq, run_rhag(seq, AlgoConfig(W=W))) - offline_cost
        assert ogd <= report.ogd_upper + 1e-9
        assert rhgd <= report.rhgd_upper + 1e-9
        assert rhag <= report.rhag_upper + 1e-9


class TestSpecialExample:
    def test_rhgd_regret_decays_exponentially(self):
        seq = build_special_example()
        windows = np.arange(11)
        regrets = regrets_by_window(seq, lambda s, W: run_rhgd(s, AlgoConfig(W=W)), windows)
        assert np.all(regrets > 0.0)

        y = np.log10(regrets)
        slope, intercept = np.polyfit(windows, y, 1)
        fitted = slope * windows + intercept
        r_squared = 1.0 - np.sum((y - fitted) ** 2) / np.sum((y - y.mean()) ** 2)
        assert slope < 0.0
        assert r_squared >= 0.9

        params = seq.class_params
        budget = path_length(seq)
        for W, regret in zip(windows, regrets):
            report = bound_report(params.alpha, params.l, seq.beta, params.G,
                                  seq.space.diameter, budget, int(W))
            assert regret <= report.rhgd_upper

    def test_rhag_and_mpc_reach_one_percent(self):
        seq = build_special_example()
        windows = np.arange(1, 13)
        baseline = regrets_by_window(seq, lambda s, W: run_ogd(s, AlgoConfig()), [0])[0]
        rhag = regrets_by_window(seq, lambda s, W: run_rhag(s, AlgoConfig(W=W)), windows)
        mpc = regrets_by_window(seq, lambda s, W: run_mpc(s, MpcConfig(W=W)), windows)
        for W, a, b in zip(windows, rhag, mpc):
            print(f"W={W:2d}  rhag/mpc regret ratio {a / max(b, 1e-300):.3g}")
        assert np.any(rhag < 0.01 * baseline)
        assert np.any(mpc < 0.01 * baseline)


class TestLowerBoundMonteCarlo:
    def test_segmented_construction(self):
        runners = {
            "ogd": lambda seq, W: run_ogd(seq, AlgoConfig()),
            "rhag": lambda seq, W: run_rhag(seq, AlgoConfig(W=W)),
        }
        for W in (0, 1, 2):
            cfg = AdversaryConfig(T=40, W=W, alpha=1.0, beta=1.0, D=1.0, L_T=10.0, seed=2024)
            for row in lowerbound_monte_carlo(cfg, runners, 1000):
                assert row.passed, (f"{row.algorithm} W={W}: mean {row.mean_regret:.4g} "
                                    f"below {row.bound:.4g} - 3*{row.stderr:.3g}")


class TestDispatchPipeline:
    def test_full_sweep(self, tmp_path):
        cfg = ExperimentConfig(instance="dispatch", algorithms=["rhgd", "rhag", "mpc"],
                               w_values=list(range(11)), output_dir=str(tmp_path))
        seq = build_instance(cfg)
        assert seq.T == 1440 and seq.n == 3

        # --- Sweep ---
        paths = cmd_sweep(cfg, seq)
        assert os.path.exists(paths["csv"])

        # --- Gradient evaluations per stage ---
        for W in (5, 10):
            rhgd_rec, mpc_rec = StageRecorder(seq.T), StageRecorder(seq.T)
            run_rhgd(seq, AlgoConfig(W=W), rhgd_rec)
            run_mpc(seq, MpcConfig(W=W), mpc_rec)
            assert np.all(rhgd_rec.evaluations[:seq.T - W] == W + 1)
            assert np.all(mpc_rec.evaluations >= rhgd_rec.evaluations)
            assert rhgd_rec.evaluations.mean() < mpc_rec.evaluations.mean()

    def test_trace_files_drive_the_instance(self, tmp_path):
        cfg = ExperimentConfig(instance="dispatch", output_dir=str(tmp_path))
        cfg.dispatch.update(T=48)
        paths = cmd_traces(cfg)
        assert len(read_trace_csv(paths["demand"])) == 48

        cfg.dispatch.update(demand_csv=paths["demand"], renewable_csv=paths["wind"])
        from_files = build_instance(cfg)
        cfg.dispatch.update(demand_csv=None, renewable_csv=None)
        synthetic = build_instance(cfg)
        assert np.allclose(from_files.q, synthetic.q, atol=1e-4)


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
