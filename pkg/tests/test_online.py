"""
Tests for online.py

Verifies:
1. OGD follows the projected gradient recursion from x_1 = x_0
2. RHGD and RHAG reproduce offline GD / NAG iterates started at OGD, exactly
3. W = 0 reduces both receding-horizon algorithms to OGD
4. The information gate rejects reads outside the prediction window
5. Gradient evaluations per stage: W + 1 for RHGD on full windows
6. Regret records flag an offline oracle that is beaten
7. OGD movement is bounded by the path length; RHGD never costs more than OGD
8. W > T behaves as W = T
"""

import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from cost_model import (ActionSpace, CostSequence, QuadraticStageCost, Trajectory, isotropic_sequence,
                        path_length, total_cost)
from descent import ConvergenceError
from offline import solve
from online import (AlgoConfig, HorizonBuffer, InformationGate, InformationLeakError,
                    StageRecorder, evaluate_regret, offline_gd_iterates, offline_nag_iterates,
                    run_follow_minimizer, run_ogd, run_rhag, run_rhgd)
from scenarios import build_special_example


def make_random_instance(seed):
    """Isotropic instance with n in {1,2,3}, T <= 50, alpha and beta in [0.1, 10]."""
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 4))
    T = int(rng.integers(2, 51))
    alpha = float(rng.uniform(0.1, 10.0))
    beta = float(rng.uniform(0.1, 10.0))
    space = ActionSpace(lower=-np.ones(n), upper=np.ones(n))
    # some thetas outside the box so projections are active
    thetas = rng.uniform(-1.5, 1.5, size=(T, n))
    return isotropic_sequence(thetas, alpha, beta, x0=np.zeros(n), space=space)


def make_two_stage():
    return isotropic_sequence([1.0, 1.0], 1.0, 1.0, 0.0, ActionSpace.interval(-2.0, 2.0))


def make_general_instance(seed):
    """Non-isotropic quadratics with alpha < l on [-1, 1]^n."""
    rng = np.random.default_rng(300 + seed)
    n = int(rng.integers(1, 4))
    T = int(rng.integers(2, 31))
    costs = []
    for _ in range(T):
        M = rng.standard_normal((n, n))
        costs.append(QuadraticStageCost(P=M @ M.T + 0.5 * np.eye(n), q=2.0 * rng.standard_normal(n)))
    space = ActionSpace(lower=-np.ones(n), upper=np.ones(n))
    return CostSequence(costs=costs, beta=float(rng.uniform(0.1, 5.0)), x0=np.zeros(n),
                        space=space)


class TestOGD:
    def test_first_action_is_x0(self):
        seq = make_two_stage()
        traj = run_ogd(seq, AlgoConfig())
        assert traj[1][0] == 0.0

    def test_hand_step(self):
        # f(x) = (x - 1)^2, l = 2, gamma = 0.5: x_2 = 0 - 0.5 * (-2) = 1
        cost = QuadraticStageCost(P=[[2.0]], q=[-2.0], c=1.0)
        seq = CostSequence(costs=[cost, cost], beta=1.0, x0=[0.0],
                           space=ActionSpace.interval(-5.0, 5.0))
        traj = run_ogd(seq, AlgoConfig(gamma=0.5))
        assert traj[2][0] == pytest.approx(1.0)

    def test_alpha_equals_l_jumps_to_projected_theta(self):
        seq = make_random_instance(3)
        traj = run_ogd(seq, AlgoConfig())
        thetas = np.clip(seq.thetas(), -1.0, 1.0)
        assert np.allclose(traj.points[1:], thetas[:-1], atol=1e-12)


class TestEquivalence:
    @pytest.mark.parametrize("seed", range(50))
    def test_rhgd_matches_offline_gd(self, seed):
        seq = make_random_instance(seed)
        W = seed % 11
        ogd = run_ogd(seq, AlgoConfig())
        online = run_rhgd(seq, AlgoConfig(W=W))
        offline = offline_gd_iterates(seq, ogd, min(W, seq.T))
        assert np.max(np.abs(online.points - offline.points)) <= 1e-12

    @pytest.mark.parametrize("seed", range(50))
    def test_rhag_matches_offline_nag(self, seed):
        seq = make_random_instance(seed)
        W = seed % 11
        ogd = run_ogd(seq, AlgoConfig())
        online = run_rhag(seq, AlgoConfig(W=W))
        offline = offline_nag_iterates(seq, ogd, min(W, seq.T))
        assert np.max(np.abs(online.points - offline.points)) <= 1e-12

    @pytest.mark.parametrize("seed", range(50))
    def test_w0_reduces_to_ogd(self, seed):
        seq = make_random_instance(seed)
        ogd = run_ogd(seq, AlgoConfig())
        assert np.array_equal(run_rhgd(seq, AlgoConfig(W=0)).points, ogd.points)
        assert np.array_equal(run_rhag(seq, AlgoConfig(W=0)).points, ogd.points)

    def test_special_example_w2(self):
        seq = build_special_example()
        ogd = run_ogd(seq, AlgoConfig())
        online = run_rhgd(seq, AlgoConfig(W=2))
        offline = offline_gd_iterates(seq, ogd, 2)
        assert np.array_equal(online.points, offline.points)

    def test_window_longer_than_horizon(self):
        seq = make_two_stage()
        capped = run_rhgd(seq, AlgoConfig(W=2))
        assert np.array_equal(run_rhgd(seq, AlgoConfig(W=5)).points, capped.points)
        assert np.array_equal(run_rhag(seq, AlgoConfig(W=5)).points,
                              run_rhag(seq, AlgoConfig(W=2)).points)

    def test_window_longer_than_horizon_three_stages(self):
        seq = isotropic_sequence([1.0, -1.0, 1.0], 1.0, 1.0, 0.0, ActionSpace.interval(-2.0, 2.0))
        assert np.array_equal(run_rhgd(seq, AlgoConfig(W=20)).points,
                              run_rhgd(seq, AlgoConfig(W=3)).points)


class TestOfflineIterates:
    def test_zero_iterations_returns_init(self):
        seq = make_two_stage()
        init = Trajectory([0.3, -0.2])
        assert np.array_equal(offline_gd_iterates(seq, init, 0).points, init.points)
        assert np.array_equal(offline_nag_iterates(seq, init, 0).points, init.points)

    def test_negative_iterations(self):
        with pytest.raises(ValueError):
            offline_gd_iterates(make_two_stage(), Trajectory([0.0, 0.0]), -1)

    def test_gd_converges_to_optimum(self):
        seq = make_two_stage()
        traj = offline_gd_iterates(seq, Trajectory([0.0, 0.0]), 200)
        assert np.allclose(traj.points.ravel(), [0.6, 0.8], atol=1e-8)

    def test_nag_needs_fewer_iterations_than_gd(self):
        seq = make_two_stage()
        target = np.array([0.6, 0.8])

        def iterations_to_converge(step_fn):
            for k in range(1, 500):
                if np.max(np.abs(step_fn(k).points.ravel() - target)) <= 1e-8:
                    return k
            return None

        init = Trajectory([0.0, 0.0])
        k_gd = iterations_to_converge(lambda k: offline_gd_iterates(seq, init, k))
        k_nag = iterations_to_converge(lambda k: offline_nag_iterates(seq, init, k))
        assert k_gd is not None and k_nag is not None
        assert k_nag < k_gd


class TestInformationGate:
    def test_window_limits(self):
        seq = build_special_example()
        gate = InformationGate(seq, 3)
        gate.advance(5)
        assert gate.horizon == 7
        gate.cost(7)
        with pytest.raises(InformationLeakError):
            gate.cost(8)
        with pytest.raises(InformationLeakError):
            gate.window_costs(5, 8)

    def test_w0_sees_only_the_past(self):
        gate = InformationGate(build_special_example(), 0)
        gate.advance(1)
        with pytest.raises(InformationLeakError):
            gate.gradient(1, np.zeros(1))

    def test_horizon_capped_at_T(self):
        gate = InformationGate(build_special_example(), 10)
        gate.advance(16)
        assert gate.horizon == 16

    def test_window_capped_at_T(self):
        assert InformationGate(make_two_stage(), 9).window == 2

    def test_counts_evaluations(self):
        gate = InformationGate(build_special_example(), 2)
        gate.advance(1)
        gate.gradient(1, np.zeros(1))
        gate.partial_gradient(2, np.zeros(1), np.zeros(1), np.zeros(1))
        gate.charge(3)
        assert gate.take_evaluations() == 5
        assert gate.take_evaluations() == 0


class TestHorizonBuffer:
    def test_slot_zero_is_x0(self):
        buf = HorizonBuffer(np.array([2.0]))
        assert buf.current(0)[0] == 2.0
        assert buf.previous(0)[0] == 2.0

    def test_update_keeps_previous(self):
        buf = HorizonBuffer(np.zeros(1))
        buf.initialize(1, np.array([1.0]))
        buf.update(1, np.array([2.0]))
        assert buf.current(1)[0] == 2.0
        assert buf.previous(1)[0] == 1.0

    def test_double_initialize(self):
        buf = HorizonBuffer(np.zeros(1))
        buf.initialize(1, np.zeros(1))
        with pytest.raises(RuntimeError):
            buf.initialize(1, np.zeros(1))

    def test_retired_slot(self):
        buf = HorizonBuffer(np.zeros(1))
        buf.initialize(1, np.zeros(1))
        buf.retire(1)
        assert 1 not in buf
        with pytest.raises(RuntimeError):
            buf.current(1)


class TestEvaluationCounts:
    @pytest.mark.parametrize("W", [1, 3, 5])
    def test_rhgd_uses_w_plus_one(self, W):
        seq = build_special_example()
        recorder = StageRecorder(seq.T)
        run_rhgd(seq, AlgoConfig(W=W), recorder)
        # full windows: stages whose head s+W is still inside the horizon
        full = recorder.evaluations[:seq.T - W]
        assert np.all(full == W + 1)
        assert np.all(recorder.evaluations <= W + 1)

    def test_ogd_one_per_stage(self):
        seq = build_special_example()
        recorder = StageRecorder(seq.T)
        run_ogd(seq, AlgoConfig(), recorder)
        assert recorder.evaluations[0] == 0
        assert np.all(recorder.evaluations[1:] == 1)

    def test_warmup_is_recorded_separately(self):
        seq = build_special_example()
        recorder = StageRecorder(seq.T)
        run_rhgd(seq, AlgoConfig(W=3), recorder)
        assert recorder.warmup_evaluations > 0


class TestAlgoConfig:
    def test_defaults(self):
        gamma, eta, lam = AlgoConfig().stepsizes(build_special_example())
        assert gamma == pytest.approx(1.0)
        assert eta == pytest.approx(1.0 / 53.0)
        assert lam == pytest.approx((np.sqrt(53.0) - 1.0) / (np.sqrt(53.0) + 1.0))

    def test_rejects_negative_window(self):
        with pytest.raises(ValueError):
            AlgoConfig(W=-1)

    def test_rejects_bad_momentum(self):
        with pytest.raises(ValueError):
            AlgoConfig(momentum=1.0)


class TestFollowMinimizer:
    def test_plays_projected_theta(self):
        seq = make_random_instance(11)
        traj = run_follow_minimizer(seq, 1)
        assert np.array_equal(traj.points, np.clip(seq.thetas(), -1.0, 1.0))

    def test_needs_window(self):
        with pytest.raises(ValueError):
            run_follow_minimizer(make_two_stage(), 0)

    @pytest.mark.parametrize("seed", range(10))
    def test_regret_below_switching_of_minimizers(self, seed):
        seq = make_random_instance(seed)
        record = evaluate_regret(seq, run_follow_minimizer(seq, 1), solve(seq), 1e-10)
        minimizers = np.vstack([seq.x0, seq.stage_minimizers()])
        switching = 0.5 * seq.beta * np.sum(np.diff(minimizers, axis=0) ** 2)
        assert record.regret <= switching + 1e-8


class TestMovement:
    @pytest.mark.parametrize("seed", range(20))
    def test_ogd_movement_bounded_by_path_length(self, seed):
        for seq in (make_random_instance(seed), make_general_instance(seed)):
            params = seq.class_params
            X = np.vstack([seq.x0, run_ogd(seq, AlgoConfig()).points])
            movement = float(np.sum(np.diff(X, axis=0) ** 2))
            kappa = np.sqrt(1.0 - params.alpha / params.l)
            bound = 2.0 * params.G / (params.l * (1.0 - kappa)) * path_length(seq)
            assert movement <= bound + 1e-8

    @pytest.mark.parametrize("seed", range(20))
    def test_rhgd_never_costs_more_than_ogd(self, seed):
        for seq in (make_random_instance(seed), make_general_instance(seed)):
            ogd_cost = total_cost(seq, run_ogd(seq, AlgoConfig()))
            for W in (1, 2, 5):
                rhgd_cost = total_cost(seq, run_rhgd(seq, AlgoConfig(W=W)))
                assert rhgd_cost <= ogd_cost + 1e-9 * max(1.0, abs(ogd_cost))


class TestRegret:
    def test_regret_nonnegative(self):
        seq = build_special_example()
        optimum = solve(seq)
        record = evaluate_regret(seq, run_rhag(seq, AlgoConfig(W=3)), optimum, 1e-10)
        assert record.regret >= -1e-8
        assert record.regret == pytest.approx(record.online_cost - record.offline_cost)

    def test_optimum_has_zero_regret(self):
        seq = build_special_example()
        optimum = solve(seq)
        assert evaluate_regret(seq, optimum, optimum, 1e-10).regret == 0.0

    def test_beaten_oracle_raises(self):
        seq = make_two_stage()
        bad_offline = Trajectory([2.0, -2.0])
        with pytest.raises(ConvergenceError):
            evaluate_regret(seq, Trajectory([0.6, 0.8]), bad_offline, 1e-10)


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
