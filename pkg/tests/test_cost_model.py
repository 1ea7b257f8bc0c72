"""
Tests for cost_model.py

Verifies:
1. Action spaces validate bounds and project by clamping
2. Stage costs validate curvature and report exact constants
3. Class parameters are inferred or checked at construction
4. Total cost and partial gradients agree with finite differences
5. Instances survive a JSON save/load
"""

import json
import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from cost_model import (ActionSpace, CostSequence, FunctionClassParams, QuadraticStageCost,
                        Trajectory, isotropic_sequence, load_instance, partial_gradient,
                        path_length, project, save_instance, smoothness_params,
                        stacked_gradient, total_cost)


def make_random_instance(T=4, n=2, seed=0, beta=1.5):
    """Non-isotropic quadratics on [-1, 2]^n."""
    rng = np.random.default_rng(seed)
    costs = []
    for _ in range(T):
        M = rng.standard_normal((n, n))
        costs.append(QuadraticStageCost(P=M @ M.T + 0.5 * np.eye(n), q=rng.standard_normal(n),
                                        c=float(rng.standard_normal())))
    space = ActionSpace(lower=-np.ones(n), upper=2.0 * np.ones(n))
    return CostSequence(costs=costs, beta=beta, x0=np.zeros(n), space=space)


class TestActionSpace:
    def test_interval(self):
        space = ActionSpace.interval(0.0, 4.0)
        assert space.dim == 1
        assert space.diameter == pytest.approx(4.0)
        assert space.center[0] == pytest.approx(2.0)

    def test_box_diameter(self):
        space = ActionSpace(lower=[0.0, 0.0], upper=[3.0, 4.0])
        assert space.diameter == pytest.approx(5.0)
        assert len(list(space.vertices())) == 4

    def test_rejects_inverted_bounds(self):
        with pytest.raises(ValueError, match="exceed"):
            ActionSpace(lower=[1.0], upper=[0.0])

    def test_rejects_degenerate_box(self):
        with pytest.raises(ValueError, match="diameter"):
            ActionSpace(lower=[1.0], upper=[1.0])

    def test_rejects_infinite_box(self):
        with pytest.raises(ValueError):
            ActionSpace(lower=[0.0], upper=[np.inf])

    def test_project_clamps(self):
        space = ActionSpace(lower=[0.0, -1.0], upper=[1.0, 1.0])
        assert np.array_equal(project(space, [2.0, -3.0]), [1.0, -1.0])
        assert np.array_equal(project(space, [0.5, 0.5]), [0.5, 0.5])

    def test_project_idempotent(self):
        space = ActionSpace(lower=[-1.0, -1.0], upper=[1.0, 1.0])
        p = project(space, [5.0, -0.3])
        assert np.array_equal(project(space, p), p)

    def test_project_dimension_mismatch(self):
        space = ActionSpace.interval(0.0, 1.0)
        with pytest.raises(ValueError, match="dimension"):
            project(space, [0.1, 0.2])


class TestQuadraticStageCost:
    def test_rejects_asymmetric(self):
        with pytest.raises(ValueError, match="symmetric"):
            QuadraticStageCost(P=[[1.0, 1.0], [0.0, 1.0]], q=[0.0, 0.0])

    def test_rejects_indefinite(self):
        with pytest.raises(ValueError, match="positive definite"):
            QuadraticStageCost(P=[[1.0, 0.0], [0.0, -1.0]], q=[0.0, 0.0])

    def test_isotropic_constants(self):
        cost = QuadraticStageCost.isotropic(2.0, [1.0, -1.0])
        assert cost.strong_convexity == pytest.approx(2.0)
        assert cost.smoothness == pytest.approx(2.0)
        assert cost.value([1.0, -1.0]) == pytest.approx(0.0)
        assert cost.value([2.0, -1.0]) == pytest.approx(1.0)

    def test_isotropic_minimizer_is_clamped_theta(self):
        cost = QuadraticStageCost.isotropic(1.0, [3.0])
        assert cost.minimizer(ActionSpace.interval(0.0, 2.0))[0] == 2.0

    def test_non_diagonal_minimizer_on_boundary(self):
        # unconstrained optimum (2, 2) lies outside [0, 1]^2
        P = np.array([[2.0, 1.0], [1.0, 2.0]])
        cost = QuadraticStageCost(P=P, q=-P @ np.array([2.0, 2.0]))
        x = cost.minimizer(ActionSpace(lower=[0.0, 0.0], upper=[1.0, 1.0]))
        assert np.allclose(x, [1.0, 1.0], atol=1e-9)

    def test_non_diagonal_minimizer_in_interior(self):
        P = np.array([[2.0, 1.0], [1.0, 2.0]])
        cost = QuadraticStageCost(P=P, q=-P @ np.array([0.3, 0.6]))
        x = cost.minimizer(ActionSpace(lower=[0.0, 0.0], upper=[1.0, 1.0]))
        assert np.allclose(x, [0.3, 0.6], atol=1e-12)

    def test_gradient_bound_by_vertices(self):
        cost = QuadraticStageCost.isotropic(1.0, [0.0])
        assert cost.gradient_bound(ActionSpace.interval(-1.0, 3.0)) == pytest.approx(3.0)


class TestFunctionClassParams:
    def test_rejects_l_below_alpha(self):
        with pytest.raises(ValueError):
            FunctionClassParams(alpha=2.0, l=1.0, G=1.0)

    def test_inferred_on_sequence(self):
        seq = isotropic_sequence([0.0, 1.0, 2.0], alpha=1.0, beta=1.0, x0=0.0,
                                 space=ActionSpace.interval(0.0, 4.0))
        assert seq.class_params.alpha == pytest.approx(1.0)
        assert seq.class_params.l == pytest.approx(1.0)
        # |x - theta| over [0, 4] peaks at 4 for theta = 0
        assert seq.class_params.G == pytest.approx(4.0)

    def test_declared_params_are_checked(self):
        with pytest.raises(ValueError, match="gradient bound"):
            isotropic_sequence([0.0], alpha=1.0, beta=1.0, x0=0.0,
                               space=ActionSpace.interval(0.0, 4.0),
                               class_params=FunctionClassParams(alpha=1.0, l=1.0, G=1.0))


class TestCostSequence:
    def test_rejects_empty(self):
        with pytest.raises(ValueError, match="T >= 1"):
            CostSequence(costs=[], beta=1.0, x0=[0.0], space=ActionSpace.interval(0.0, 1.0))

    def test_rejects_negative_beta(self):
        with pytest.raises(ValueError, match="beta"):
            isotropic_sequence([0.0], 1.0, -1.0, 0.0, ActionSpace.interval(0.0, 1.0))

    def test_rejects_x0_outside(self):
        with pytest.raises(ValueError, match="outside"):
            isotropic_sequence([0.0], 1.0, 1.0, 5.0, ActionSpace.interval(0.0, 1.0))

    def test_rejects_dimension_mismatch(self):
        costs = [QuadraticStageCost.isotropic(1.0, [0.0, 0.0])]
        with pytest.raises(ValueError, match="dimension"):
            CostSequence(costs=costs, beta=1.0, x0=[0.0], space=ActionSpace.interval(0.0, 1.0))

    def test_smoothness_params(self):
        seq = isotropic_sequence(np.zeros(16), 1.0, 13.0, 0.0, ActionSpace.interval(0.0, 4.0))
        L, Q_f = smoothness_params(seq)
        assert L == pytest.approx(53.0)
        assert Q_f == pytest.approx(53.0)

    def test_path_length_starts_at_x0(self):
        seq = isotropic_sequence([1.0, 1.0, 3.0, 2.0], 1.0, 1.0, 0.0,
                                 ActionSpace.interval(0.0, 4.0))
        assert path_length(seq) == pytest.approx(1.0 + 0.0 + 2.0 + 1.0)

    def test_trajectory_one_based(self):
        traj = Trajectory(np.array([1.0, 2.0, 3.0]))
        assert len(traj) == 3
        assert traj[1][0] == 1.0
        assert traj[3][0] == 3.0
        with pytest.raises(IndexError):
            traj[0]


class TestTotalCost:
    def test_hand_computed(self):
        seq = isotropic_sequence([1.0, 1.0], 1.0, 1.0, 0.0, ActionSpace.interval(-2.0, 2.0))
        # stage: 0.5*(0.5-1)^2 + 0.5*(1-1)^2; switching: 0.5*0.25 + 0.5*0.25
        assert total_cost(seq, Trajectory([0.5, 1.0])) == pytest.approx(0.125 + 0.25)

    def test_shape_mismatch(self):
        seq = isotropic_sequence([1.0, 1.0], 1.0, 1.0, 0.0, ActionSpace.interval(-2.0, 2.0))
        with pytest.raises(ValueError, match="shape"):
            total_cost(seq, Trajectory([0.5, 1.0, 1.0]))

    def test_partial_gradient_out_of_range(self):
        seq = make_random_instance()
        with pytest.raises(ValueError, match="out of range"):
            partial_gradient(seq, 0, seq.x0, seq.x0, seq.x0)
        with pytest.raises(ValueError, match="out of range"):
            partial_gradient(seq, seq.T + 1, seq.x0, seq.x0, seq.x0)

    @pytest.mark.parametrize("seed", range(20))
    def test_partial_gradient_matches_finite_differences(self, seed):
        seq = make_random_instance(T=4, n=2, seed=seed)
        rng = np.random.default_rng(100 + seed)
        X = rng.uniform(-1.0, 2.0, size=(seq.T, seq.n))
        h = 1e-5
        for t in range(1, seq.T + 1):
            prev = X[t - 2] if t > 1 else seq.x0
            nxt = X[t] if t < seq.T else X[t - 1]
            analytic = partial_gradient(seq, t, prev, X[t - 1], nxt)
            numeric = np.empty(seq.n)
            for i in range(seq.n):
                plus, minus = X.copy(), X.copy()
                plus[t - 1, i] += h
                minus[t - 1, i] -= h
                numeric[i] = (total_cost(seq, plus) - total_cost(seq, minus)) / (2 * h)
            scale = max(np.linalg.norm(numeric), 1.0)
            assert np.linalg.norm(analytic - numeric) / scale <= 1e-6

    def test_stacked_gradient_matches_partials(self):
        seq = make_random_instance(T=5, n=3, seed=7)
        X = np.random.default_rng(1).uniform(-1.0, 2.0, size=(5, 3))
        G = stacked_gradient(seq, X)
        for t in range(1, 6):
            prev = X[t - 2] if t > 1 else seq.x0
            nxt = X[t] if t < 5 else X[t - 1]
            assert np.allclose(G[t - 1], partial_gradient(seq, t, prev, X[t - 1], nxt))

    @pytest.mark.parametrize("seed", range(20))
    def test_total_cost_strongly_convex(self, seed):
        seq = make_random_instance(T=6, n=3, seed=seed, beta=2.0)
        alpha = seq.class_params.alpha
        rng = np.random.default_rng(500 + seed)
        for _ in range(10):
            U = rng.uniform(-3.0, 3.0, size=(seq.T, seq.n))
            V = rng.uniform(-3.0, 3.0, size=(seq.T, seq.n))
            lhs = total_cost(seq, V)
            rhs = (total_cost(seq, U) + float(np.sum(stacked_gradient(seq, U) * (V - U)))
                   + 0.5 * alpha * float(np.sum((V - U) ** 2)))
            assert lhs >= rhs - 1e-9 * max(1.0, abs(lhs))


class TestInstanceFiles:
    def test_isotropic_compact_form(self, tmp_path):
        seq = isotropic_sequence([0.0, 4.0], 1.0, 13.0, 0.0, ActionSpace.interval(0.0, 4.0))
        path = save_instance(seq, str(tmp_path / "special.json"))
        with open(path) as f:
            doc = json.load(f)
        assert "thetas" in doc and "costs" not in doc
        loaded = load_instance(path)
        assert np.array_equal(loaded.thetas(), seq.thetas())
        assert loaded.beta == seq.beta

    def test_general_form(self, tmp_path):
        seq = make_random_instance(T=3, n=2)
        loaded = load_instance(save_instance(seq, str(tmp_path / "general.json")))
        assert not loaded.is_isotropic
        X = np.full((3, 2), 0.5)
        assert total_cost(loaded, X) == pytest.approx(total_cost(seq, X), rel=1e-12)

    def test_missing_file(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            load_instance(str(tmp_path / "nope.json"))

    def test_invalid_json(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        with pytest.raises(ValueError, match="not valid JSON"):
            load_instance(str(path))

    def test_missing_key(self, tmp_path):
        path = tmp_path / "partial.json"
        path.write_text(json.dumps({"beta": 1.0}))
        with pytest.raises(ValueError, match="missing key"):
            load_instance(str(path))

    def test_declared_T_mismatch(self, tmp_path):
        seq = isotropic_sequence([0.0, 1.0], 1.0, 1.0, 0.0, ActionSpace.interval(0.0, 1.0))
        doc = seq.to_dict()
        doc["T"] = 3
        path = tmp_path / "mismatch.json"
        path.write_text(json.dumps(doc))
        with pytest.raises(ValueError, match="Declared T"):
            load_instance(str(path))


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
