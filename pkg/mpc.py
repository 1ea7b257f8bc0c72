"""
mpc.py — Receding-horizon model predictive control baseline.

At stage s MPC solves the window problem

    min  sum_{t=s}^{s+W'-1} f_t(x_t) + beta/2 ||x_t - x_{t-1}||^2 + terminal(x_{s+W'-1})

over X^{W'} with x_{s-1} fixed to the previous decision and W' = min(W, T-s+1),
then plays the first block. The window problem is solved with projected
accelerated descent, warm-started from the previous stage's solution.

Usage:
    python mpc.py --instance instance.json --w 4 --terminal anchor --anchor-weight 0.5
"""

import argparse
import logging
import time
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from cost_model import CostSequence, Trajectory, chain_cost, chain_gradient, load_instance, project
from descent import ConvergenceError, accelerated_projected_descent
from online import InformationGate, StageRecorder

logger = logging.getLogger(__name__)


class Terminal(Enum):
    ZERO = "zero"
    ANCHOR = "anchor"


@dataclass
class MpcConfig:
    """Window length, terminal cost and inner solver settings."""
    W: int = 1
    terminal: Terminal = Terminal.ZERO
    anchor_weight: float = 0.0
    inner_tolerance: float = 1e-9
    inner_max_iters: int = 10000

    def __post_init__(self):
        if self.W < 1:
            raise ValueError(f"MPC needs W >= 1, got {self.W}")
        if isinstance(self.terminal, str):
            self.terminal = Terminal(self.terminal)
        if self.anchor_weight < 0:
            raise ValueError(f"anchor_weight must be >= 0, got {self.anchor_weight}")
        if self.inner_tolerance <= 0:
            raise ValueError(f"inner_tolerance must be positive, got {self.inner_tolerance}")
        if self.inner_max_iters < 1:
            raise ValueError(f"inner_max_iters must be >= 1, got {self.inner_max_iters}")


def run_mpc(seq: CostSequence, cfg: MpcConfig,
            recorder: Optional[StageRecorder] = None) -> Trajectory:
    """
    Run MPC over the whole horizon.

    Raises:
        ConvergenceError: a window problem missed inner_tolerance; carries the residual.
    """
    T, n = seq.T, seq.n
    gate = InformationGate(seq, cfg.W)
    params = seq.class_params
    beta = seq.beta
    points = np.empty((T, n))
    anchor = seq.x0
    warm = np.tile(seq.x0, (min(cfg.W, T), 1))

    for s in range(1, T + 1):
        start = time.perf_counter()
        gate.advance(s)
        last = min(s + cfg.W - 1, T)
        width = last - s + 1
        P, q, c = gate.window_costs(s, last)

        weight = 0.0
        target = None
        if cfg.terminal is Terminal.ANCHOR and last < T and cfg.anchor_weight > 0:
            weight = cfg.anchor_weight
            target = gate.cost(last).minimizer(seq.space)

        def gradient(z, P=P, q=q, anchor=anchor, weight=weight, target=target):
            X = z.reshape(width, n)
            grad = chain_gradient(P, q, beta, anchor, X)
            if weight:
                grad[-1] += 2.0 * weight * (X[-1] - target)
            return grad.ravel()

        def objective(z, P=P, q=q, c=c, anchor=anchor, weight=weight, target=target):
            X = z.reshape(width, n)
            value = float(chain_cost(P, q, c, beta, anchor, X))
            if weight:
                value += weight * float(np.sum((X[-1] - target) ** 2))
            return value

        try:
            result = accelerated_projected_descent(
                gradient=gradient,
                project=lambda z: project(seq.space, z.reshape(width, n)).ravel(),
                x0=warm[:width].ravel(),
                step=1.0 / (params.l + 4.0 * beta + 2.0 * weight),
                strong_convexity=params.alpha,
                tolerance=cfg.inner_tolerance,
                max_iters=cfg.inner_max_iters,
                objective=objective,
            )
        except ConvergenceError as e:
            raise ConvergenceError(f"MPC window problem at stage {s} did not converge",
                                   e.residual, e.iterations) from e
        gate.charge(result.gradient_calls * width)
        logger.debug("MPC stage %d: window %d, %d inner iterations", s, width, result.iterations)

        solution = result.x.reshape(width, n)
        points[s - 1] = solution[0]
        anchor = solution[0]
        # shift; the newly revealed last stage starts from the old last block
        warm = np.vstack([solution[1:], solution[-1:]]) if width > 1 else solution

        if recorder is not None:
            recorder.record(s, time.perf_counter() - start, gate.take_evaluations())

    return Trajectory(points)


def main():
    parser = argparse.ArgumentParser(description="Run MPC on an instance")
    parser.add_argument("--instance", required=True, help="Instance JSON file")
    parser.add_argument("--w", type=int, default=1, help="Prediction window")
    parser.add_argument("--terminal", choices=[t.value for t in Terminal], default="zero")
    parser.add_argument("--anchor-weight", type=float, default=0.0)
    parser.add_argument("--tol", type=float, default=1e-9, help="Inner solver tolerance")
    args = parser.parse_args()

    seq = load_instance(args.instance)
    cfg = MpcConfig(W=args.w, terminal=Terminal(args.terminal),
                    anchor_weight=args.anchor_weight, inner_tolerance=args.tol)
    recorder = StageRecorder(seq.T)
    traj = run_mpc(seq, cfg, recorder)
    print(f"MPC (W={args.w}, terminal={args.terminal}) on {args.instance}")
    print(f"  stages: {len(traj)}")
    print(f"  mean stage time: {recorder.seconds.mean() * 1e3:.3f} ms")
    print(f"  gradient evaluations: {int(recorder.evaluations.sum())}")


if __name__ == "__main__":
    main()
