"""
offline.py — Hindsight-optimal trajectories and the inverse tridiagonal matrix.

For isotropic costs (alpha/2)||x - theta_t||^2 the optimum solves, per
coordinate, the tridiagonal system H x = theta + (beta/alpha) x_0 e_1 with

    H = tridiag(-beta/alpha, 1 + 2 beta/alpha, -beta/alpha),  H[T,T] = 1 + beta/alpha

and its inverse A = H^-1 has closed-form entries a_{t,s} = (alpha/beta) u_t v_s
(t <= s). General quadratic instances are solved iteratively with projected
accelerated descent.

Usage:
    python offline.py --instance instance.json --tol 1e-10
    python offline.py --matrix --alpha 1 --beta 1 --T 20 --output A.csv
"""

import argparse
import csv
import logging
import os
from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_banded

from cost_model import (CostSequence, Trajectory, chain_cost, load_instance, project,
                        smoothness_params, stacked_gradient, total_cost)
from descent import accelerated_projected_descent

logger = logging.getLogger(__name__)

MAX_GRID_POINTS = 10_000_000
GRID_CHUNK = 1 << 16


@dataclass(frozen=True)
class TridiagonalSystem:
    """The matrix H of the scalar isotropic offline problem."""
    alpha: float
    beta: float
    T: int

    def __post_init__(self):
        if self.alpha <= 0:
            raise ValueError(f"alpha must be positive, got {self.alpha}")
        if self.beta < 0:
            raise ValueError(f"beta must be >= 0, got {self.beta}")
        if self.T < 1:
            raise ValueError(f"T must be >= 1, got {self.T}")

    @property
    def dim(self) -> int:
        return self.T

    @property
    def diag_interior(self) -> float:
        return 1.0 + 2.0 * self.beta / self.alpha

    @property
    def diag_last(self) -> float:
        return 1.0 + self.beta / self.alpha

    @property
    def offdiag(self) -> float:
        return -self.beta / self.alpha

    def banded(self) -> np.ndarray:
        """(3, T) layout for scipy.linalg.solve_banded with (l, u) = (1, 1)."""
        ab = np.zeros((3, self.T))
        ab[0, 1:] = self.offdiag
        ab[1, :] = self.diag_interior
        ab[1, -1] = self.diag_last
        ab[2, :-1] = self.offdiag
        return ab

    def dense(self) -> np.ndarray:
        H = np.diag(np.full(self.T, self.diag_interior))
        H[-1, -1] = self.diag_last
        idx = np.arange(self.T - 1)
        H[idx, idx + 1] = self.offdiag
        H[idx + 1, idx] = self.offdiag
        return H

    def solve(self, rhs: np.ndarray) -> np.ndarray:
        return solve_banded((1, 1), self.banded(), rhs)


def solve_offline(seq: CostSequence, tolerance: float = 1e-10,
                  max_iters: int = 200000) -> Trajectory:
    """
    Projected accelerated descent on the stacked total cost.

    Warm-started from the stage minimizers. The returned trajectory has
    gradient-mapping norm <= tolerance, so its cost is within
    tolerance^2 / (2 alpha) of the optimum.

    Raises:
        ConvergenceError: tolerance not reached within max_iters.
    """
    if tolerance <= 0:
        raise ValueError(f"tolerance must be positive, got {tolerance}")
    L, _ = smoothness_params(seq)
    shape = (seq.T, seq.n)
    result = accelerated_projected_descent(
        gradient=lambda z: stacked_gradient(seq, z.reshape(shape)).ravel(),
        project=lambda z: project(seq.space, z.reshape(shape)).ravel(),
        x0=seq.stage_minimizers().ravel(),
        step=1.0 / L,
        strong_convexity=seq.class_params.alpha,
        tolerance=tolerance,
        max_iters=max_iters,
        objective=lambda z: total_cost(seq, z.reshape(shape)),
    )
    logger.debug("Offline solve: %d iterations, residual %.3e",
                 result.iterations, result.residual)
    return Trajectory(result.x.reshape(shape))


def solve_isotropic_closed_form(seq: CostSequence) -> Trajectory:
    """
    Exact optimum of an isotropic instance via the tridiagonal system.

    Every theta_t must lie in X; the solution is then a convex combination of
    the thetas and x_0 and stays in X without projection.
    """
    if not seq.is_isotropic:
        raise ValueError("Closed-form solve needs isotropic costs with a common alpha")
    thetas = seq.thetas()
    for t, theta in enumerate(thetas, start=1):
        if not seq.space.contains(theta):
            raise ValueError(f"theta_{t}={theta} lies outside the action space")
    alpha = seq.class_params.alpha
    system = TridiagonalSystem(alpha, seq.beta, seq.T)
    rhs = thetas.copy()
    rhs[0] += (seq.beta / alpha) * seq.x0
    X = system.solve(rhs)

    tol = 1e-9 * max(1.0, seq.space.diameter)
    if not all(seq.space.contains(x, tol) for x in X):
        raise RuntimeError("Closed-form optimum left the action space")
    return Trajectory(project(seq.space, X))


def solve(seq: CostSequence, tolerance: float = 1e-10, max_iters: int = 200000) -> Trajectory:
    """Closed form when the instance allows it, iterative otherwise."""
    if seq.is_isotropic and all(seq.space.contains(theta) for theta in seq.thetas()):
        return solve_isotropic_closed_form(seq)
    return solve_offline(seq, tolerance, max_iters)


# ---------------------------------------------------------------------------
# Closed-form inverse A = H^-1
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class InverseEntryParams:
    """
    Closed-form pieces of A = H^-1.

    u_t and v_t grow and shrink like rho^-t and rho^t, so both are kept as
    logarithms; `u`, `v` exponentiate on demand (overflowing to inf for long
    horizons). Entries are recombined in log space by `entry` and `matrix`.
    """
    alpha: float
    beta: float
    T: int
    rho: float
    xi_mat: float
    c3: float
    c4: float
    log_u: np.ndarray
    log_v: np.ndarray

    @property
    def Q_f(self) -> float:
        return (self.alpha + 4.0 * self.beta) / self.alpha

    @property
    def u(self) -> np.ndarray:
        with np.errstate(over="ignore"):
            return np.exp(self.log_u)

    @property
    def v(self) -> np.ndarray:
        with np.errstate(over="ignore", under="ignore"):
            return np.exp(self.log_v)

    def entry(self, t: int, s: int) -> float:
        """a_{t,s}, 1-based."""
        t, s = min(t, s), max(t, s)
        return float(np.exp(np.log(self.alpha / self.beta)
                            + self.log_u[t - 1] + self.log_v[s - 1]))

    def matrix(self) -> np.ndarray:
        logs = np.log(self.alpha / self.beta) + self.log_u[:, None] + self.log_v[None, :]
        upper = np.triu(logs)
        upper = upper + np.triu(upper, 1).T
        with np.errstate(under="ignore"):
            return np.exp(upper)

    def lower_bound_curve(self) -> np.ndarray:
        """(alpha/(alpha+beta)) (1-rho) rho^tau for tau = 0..T-1."""
        tau = np.arange(self.T)
        return self.alpha / (self.alpha + self.beta) * (1.0 - self.rho) * self.rho ** tau


def inverse_entries(alpha: float, beta: float, T: int) -> InverseEntryParams:
    """
    Closed-form entries of H^-1.

    With xi = alpha/beta + 2 and rho = (sqrt(Q)-1)/(sqrt(Q)+1), Q = (alpha+4beta)/alpha:

        u_t = rho/(1-rho^2) (rho^-t - rho^t)
        v_t = c3 rho^-(T-t) + c4 rho^(T-t),  v_T = 1/(-u_{T-1} + (xi-1) u_T)

    evaluated in a rescaled form that never builds rho^-t.
    """
    if beta == 0:
        raise ValueError("beta = 0 makes H the identity; A = I needs no closed form")
    if alpha <= 0 or beta < 0:
        raise ValueError(f"alpha and beta must be positive, got alpha={alpha}, beta={beta}")
    if T < 1:
        raise ValueError(f"T must be >= 1, got {T}")

    Q = (alpha + 4.0 * beta) / alpha
    root = np.sqrt(Q)
    rho = (root - 1.0) / (root + 1.0)
    xi = alpha / beta + 2.0
    log_rho = np.log(rho)

    t = np.arange(0, T + 1, dtype=float)
    # u_t = rho^-t * u_hat_t
    u_hat = rho / (1.0 - rho ** 2) * (1.0 - rho ** (2.0 * t))
    v_hat_T = 1.0 / (-rho * u_hat[T - 1] + (xi - 1.0) * u_hat[T])
    k3 = ((xi - 1.0) * rho - rho ** 2) / (1.0 - rho ** 2)
    k4 = (1.0 - (xi - 1.0) * rho) / (1.0 - rho ** 2)

    stages = t[1:]
    log_u = np.log(u_hat[1:]) - stages * log_rho
    log_v = np.log(v_hat_T) + stages * log_rho + \
        np.log(k3 + k4 * rho ** (2.0 * (T - stages)))

    # c3, c4 against the unscaled v_T = rho^T v_hat_T; underflows to 0 for long horizons
    v_T = float(np.exp(np.log(v_hat_T) + T * log_rho))
    return InverseEntryParams(alpha=alpha, beta=beta, T=T, rho=float(rho), xi_mat=xi,
                              c3=v_T * k3, c4=v_T * k4, log_u=log_u, log_v=log_v)


def export_matrix_csv(params: InverseEntryParams, output_path: str) -> str:
    """Write a_{t,t+tau} row by row; header lists the tau offsets."""
    os.makedirs(os.path.dirname(output_path) or ".", exist_ok=True)
    A = params.matrix()
    T = params.T
    with open(output_path, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(["t"] + [f"tau_{tau}" for tau in range(T)])
        for t in range(T):
            writer.writerow([t + 1] + [repr(float(A[t, t + tau])) for tau in range(T - t)])
    return output_path


# ---------------------------------------------------------------------------
# Brute force
# ---------------------------------------------------------------------------

def brute_force_oracle(seq: CostSequence, grid_points_per_axis: int) -> Trajectory:
    """
    Exhaustive grid minimization of the total cost over X^T.

    The grid has grid_points_per_axis^(n T) points and must not exceed 1e7.
    """
    g = int(grid_points_per_axis)
    if g < 2:
        raise ValueError(f"Need at least 2 grid points per axis, got {g}")
    dims = seq.n * seq.T
    size = float(g) ** dims
    if size > MAX_GRID_POINTS:
        raise ValueError(f"Grid of {g}^{dims} = {size:.3g} points exceeds {MAX_GRID_POINTS}")
    size = int(size)

    axes = np.stack([np.linspace(lo, hi, g) for lo, hi in zip(seq.space.lower, seq.space.upper)])
    axis_of = np.tile(np.arange(seq.n), seq.T)
    best_cost, best_index = np.inf, 0
    for start in range(0, size, GRID_CHUNK):
        flat = np.arange(start, min(start + GRID_CHUNK, size))
        digits = np.stack(np.unravel_index(flat, (g,) * dims), axis=-1)
        X = axes[axis_of, digits].reshape(-1, seq.T, seq.n)
        costs = chain_cost(seq.P, seq.q, seq.c, seq.beta, seq.x0, X)
        i = int(np.argmin(costs))
        if costs[i] < best_cost:
            best_cost, best_index = float(costs[i]), int(flat[i])

    digits = np.array(np.unravel_index(best_index, (g,) * dims))
    return Trajectory(axes[axis_of, digits].reshape(seq.T, seq.n))


def main():
    parser = argparse.ArgumentParser(description="Offline optimum and the inverse matrix A")
    parser.add_argument("--instance", help="Instance JSON file")
    parser.add_argument("--tol", type=float, default=1e-10, help="Gradient-mapping tolerance")
    parser.add_argument("--matrix", action="store_true", help="Export A = H^-1 instead")
    parser.add_argument("--alpha", type=float, default=1.0)
    parser.add_argument("--beta", type=float, default=1.0)
    parser.add_argument("--T", type=int, default=20)
    parser.add_argument("--output", default="output/inverse_matrix.csv")
    args = parser.parse_args()

    if args.matrix:
        params = inverse_entries(args.alpha, args.beta, args.T)
        export_matrix_csv(params, args.output)
        print(f"rho={params.rho:.6f}, Q_f={params.Q_f:.6g}")
        print(f"Matrix written to {args.output}")
        return

    if not args.instance:
        parser.error("--instance is required unless --matrix is given")
    seq = load_instance(args.instance)
    traj = solve(seq, args.tol)
    print(f"Offline optimum for {args.instance}")
    print(f"  cost: {total_cost(seq, traj):.12g}")
    for t in range(1, min(len(traj), 10) + 1):
        print(f"  x_{t} = {np.array2string(traj[t], precision=6)}")


if __name__ == "__main__":
    main()
