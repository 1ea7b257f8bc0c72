"""
descent.py — Projected accelerated gradient with a certified stopping rule.

Shared first-order solver for every box-constrained strongly convex quadratic
in the project: stage minimizers with non-diagonal curvature, the offline
hindsight problem, and the MPC window subproblems.

The iteration is Nesterov's constant-momentum scheme for an alpha-strongly
convex, L-smooth objective:

    x_{k+1} = Proj(y_k - step * grad(y_k))
    y_{k+1} = x_{k+1} + momentum * (x_{k+1} - x_k)

with momentum reset whenever the objective goes up (adaptive restart).
The loop stops once the gradient mapping

    G(x) = (x - Proj(x - step * grad(x))) / step

at the current iterate has norm <= tolerance, and returns the projected step
x+ = Proj(x - step * grad(x)). The suboptimality bound ||G(x)||^2 / (2 alpha)
holds at x+, not at x.
"""

import logging
from dataclasses import dataclass
from typing import Callable, Optional, Tuple

import numpy as np

logger = logging.getLogger(__name__)


class ConvergenceError(RuntimeError):
    """Raised when an iterative solver exhausts its budget before converging."""

    def __init__(self, message: str, residual: float, iterations: int):
        super().__init__(f"{message} (residual {residual:.3e} after {iterations} iterations)")
        self.residual = residual
        self.iterations = iterations


@dataclass
class DescentResult:
    """Outcome of a projected descent run."""
    x: np.ndarray
    iterations: int
    residual: float
    gradient_calls: int


def nesterov_momentum(strong_convexity: float, step: float) -> float:
    """Constant momentum (1 - sqrt(alpha*eta)) / (1 + sqrt(alpha*eta))."""
    root = np.sqrt(strong_convexity * step)
    return float((1.0 - root) / (1.0 + root))


def projected_step(x: np.ndarray, grad: np.ndarray,
                   project: Callable[[np.ndarray], np.ndarray],
                   step: float) -> Tuple[np.ndarray, float]:
    """x+ = Proj(x - step * grad) and the gradient-mapping norm ||x - x+|| / step."""
    x_plus = project(x - step * grad)
    return x_plus, float(np.linalg.norm(x - x_plus) / step)


def gradient_mapping_norm(x: np.ndarray, grad: np.ndarray,
                          project: Callable[[np.ndarray], np.ndarray],
                          step: float) -> float:
    """Norm of the projected-gradient residual at x."""
    return projected_step(x, grad, project, step)[1]


def certified_gap(tolerance: float, strong_convexity: float) -> float:
    """
    Objective suboptimality certified by a gradient-mapping norm <= tolerance.

    Uses f(x+) - f* <= ||G(x)||^2 / (2 * alpha) for alpha-strongly convex f,
    where x+ = Proj(x - step * grad(x)) with step <= 1/L.
    """
    return tolerance ** 2 / (2.0 * strong_convexity)


def accelerated_projected_descent(
        gradient: Callable[[np.ndarray], np.ndarray],
        project: Callable[[np.ndarray], np.ndarray],
        x0: np.ndarray,
        step: float,
        strong_convexity: float,
        tolerance: float,
        max_iters: int,
        objective: Optional[Callable[[np.ndarray], float]] = None) -> DescentResult:
    """
    Minimize a strongly convex smooth function over a convex set.

    Args:
        gradient: Gradient oracle.
        project: Euclidean projection onto the feasible set.
        x0: Starting point (projected before use).
        step: Stepsize, normally 1/L.
        strong_convexity: Strong convexity modulus alpha (sets the momentum).
        tolerance: Stop when the gradient-mapping norm is <= tolerance.
        max_iters: Iteration cap.
        objective: Optional objective used for adaptive restart.

    Returns:
        DescentResult holding x+ = Proj(x - step * grad(x)) for the last iterate x,
        with residual = ||G(x)||.

    Raises:
        ConvergenceError: tolerance not reached within max_iters.
    """
    if step <= 0:
        raise ValueError(f"step must be positive, got {step}")
    if tolerance <= 0:
        raise ValueError(f"tolerance must be positive, got {tolerance}")

    momentum = nesterov_momentum(strong_convexity, step)
    x = project(np.array(x0, dtype=float))
    grad_x = gradient(x)
    calls = 1
    x_plus, residual = projected_step(x, grad_x, project, step)
    if residual <= tolerance:
        return DescentResult(x=x_plus, iterations=0, residual=residual, gradient_calls=calls)

    y, grad_y = x, grad_x
    value = objective(x) if objective is not None else None

    for k in range(1, max_iters + 1):
        x_next = project(y - step * grad_y)
        grad_next = gradient(x_next)
        calls += 1

        x_plus, residual = projected_step(x_next, grad_next, project, step)
        if residual <= tolerance:
            return DescentResult(x=x_plus, iterations=k, residual=residual,
                                 gradient_calls=calls)

        restart = False
        if objective is not None:
            value_next = objective(x_next)
            restart = value_next > value
            value = value_next

        if restart:
            y, grad_y = x_next, grad_next
        else:
            y = x_next + momentum * (x_next - x)
            grad_y = gradient(y)
            calls += 1
        x = x_next

    logger.warning("Projected descent stopped at residual %.3e", residual)
    raise ConvergenceError("Projected descent did not reach tolerance", residual, max_iters)
