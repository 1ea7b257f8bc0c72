"""
cost_model.py — Action spaces, quadratic stage costs and the total cost.

Everything the online algorithms and oracles share: the box action space X
and its projection, quadratic stage costs f_t(x) = 1/2 x'Px + q'x + c, the
function class F_X(alpha, l, G), the cost sequence consumed by every
algorithm, and the total cost

    C(x) = sum_t f_t(x_t) + beta/2 * ||x_t - x_{t-1}||^2

together with its per-stage partial gradients.

Cost sequences serialize to JSON:

    {"T", "n", "beta", "x0", "space": {"lower", "upper"},
     "costs": [{"P": row-major, "q", "c"}, ...]}

or, for isotropic costs (alpha/2)||x - theta_t||^2, the compact form with
"alpha" and "thetas" in place of "costs".

Usage:
    python cost_model.py --instance instance.json
"""

import argparse
import itertools
import json
import logging
import os
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from descent import accelerated_projected_descent

logger = logging.getLogger(__name__)

# Beyond this dimension the gradient bound falls back to l*D/2 + ||grad(center)||.
VERTEX_ENUMERATION_MAX_DIM = 20
MINIMIZER_TOLERANCE = 1e-10


def _frozen(values, ndim: int, name: str) -> np.ndarray:
    arr = np.array(values, dtype=float)
    if arr.ndim == 0 and ndim == 1:
        arr = arr.reshape(1)
    if arr.ndim != ndim:
        raise ValueError(f"{name} must be {ndim}-dimensional, got shape {arr.shape}")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class ActionSpace:
    """Axis-aligned box [lower, upper] in R^n."""
    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        lower = _frozen(self.lower, 1, "lower")
        upper = _frozen(self.upper, 1, "upper")
        if lower.shape != upper.shape:
            raise ValueError(f"Bound shapes differ: {lower.shape} vs {upper.shape}")
        if np.any(lower > upper):
            raise ValueError(f"lower must not exceed upper: {lower} > {upper}")
        diameter = float(np.linalg.norm(upper - lower))
        if not np.isfinite(diameter) or diameter <= 0:
            raise ValueError(f"Box diameter must be finite and positive, got {diameter}")
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    @classmethod
    def interval(cls, lo: float, hi: float) -> "ActionSpace":
        return cls(lower=[lo], upper=[hi])

    @property
    def dim(self) -> int:
        return self.lower.shape[0]

    @property
    def diameter(self) -> float:
        return float(np.linalg.norm(self.upper - self.lower))

    @property
    def center(self) -> np.ndarray:
        return (self.lower + self.upper) / 2.0

    def contains(self, point, tol: float = 0.0) -> bool:
        p = np.asarray(point, dtype=float)
        return bool(np.all(p >= self.lower - tol) and np.all(p <= self.upper + tol))

    def vertices(self):
        """Yield the 2^n corners of the box."""
        for corner in itertools.product(*zip(self.lower, self.upper)):
            yield np.array(corner)

    def to_dict(self) -> dict:
        return {"lower": self.lower.tolist(), "upper": self.upper.tolist()}


def project(space: ActionSpace, point) -> np.ndarray:
    """Euclidean projection onto the box (component-wise clamp)."""
    p = np.asarray(point, dtype=float)
    if p.shape[-1:] != (space.dim,):
        raise ValueError(f"Point dimension {p.shape} does not match space dimension {space.dim}")
    return np.clip(p, space.lower, space.upper)


@dataclass(frozen=True, eq=False)
class QuadraticStageCost:
    """
    f(x) = 1/2 x'Px + q'x + c with P symmetric positive definite.

    `theta` is set for the isotropic family (alpha/2)||x - theta||^2 built by
    `isotropic`; it is the unconstrained minimizer, kept exactly.
    """
    P: np.ndarray
    q: np.ndarray
    c: float = 0.0
    theta: Optional[np.ndarray] = None

    def __post_init__(self):
        P = _frozen(self.P, 2, "P")
        q = _frozen(self.q, 1, "q")
        n = q.shape[0]
        if P.shape != (n, n):
            raise ValueError(f"P must be {n}x{n}, got {P.shape}")
        if not np.allclose(P, P.T, rtol=0.0, atol=1e-12 * max(1.0, np.abs(P).max())):
            raise ValueError("P must be symmetric")
        eigs = np.linalg.eigvalsh(P)
        if eigs[0] <= 0:
            raise ValueError(f"P must be positive definite, min eigenvalue {eigs[0]}")
        object.__setattr__(self, "P", P)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "c", float(self.c))
        object.__setattr__(self, "_eigs", (float(eigs[0]), float(eigs[-1])))
        if self.theta is not None:
            object.__setattr__(self, "theta", _frozen(self.theta, 1, "theta"))

    @classmethod
    def isotropic(cls, alpha: float, theta) -> "QuadraticStageCost":
        """(alpha/2)||x - theta||^2."""
        if alpha <= 0:
            raise ValueError(f"alpha must be positive, got {alpha}")
        theta = np.atleast_1d(np.asarray(theta, dtype=float))
        n = theta.shape[0]
        return cls(P=alpha * np.eye(n), q=-alpha * theta,
                   c=0.5 * alpha * float(theta @ theta), theta=theta)

    @property
    def dim(self) -> int:
        return self.q.shape[0]

    @property
    def strong_convexity(self) -> float:
        return self._eigs[0]

    @property
    def smoothness(self) -> float:
        return self._eigs[1]

    @property
    def is_isotropic(self) -> bool:
        return self.theta is not None

    @property
    def is_diagonal(self) -> bool:
        return bool(np.count_nonzero(self.P - np.diag(np.diag(self.P))) == 0)

    def value(self, x) -> float:
        x = np.asarray(x, dtype=float)
        return float(0.5 * x @ self.P @ x + self.q @ x + self.c)

    def gradient(self, x) -> np.ndarray:
        return self.P @ np.asarray(x, dtype=float) + self.q

    def unconstrained_minimizer(self) -> np.ndarray:
        if self.theta is not None:
            return np.array(self.theta)
        return -np.linalg.solve(self.P, self.q)

    def minimizer(self, space: ActionSpace) -> np.ndarray:
        """Constrained minimizer over the box."""
        if self.theta is not None:
            return project(space, self.theta)
        if self.is_diagonal:
            # separable: the clamp of the unconstrained minimizer is exact
            return project(space, -self.q / np.diag(self.P))
        x = self.unconstrained_minimizer()
        if space.contains(x):
            return x
        result = accelerated_projected_descent(
            gradient=self.gradient,
            project=lambda z: project(space, z),
            x0=project(space, x),
            step=1.0 / self.smoothness,
            strong_convexity=self.strong_convexity,
            tolerance=MINIMIZER_TOLERANCE,
            max_iters=100000,
            objective=self.value,
        )
        logger.debug("Box-constrained stage minimizer: %d iterations", result.iterations)
        return result.x

    def gradient_bound(self, space: ActionSpace) -> float:
        """sup over X of ||grad f||, exact by vertex enumeration for n <= 20."""
        if space.dim <= VERTEX_ENUMERATION_MAX_DIM:
            return max(float(np.linalg.norm(self.gradient(v))) for v in space.vertices())
        return self.smoothness * space.diameter / 2.0 + \
            float(np.linalg.norm(self.gradient(space.center)))

    def to_dict(self) -> dict:
        return {"P": self.P.tolist(), "q": self.q.tolist(), "c": self.c}


@dataclass(frozen=True)
class FunctionClassParams:
    """Class F_X(alpha, l, G): alpha-strongly convex, l-smooth, ||grad|| <= G on X."""
    alpha: float
    l: float
    G: float

    def __post_init__(self):
        if self.alpha <= 0:
            raise ValueError(f"alpha must be positive, got {self.alpha}")
        if self.l < self.alpha:
            raise ValueError(f"l must be >= alpha, got l={self.l}, alpha={self.alpha}")
        if self.G <= 0:
            raise ValueError(f"G must be positive, got {self.G}")

    def check(self, cost: QuadraticStageCost, space: ActionSpace, rtol: float = 1e-9):
        """Raise ValueError if the cost is outside the class."""
        if cost.strong_convexity < self.alpha * (1 - rtol):
            raise ValueError(
                f"Cost strong convexity {cost.strong_convexity} below alpha={self.alpha}")
        if cost.smoothness > self.l * (1 + rtol):
            raise ValueError(f"Cost smoothness {cost.smoothness} above l={self.l}")
        bound = cost.gradient_bound(space)
        if bound > self.G * (1 + rtol):
            raise ValueError(f"Cost gradient bound {bound} above G={self.G}")


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Decision profile (x_1, ..., x_T) stored as a (T, n) array."""
    points: np.ndarray

    def __post_init__(self):
        pts = np.array(self.points, dtype=float)
        if pts.ndim == 1:
            pts = pts.reshape(-1, 1)
        if pts.ndim != 2:
            raise ValueError(f"Trajectory must be (T, n), got shape {pts.shape}")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    def __len__(self) -> int:
        return self.points.shape[0]

    def __getitem__(self, t: int) -> np.ndarray:
        """1-based stage access: traj[t] is x_t."""
        if not 1 <= t <= len(self):
            raise IndexError(f"Stage {t} out of range 1..{len(self)}")
        return self.points[t - 1]

    def array(self) -> np.ndarray:
        return np.array(self.points)


@dataclass(frozen=True, eq=False)
class CostSequence:
    """
    The T stage costs, switching weight beta, initial action x0 and box X.

    When class_params is omitted it is inferred: alpha and l from the extreme
    eigenvalues over all stages, G from the vertex gradient bound.
    """
    costs: Tuple[QuadraticStageCost, ...]
    beta: float
    x0: np.ndarray
    space: ActionSpace
    class_params: Optional[FunctionClassParams] = None
    P: np.ndarray = field(init=False, repr=False)
    q: np.ndarray = field(init=False, repr=False)
    c: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        costs = tuple(self.costs)
        if len(costs) < 1:
            raise ValueError("A cost sequence needs at least one stage (T >= 1)")
        if self.beta < 0:
            raise ValueError(f"beta must be >= 0, got {self.beta}")
        x0 = _frozen(self.x0, 1, "x0")
        n = self.space.dim
        if x0.shape != (n,):
            raise ValueError(f"x0 has shape {x0.shape}, space dimension is {n}")
        if not self.space.contains(x0):
            raise ValueError(f"x0={x0} lies outside the action space")
        for t, cost in enumerate(costs, start=1):
            if cost.dim != n:
                raise ValueError(f"Stage {t} cost has dimension {cost.dim}, expected {n}")

        params = self.class_params
        if params is None:
            params = FunctionClassParams(
                alpha=min(cost.strong_convexity for cost in costs),
                l=max(cost.smoothness for cost in costs),
                G=max(cost.gradient_bound(self.space) for cost in costs),
            )
        else:
            for cost in costs:
                params.check(cost, self.space)

        P = np.stack([cost.P for cost in costs])
        q = np.stack([cost.q for cost in costs])
        c = np.array([cost.c for cost in costs])
        for arr in (P, q, c):
            arr.setflags(write=False)
        object.__setattr__(self, "costs", costs)
        object.__setattr__(self, "beta", float(self.beta))
        object.__setattr__(self, "x0", x0)
        object.__setattr__(self, "class_params", params)
        object.__setattr__(self, "P", P)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "c", c)

    @property
    def T(self) -> int:
        return len(self.costs)

    @property
    def n(self) -> int:
        return self.space.dim

    @property
    def is_isotropic(self) -> bool:
        """All stages are (alpha/2)||x - theta_t||^2 with one common alpha."""
        if not all(cost.is_isotropic for cost in self.costs):
            return False
        alphas = {cost.strong_convexity for cost in self.costs}
        return len(alphas) == 1

    def thetas(self) -> np.ndarray:
        """Isotropic parameters theta_t as a (T, n) array."""
        if not all(cost.is_isotropic for cost in self.costs):
            raise ValueError("thetas() is only defined for isotropic sequences")
        return np.stack([cost.theta for cost in self.costs])

    def stage_minimizers(self) -> np.ndarray:
        """theta_t = argmin over X of f_t, as a (T, n) array."""
        return np.stack([cost.minimizer(self.space) for cost in self.costs])

    def to_dict(self) -> dict:
        doc = {
            "T": self.T,
            "n": self.n,
            "beta": self.beta,
            "x0": self.x0.tolist(),
            "space": self.space.to_dict(),
        }
        if self.is_isotropic:
            doc["alpha"] = self.costs[0].strong_convexity
            doc["thetas"] = self.thetas().tolist()
        else:
            doc["costs"] = [cost.to_dict() for cost in self.costs]
        return doc

    @classmethod
    def from_dict(cls, doc: dict) -> "CostSequence":
        try:
            space = ActionSpace(lower=doc["space"]["lower"], upper=doc["space"]["upper"])
            if "thetas" in doc:
                costs = [QuadraticStageCost.isotropic(doc["alpha"], theta)
                         for theta in doc["thetas"]]
            else:
                costs = [QuadraticStageCost(P=entry["P"], q=entry["q"], c=entry.get("c", 0.0))
                         for entry in doc["costs"]]
            seq = cls(costs=costs, beta=doc["beta"], x0=doc["x0"], space=space)
        except KeyError as e:
            raise ValueError(f"Instance document missing key: {e}") from e
        if "T" in doc and doc["T"] != seq.T:
            raise ValueError(f"Declared T={doc['T']} but {seq.T} costs given")
        if "n" in doc and doc["n"] != seq.n:
            raise ValueError(f"Declared n={doc['n']} but space has dimension {seq.n}")
        return seq


def isotropic_sequence(thetas, alpha: float, beta: float, x0, space: ActionSpace,
                       class_params: Optional[FunctionClassParams] = None) -> CostSequence:
    """Build f_t(x) = (alpha/2)||x - theta_t||^2 for each row of thetas."""
    thetas = np.asarray(thetas, dtype=float)
    if thetas.ndim == 1:
        thetas = thetas.reshape(-1, 1)
    costs = [QuadraticStageCost.isotropic(alpha, theta) for theta in thetas]
    return CostSequence(costs=costs, beta=beta, x0=np.atleast_1d(x0), space=space,
                        class_params=class_params)


def save_instance(seq: CostSequence, output_path: str) -> str:
    """Write a cost sequence to JSON."""
    os.makedirs(os.path.dirname(output_path) or ".", exist_ok=True)
    with open(output_path, "w") as f:
        json.dump(seq.to_dict(), f, indent=2)
    return output_path


def load_instance(path: str) -> CostSequence:
    """Read a cost sequence from JSON."""
    if not os.path.exists(path):
        raise FileNotFoundError(f"Instance file not found: {path}")
    with open(path) as f:
        try:
            doc = json.load(f)
        except json.JSONDecodeError as e:
            raise ValueError(f"Instance file is not valid JSON: {path}: {e}") from e
    return CostSequence.from_dict(doc)


# ---------------------------------------------------------------------------
# Total cost and gradients
# ---------------------------------------------------------------------------

def chain_cost(P: np.ndarray, q: np.ndarray, c: np.ndarray, beta: float,
               anchor: np.ndarray, X: np.ndarray) -> np.ndarray:
    """
    sum_j f_j(x_j) + beta/2 ||x_j - x_{j-1}||^2 over a block chain.

    X has shape (..., k, n) (leading batch axes allowed); anchor is the fixed
    x_{j0-1} preceding the first block. Returns an array over the batch axes.
    """
    X = np.asarray(X, dtype=float)
    stage = 0.5 * np.einsum("...ti,tij,...tj->...t", X, P, X) + \
        np.einsum("ti,...ti->...t", q, X) + c
    prev = np.concatenate([np.broadcast_to(anchor, X[..., :1, :].shape), X[..., :-1, :]], axis=-2)
    switching = 0.5 * beta * np.sum((X - prev) ** 2, axis=(-2, -1))
    return stage.sum(axis=-1) + switching


def chain_gradient(P: np.ndarray, q: np.ndarray, beta: float,
                   anchor: np.ndarray, X: np.ndarray) -> np.ndarray:
    """Gradient of chain_cost with respect to every block of X (shape (k, n))."""
    X = np.asarray(X, dtype=float)
    grad = np.einsum("tij,tj->ti", P, X) + q
    prev = np.vstack([anchor[np.newaxis, :], X[:-1]])
    grad += beta * (X - prev)
    grad[:-1] += beta * (X[:-1] - X[1:])
    return grad


def total_cost(seq: CostSequence, traj: Trajectory) -> float:
    """C(x) = sum_t f_t(x_t) + beta/2 ||x_t - x_{t-1}||^2 with x_0 = seq.x0."""
    X = traj.points if isinstance(traj, Trajectory) else np.asarray(traj, dtype=float)
    if X.ndim == 1:
        X = X.reshape(-1, 1)
    if X.shape != (seq.T, seq.n):
        raise ValueError(f"Trajectory shape {X.shape} does not match (T, n)=({seq.T}, {seq.n})")
    return float(chain_cost(seq.P, seq.q, seq.c, seq.beta, seq.x0, X))


def stacked_gradient(seq: CostSequence, X) -> np.ndarray:
    """Full gradient of the total cost as a (T, n) array."""
    X = np.asarray(X, dtype=float).reshape(seq.T, seq.n)
    return chain_gradient(seq.P, seq.q, seq.beta, seq.x0, X)


def partial_gradient(seq: CostSequence, t: int, x_prev, x_t, x_next) -> np.ndarray:
    """
    g_t = dC/dx_t, which only depends on x_{t-1}, x_t, x_{t+1}.

    For t = T the argument x_next is accepted and ignored.
    """
    if not 1 <= t <= seq.T:
        raise ValueError(f"Stage index {t} out of range 1..{seq.T}")
    x_t = np.asarray(x_t, dtype=float)
    grad = seq.costs[t - 1].gradient(x_t)
    if t < seq.T:
        return grad + seq.beta * (2 * x_t - x_prev - x_next)
    return grad + seq.beta * (x_t - x_prev)


def smoothness_params(seq: CostSequence) -> Tuple[float, float]:
    """(L, Q_f) with L = l + 4 beta and Q_f = L / alpha."""
    params = seq.class_params
    L = params.l + 4.0 * seq.beta
    return L, L / params.alpha


def path_length(seq: CostSequence) -> float:
    """sum_t ||theta_t - theta_{t-1}|| with theta_0 = x0."""
    minimizers = seq.stage_minimizers()
    prev = np.vstack([seq.x0[np.newaxis, :], minimizers[:-1]])
    return float(np.sum(np.linalg.norm(minimizers - prev, axis=1)))


def main():
    parser = argparse.ArgumentParser(description="Summarize a cost-sequence instance")
    parser.add_argument("--instance", required=True, help="Instance JSON file")
    args = parser.parse_args()

    seq = load_instance(args.instance)
    L, Q_f = smoothness_params(seq)
    params = seq.class_params
    print(f"Instance: {args.instance}")
    print(f"  T={seq.T}, n={seq.n}, beta={seq.beta}, D={seq.space.diameter:.6g}")
    print(f"  alpha={params.alpha:.6g}, l={params.l:.6g}, G={params.G:.6g}")
    print(f"  L={L:.6g}, Q_f={Q_f:.6g}")
    print(f"  path length={path_length(seq):.6g}")


if __name__ == "__main__":
    main()
