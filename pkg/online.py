"""
online.py — Online gradient descent and the receding-horizon algorithms.

Implements OGD, receding-horizon gradient descent (RHGD) and receding-horizon
accelerated gradient (RHAG), together with the offline GD / NAG iterations
they reproduce exactly. Every online run is routed through an
InformationGate that only exposes f_1..f_{s+W-1} at stage s.

RHGD at stage s (s = 2-W .. T):
    x_{s+W}^s = Proj(x_{s+W-1}^{s-1} - gamma * grad f_{s+W-1})     if s+W <= T
    x_t^s     = Proj(x_t^{s-1} - eta * g_t(x_{t-1}^{s-2}, x_t^{s-1}, x_{t+1}^s))
                for t = min(s+W-1, T) down to max(s, 1)
    emit x_s^s

RHAG runs the same sweep on the extrapolated points y and sets
y_t^s = (1 + lam) x_t^s - lam x_t^{s-1}.

Usage:
    python online.py --instance instance.json --algo rhag --w 5
"""

import argparse
import logging
import time
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from cost_model import (CostSequence, Trajectory, load_instance, partial_gradient,
                        project, smoothness_params, total_cost)
from descent import ConvergenceError, certified_gap, nesterov_momentum
from offline import solve

logger = logging.getLogger(__name__)

# Regret below -(this + certified oracle gap) means the oracle is wrong.
REGRET_SLACK = 1e-8


class InformationLeakError(RuntimeError):
    """An online algorithm touched a stage cost outside its prediction window."""


class InformationGate:
    """
    Read-only view of a CostSequence limited to the current prediction window.

    At stage s the gate exposes f_1..f_{min(s+W-1, T)}; any other access
    raises InformationLeakError. It also counts block gradient evaluations
    (one evaluation = one grad f_t at one point).
    """

    def __init__(self, seq: CostSequence, window: int):
        if window < 0:
            raise ValueError(f"Prediction window must be >= 0, got {window}")
        self._seq = seq
        # W > T behaves as W = T
        self.window = min(window, seq.T)
        self.stage = None
        self.horizon = 0
        self.evaluations = 0

    @property
    def T(self) -> int:
        return self._seq.T

    @property
    def beta(self) -> float:
        return self._seq.beta

    @property
    def x0(self) -> np.ndarray:
        return self._seq.x0

    @property
    def space(self):
        return self._seq.space

    @property
    def class_params(self):
        return self._seq.class_params

    def advance(self, stage: int):
        self.stage = stage
        self.horizon = min(stage + self.window - 1, self._seq.T)

    def _check(self, first: int, last: int):
        if first < 1 or last > self.horizon:
            raise InformationLeakError(
                f"Stage {self.stage} with window {self.window} may read f_1..f_{self.horizon}, "
                f"requested f_{first}..f_{last}")

    def cost(self, t: int):
        self._check(t, t)
        return self._seq.costs[t - 1]

    def gradient(self, t: int, x: np.ndarray) -> np.ndarray:
        cost = self.cost(t)
        self.evaluations += 1
        return cost.gradient(x)

    def partial_gradient(self, t: int, x_prev, x_t, x_next) -> np.ndarray:
        self._check(t, t)
        self.evaluations += 1
        return partial_gradient(self._seq, t, x_prev, x_t, x_next)

    def window_costs(self, first: int, last: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Stacked (P, q, c) for stages first..last."""
        self._check(first, last)
        return (self._seq.P[first - 1:last], self._seq.q[first - 1:last],
                self._seq.c[first - 1:last])

    def charge(self, count: int):
        """Record evaluations made on data obtained through window_costs."""
        self.evaluations += count

    def take_evaluations(self) -> int:
        count, self.evaluations = self.evaluations, 0
        return count


class HorizonBuffer:
    """
    Two-version iterate store for the live stages of a receding-horizon run.

    Each slot t keeps `current` (latest x_t) and `previous` (the value before
    the latest update), plus the same pair for the extrapolated y_t. Slot 0
    is the fixed initial action. At most W+2 slots are live at once.
    """

    def __init__(self, x0: np.ndarray):
        self._x0 = np.array(x0, dtype=float)
        self._slots: Dict[int, List[np.ndarray]] = {}
        self.peak = 0

    def __len__(self) -> int:
        return len(self._slots)

    def __contains__(self, t: int) -> bool:
        return t in self._slots

    def initialize(self, t: int, x: np.ndarray):
        if t in self._slots:
            raise RuntimeError(f"Slot {t} is already live")
        self._slots[t] = [x, x, x, x]
        self.peak = max(self.peak, len(self._slots))

    def update(self, t: int, x: np.ndarray, y: Optional[np.ndarray] = None):
        slot = self._slots[t]
        slot[1], slot[0] = slot[0], x
        slot[3], slot[2] = slot[2], x if y is None else y

    def _get(self, t: int, index: int) -> np.ndarray:
        if t == 0:
            return self._x0
        try:
            return self._slots[t][index]
        except KeyError:
            raise RuntimeError(f"Slot {t} is not live") from None

    def current(self, t: int) -> np.ndarray:
        return self._get(t, 0)

    def previous(self, t: int) -> np.ndarray:
        return self._get(t, 1)

    def y_current(self, t: int) -> np.ndarray:
        return self._get(t, 2)

    def y_previous(self, t: int) -> np.ndarray:
        return self._get(t, 3)

    def retire(self, t: int):
        self._slots.pop(t, None)


@dataclass
class AlgoConfig:
    """
    Prediction window and stepsizes. None selects the default rule:
    gamma = 1/l, eta = 1/L, momentum = (1 - sqrt(alpha*eta)) / (1 + sqrt(alpha*eta)).
    """
    W: int = 0
    gamma: Optional[float] = None
    eta: Optional[float] = None
    momentum: Optional[float] = None

    def __post_init__(self):
        if self.W < 0:
            raise ValueError(f"W must be >= 0, got {self.W}")
        for name in ("gamma", "eta"):
            value = getattr(self, name)
            if value is not None and value <= 0:
                raise ValueError(f"{name} must be positive, got {value}")
        if self.momentum is not None and not 0.0 <= self.momentum < 1.0:
            raise ValueError(f"momentum must be in [0, 1), got {self.momentum}")

    def stepsizes(self, seq: CostSequence) -> Tuple[float, float, float]:
        """Resolve (gamma, eta, momentum) against the instance."""
        L, _ = smoothness_params(seq)
        gamma = self.gamma if self.gamma is not None else 1.0 / seq.class_params.l
        eta = self.eta if self.eta is not None else 1.0 / L
        momentum = self.momentum if self.momentum is not None else \
            nesterov_momentum(seq.class_params.alpha, eta)
        return gamma, eta, momentum


@dataclass
class StageRecorder:
    """Per-stage wall time and gradient evaluations; stages s <= 0 go to warmup."""
    T: int
    seconds: np.ndarray = field(init=False)
    evaluations: np.ndarray = field(init=False)
    warmup_seconds: float = 0.0
    warmup_evaluations: int = 0

    def __post_init__(self):
        self.seconds = np.zeros(self.T)
        self.evaluations = np.zeros(self.T, dtype=int)

    def record(self, stage: int, seconds: float, evaluations: int):
        if stage >= 1:
            self.seconds[stage - 1] = seconds
            self.evaluations[stage - 1] = evaluations
        else:
            self.warmup_seconds += seconds
            self.warmup_evaluations += evaluations


def _ogd_step(gate: InformationGate, t: int, x: np.ndarray, gamma: float) -> np.ndarray:
    """Proj(x - gamma * grad f_t(x)); shared so W=0 runs reproduce OGD exactly."""
    return project(gate.space, x - gamma * gate.gradient(t, x))


def run_ogd(seq: CostSequence, cfg: AlgoConfig,
            recorder: Optional[StageRecorder] = None) -> Trajectory:
    """x_1 = x_0, x_t = Proj(x_{t-1} - gamma * grad f_{t-1}(x_{t-1}))."""
    gamma, _, _ = cfg.stepsizes(seq)
    gate = InformationGate(seq, 0)
    points = np.empty((seq.T, seq.n))
    x = seq.x0
    for t in range(1, seq.T + 1):
        start = time.perf_counter()
        gate.advance(t)
        if t > 1:
            x = _ogd_step(gate, t - 1, x, gamma)
        points[t - 1] = x
        if recorder is not None:
            recorder.record(t, time.perf_counter() - start, gate.take_evaluations())
    return Trajectory(points)


def _receding_horizon(seq: CostSequence, cfg: AlgoConfig, accelerated: bool,
                      recorder: Optional[StageRecorder]) -> Trajectory:
    gamma, eta, lam = cfg.stepsizes(seq)
    if not accelerated:
        lam = 0.0
    T = seq.T
    W = min(cfg.W, T)
    gate = InformationGate(seq, W)
    buffer = HorizonBuffer(seq.x0)
    points = np.empty((T, seq.n))

    buffer.initialize(1, seq.x0)
    for s in range(min(2 - W, 1), T + 1):
        start = time.perf_counter()
        gate.advance(s)

        if s >= 2 - W:
            head = s + W
            if 2 <= head <= T:
                buffer.initialize(head, _ogd_step(gate, head - 1, buffer.current(head - 1), gamma))

            for t in range(min(s + W - 1, T), max(s, 1) - 1, -1):
                # t = T has no successor; its value stands in for the ignored x_{T+1}
                nxt = t + 1 if t < T else t
                if accelerated:
                    y_t = buffer.y_current(t)
                    g = gate.partial_gradient(t, buffer.y_previous(t - 1), y_t,
                                              buffer.y_current(nxt))
                    x_new = project(seq.space, y_t - eta * g)
                    y_new = (1 + lam) * x_new - lam * buffer.current(t)
                    buffer.update(t, x_new, y_new)
                else:
                    x_t = buffer.current(t)
                    g = gate.partial_gradient(t, buffer.previous(t - 1), x_t,
                                              buffer.current(nxt))
                    buffer.update(t, project(seq.space, x_t - eta * g))

        if s >= 1:
            points[s - 1] = buffer.current(s)
            buffer.retire(s - 1)
        if recorder is not None:
            recorder.record(s, time.perf_counter() - start, gate.take_evaluations())

    logger.debug("Receding horizon run: W=%d, peak live slots %d", W, buffer.peak)
    return Trajectory(points)


def run_rhgd(seq: CostSequence, cfg: AlgoConfig,
             recorder: Optional[StageRecorder] = None) -> Trajectory:
    """Receding-horizon gradient descent; W=0 reduces to OGD."""
    return _receding_horizon(seq, cfg, accelerated=False, recorder=recorder)


def run_rhag(seq: CostSequence, cfg: AlgoConfig,
             recorder: Optional[StageRecorder] = None) -> Trajectory:
    """Receding-horizon accelerated gradient (Nesterov momentum on the window)."""
    return _receding_horizon(seq, cfg, accelerated=True, recorder=recorder)


def run_follow_minimizer(seq: CostSequence, W: int,
                         recorder: Optional[StageRecorder] = None) -> Trajectory:
    """
    Play the stage minimizer x_t = argmin_X f_t, which needs f_t at stage t.

    Regret is at most (beta/2) * sum_t ||theta_t - theta_{t-1}||^2, so this
    is the natural baseline when the path length is small.
    """
    if W < 1:
        raise ValueError(f"Following the minimizer needs W >= 1, got {W}")
    gate = InformationGate(seq, W)
    points = np.empty((seq.T, seq.n))
    for t in range(1, seq.T + 1):
        start = time.perf_counter()
        gate.advance(t)
        points[t - 1] = gate.cost(t).minimizer(seq.space)
        if recorder is not None:
            recorder.record(t, time.perf_counter() - start, gate.take_evaluations())
    return Trajectory(points)


def _as_points(seq: CostSequence, init) -> np.ndarray:
    X = init.array() if isinstance(init, Trajectory) else np.array(init, dtype=float)
    X = X.reshape(seq.T, seq.n)
    return X


def offline_gd_iterates(seq: CostSequence, init, k: int,
                        eta: Optional[float] = None) -> Trajectory:
    """k projected gradient steps on the stacked total cost, eta = 1/L by default."""
    if k < 0:
        raise ValueError(f"Iteration count must be >= 0, got {k}")
    if eta is None:
        eta = 1.0 / smoothness_params(seq)[0]
    T = seq.T
    X = _as_points(seq, init)
    for _ in range(k):
        X_new = np.empty_like(X)
        for t in range(1, T + 1):
            prev = X[t - 2] if t > 1 else seq.x0
            nxt = X[t] if t < T else X[t - 1]
            g = partial_gradient(seq, t, prev, X[t - 1], nxt)
            X_new[t - 1] = project(seq.space, X[t - 1] - eta * g)
        X = X_new
    return Trajectory(X)


def offline_nag_iterates(seq: CostSequence, init, k: int,
                         eta: Optional[float] = None,
                         momentum: Optional[float] = None) -> Trajectory:
    """k Nesterov steps on the stacked total cost with y^(0) = x^(0)."""
    if k < 0:
        raise ValueError(f"Iteration count must be >= 0, got {k}")
    if eta is None:
        eta = 1.0 / smoothness_params(seq)[0]
    lam = momentum if momentum is not None else nesterov_momentum(seq.class_params.alpha, eta)
    T = seq.T
    X = _as_points(seq, init)
    Y = X.copy()
    for _ in range(k):
        X_new = np.empty_like(X)
        for t in range(1, T + 1):
            prev = Y[t - 2] if t > 1 else seq.x0
            nxt = Y[t] if t < T else Y[t - 1]
            g = partial_gradient(seq, t, prev, Y[t - 1], nxt)
            X_new[t - 1] = project(seq.space, Y[t - 1] - eta * g)
        Y_new = np.empty_like(Y)
        for t in range(T):
            Y_new[t] = (1 + lam) * X_new[t] - lam * X[t]
        X, Y = X_new, Y_new
    return Trajectory(X)


# ---------------------------------------------------------------------------
# Regret
# ---------------------------------------------------------------------------

@dataclass
class RegretRecord:
    """Online cost against the hindsight optimum for one run."""
    trajectory: Trajectory
    online_cost: float
    offline_cost: float
    regret: float
    per_stage_seconds: np.ndarray
    slack: float = 0.0


def evaluate_regret(seq: CostSequence, trajectory: Trajectory, offline: Trajectory,
                    tolerance: float,
                    per_stage_seconds: Optional[np.ndarray] = None) -> RegretRecord:
    """
    Compare a run with the offline optimum.

    `offline` must be certified to gradient-mapping norm `tolerance`; its cost
    is then within tolerance^2 / (2 alpha) of optimal and that gap is stored as
    the record's slack.

    Raises:
        ConvergenceError: regret below -(1e-8 + slack), i.e. the oracle is not optimal.
    """
    online_cost = total_cost(seq, trajectory)
    offline_cost = total_cost(seq, offline)
    slack = certified_gap(tolerance, seq.class_params.alpha)
    regret = online_cost - offline_cost
    if regret < -(REGRET_SLACK + slack):
        raise ConvergenceError(
            f"Online cost {online_cost:.12g} beats the offline optimum {offline_cost:.12g}",
            residual=-regret, iterations=0)
    if per_stage_seconds is None:
        per_stage_seconds = np.zeros(seq.T)
    return RegretRecord(trajectory=trajectory, online_cost=online_cost,
                        offline_cost=offline_cost, regret=regret,
                        per_stage_seconds=np.asarray(per_stage_seconds), slack=slack)


ALGORITHMS = {
    "ogd": lambda seq, W, recorder: run_ogd(seq, AlgoConfig(W=0), recorder),
    "rhgd": lambda seq, W, recorder: run_rhgd(seq, AlgoConfig(W=W), recorder),
    "rhag": lambda seq, W, recorder: run_rhag(seq, AlgoConfig(W=W), recorder),
    "follow": lambda seq, W, recorder: run_follow_minimizer(seq, W, recorder),
}


def main():
    parser = argparse.ArgumentParser(description="Run an online algorithm on an instance")
    parser.add_argument("--instance", required=True, help="Instance JSON file")
    parser.add_argument("--algo", choices=sorted(ALGORITHMS), default="rhgd")
    parser.add_argument("--w", type=int, default=0, help="Prediction window")
    args = parser.parse_args()

    seq = load_instance(args.instance)
    recorder = StageRecorder(seq.T)
    traj = ALGORITHMS[args.algo](seq, args.w, recorder)
    tol = 1e-9
    record = evaluate_regret(seq, traj, solve(seq, tol), tol, recorder.seconds)
    print(f"{args.algo} (W={args.w}) on {args.instance}")
    print(f"  online cost:  {record.online_cost:.10g}")
    print(f"  offline cost: {record.offline_cost:.10g}")
    print(f"  regret:       {record.regret:.6e}")
    print(f"  gradient evaluations: {int(recorder.evaluations.sum())}")


if __name__ == "__main__":
    main()
