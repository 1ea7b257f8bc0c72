"""
adversary.py — Randomized lower-bound instances and regret bound constants.

Generators for the adversarial cost sequences behind the regret lower bounds:

  segmented    theta_t = +-D/2, redrawn at the start of every Delta-stage segment
  jump_once    theta = 0 for the first W stages, then one jump to +-nu/2
  w0_pair      two 2-D sequences, one picked by a fair coin, for W = 0, L_T < D

plus `bound_report`, which evaluates every upper and lower bound constant,
and a Monte-Carlo runner that checks measured expected regret against the
expectation bound.

Usage:
    python adversary.py --alpha 1 --beta 1 --D 1 --T 40 --L-T 10 --w 2
"""

import argparse
import logging
import math
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from cost_model import (ActionSpace, CostSequence, FunctionClassParams, QuadraticStageCost,
                        Trajectory, isotropic_sequence)
from offline import inverse_entries, solve
from online import evaluate_regret

logger = logging.getLogger(__name__)

Runner = Callable[[CostSequence, int], Trajectory]


def make_rng(seed) -> np.random.Generator:
    """Counter-based generator; `seed` may be an int or a SeedSequence."""
    return np.random.Generator(np.random.Philox(seed))


def realization_rngs(seed: int, count: int) -> List[np.random.Generator]:
    """Independent per-realization generators derived from one seed."""
    return [make_rng(child) for child in np.random.SeedSequence(seed).spawn(count)]


@dataclass(frozen=True)
class AdversaryConfig:
    T: int
    W: int
    alpha: float
    beta: float
    D: float
    L_T: float
    seed: int = 0

    def __post_init__(self):
        if self.T < 1:
            raise ValueError(f"T must be >= 1, got {self.T}")
        if self.W < 0:
            raise ValueError(f"W must be >= 0, got {self.W}")
        if self.alpha <= 0:
            raise ValueError(f"alpha must be positive, got {self.alpha}")
        if self.beta < 0:
            raise ValueError(f"beta must be >= 0, got {self.beta}")
        if self.D <= 0:
            raise ValueError(f"D must be positive, got {self.D}")
        if not 0 < self.L_T <= self.D * self.T:
            raise ValueError(f"L_T must be in (0, D*T] = (0, {self.D * self.T}], got {self.L_T}")

    @property
    def space(self) -> ActionSpace:
        return ActionSpace.interval(-self.D / 2.0, self.D / 2.0)

    @property
    def class_params(self) -> FunctionClassParams:
        """F_X(alpha, alpha, alpha D) for isotropic costs with theta in X."""
        return FunctionClassParams(alpha=self.alpha, l=self.alpha, G=self.alpha * self.D)

    def segments(self) -> Tuple[int, int]:
        """(Delta, K): segment length ceil(T / floor(L_T/D)) and segment count."""
        jumps = math.floor(self.L_T / self.D)
        if jumps < 1:
            raise ValueError(f"Segmented construction needs L_T >= D, got L_T={self.L_T}, D={self.D}")
        delta = math.ceil(self.T / jumps)
        return delta, math.ceil(self.T / delta)


def segmented_theta(cfg: AdversaryConfig,
                    rng: Optional[np.random.Generator] = None) -> CostSequence:
    """
    One realization of the segmented construction.

    Each of the K segments draws theta = +-D/2 with equal probability and
    holds it for Delta stages. The path length never exceeds L_T.
    """
    delta, K = cfg.segments()
    if rng is None:
        rng = make_rng(cfg.seed)
    signs = rng.choice([-1.0, 1.0], size=K)
    thetas = np.repeat(signs * cfg.D / 2.0, delta)[:cfg.T]
    return isotropic_sequence(thetas, cfg.alpha, cfg.beta, x0=0.0, space=cfg.space,
                              class_params=cfg.class_params)


def jump_once_theta(cfg: AdversaryConfig, nu: float,
                    rng: Optional[np.random.Generator] = None) -> CostSequence:
    """theta_1..theta_W = 0, then theta_t = +-nu/2 for every t >= W+1."""
    if not 0 < nu <= cfg.D:
        raise ValueError(f"nu must be in (0, D] = (0, {cfg.D}], got {nu}")
    if cfg.T < cfg.W + 1:
        raise ValueError(f"Jump-once construction needs T >= W+1, got T={cfg.T}, W={cfg.W}")
    if rng is None:
        rng = make_rng(cfg.seed)
    thetas = np.zeros(cfg.T)
    thetas[cfg.W:] = rng.choice([-1.0, 1.0]) * nu / 2.0
    return isotropic_sequence(thetas, cfg.alpha, cfg.beta, x0=0.0, space=cfg.space,
                              class_params=cfg.class_params)


def jump_once_expectation_bound(alpha: float, beta: float, W: int, nu: float, T: int) -> float:
    """(alpha/2) a_{1,1+W}^2 nu^2 / 4, a lower bound on expected regret."""
    if T < W + 1:
        raise ValueError(f"Need T >= W+1, got T={T}, W={W}")
    if beta == 0:
        a = 1.0 if W == 0 else 0.0
    else:
        a = inverse_entries(alpha, beta, T).entry(1, 1 + W)
    return alpha / 2.0 * a ** 2 * nu ** 2 / 4.0


@dataclass(frozen=True)
class PairConstruction:
    """Two equally likely cost sequences; the offline optima are +-L_T/2 on the first axis."""
    sequences: Tuple[CostSequence, CostSequence]
    probabilities: Tuple[float, float]
    M: float
    G: float


def w0_pair_construction(cfg: AdversaryConfig) -> PairConstruction:
    """
    Two-dimensional construction for W = 0 and L_T < D.

    X = [-L_T/2, L_T/2] x [-sqrt(D^2 - L_T^2)/2, sqrt(D^2 - L_T^2)/2] has
    diameter D. Sequence 1 centers stage 1 at (M, 0) and every later stage at
    (L_T/2, 0), with M = D + (1 + beta/alpha) L_T/2 outside X; sequence 2 is
    the mirror image.
    """
    if not 0 < cfg.L_T < cfg.D:
        raise ValueError(f"Pair construction needs 0 < L_T < D, got L_T={cfg.L_T}, D={cfg.D}")
    half_x = cfg.L_T / 2.0
    half_y = math.sqrt(cfg.D ** 2 - cfg.L_T ** 2) / 2.0
    space = ActionSpace(lower=[-half_x, -half_y], upper=[half_x, half_y])
    M = cfg.D + (1.0 + cfg.beta / cfg.alpha) * cfg.L_T / 2.0
    G = cfg.alpha * math.sqrt((M + cfg.D / 2.0) ** 2 + cfg.D ** 2)
    params = FunctionClassParams(alpha=cfg.alpha, l=cfg.alpha, G=G)

    sequences = []
    for sign in (1.0, -1.0):
        centers = np.zeros((cfg.T, 2))
        centers[0, 0] = sign * M
        centers[1:, 0] = sign * half_x
        costs = [QuadraticStageCost.isotropic(cfg.alpha, center) for center in centers]
        sequences.append(CostSequence(costs=costs, beta=cfg.beta, x0=np.zeros(2),
                                      space=space, class_params=params))
    return PairConstruction(sequences=tuple(sequences), probabilities=(0.5, 0.5), M=M, G=G)


@dataclass(frozen=True)
class SegmentIndexSet:
    indices: Tuple[int, ...]
    delta: int
    bound: Optional[float]

    @property
    def count(self) -> int:
        return len(self.indices)


def segment_index_set_J(cfg: AdversaryConfig) -> SegmentIndexSet:
    """
    J = {1 <= t <= T-W : t+W = 1 mod Delta}, the stages whose W-ahead cost
    opens a fresh segment.

    Checks |J| >= L_T/(12D) when W >= 1, T >= 2W, L_T >= 2D and
    |J| >= L_T/(4D) when W = 0.
    """
    delta, _ = cfg.segments()
    indices = tuple(t for t in range(1, cfg.T - cfg.W + 1) if (t + cfg.W - 1) % delta == 0)
    bound = None
    if cfg.W == 0:
        bound = cfg.L_T / (4.0 * cfg.D)
    elif cfg.T >= 2 * cfg.W and cfg.L_T >= 2 * cfg.D:
        bound = cfg.L_T / (12.0 * cfg.D)
    if bound is not None and len(indices) < bound:
        raise RuntimeError(f"|J|={len(indices)} below its guaranteed size {bound:.4g} for {cfg}")
    return SegmentIndexSet(indices=indices, delta=delta, bound=bound)


# ---------------------------------------------------------------------------
# Bounds
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BoundReport:
    kappa: float
    delta: float
    L: float
    Q_f: float
    Q_f_lower: float
    rho: float
    tau: float
    ogd_upper: float
    rhgd_upper: float
    rhag_upper: float
    lb_w0: float
    lb_w: float
    mc_expectation_bound: float
    W_lower: Optional[float] = None
    W_rhag: Optional[float] = None


def bound_report(alpha: float, l: float, beta: float, G: float, D: float, L_T: float,
                 W: int, target_regret: Optional[float] = None) -> BoundReport:
    """
    Evaluate the regret bounds for class F_X(alpha, l, G) at window W.

    Upper bounds use Q_f = (l + 4 beta)/alpha; lower bounds use the l = alpha
    form (alpha + 4 beta)/alpha. With a target regret, also reports the window
    any algorithm needs (W_lower) and a window sufficient for RHAG (W_rhag).
    """
    if alpha <= 0 or l <= 0 or G <= 0 or D <= 0 or L_T <= 0:
        raise ValueError("alpha, l, G, D and L_T must be positive")
    if beta < 0:
        raise ValueError(f"beta must be >= 0, got {beta}")
    if alpha > l:
        raise ValueError(f"alpha must not exceed l, got alpha={alpha}, l={l}")
    if W < 0:
        raise ValueError(f"W must be >= 0, got {W}")

    kappa = math.sqrt(1.0 - alpha / l)
    delta = (beta / l + 1.0) * G / (1.0 - kappa)
    L = l + 4.0 * beta
    Q_f = L / alpha
    Q_f_lower = (alpha + 4.0 * beta) / alpha
    root = math.sqrt(Q_f_lower)
    rho = (root - 1.0) / (root + 1.0)
    tau = alpha ** 2 * (1.0 - rho) ** 2 / (32.0 * (alpha + beta) ** 2)
    decay = rho ** (2 * W)

    if L_T >= D:
        lb_w = tau * alpha * D / 3.0 * decay * L_T
    else:
        lb_w = tau * alpha / 3.0 * decay * L_T ** 2

    W_lower = W_rhag = None
    if target_regret is not None:
        if target_regret <= 0:
            raise ValueError(f"target_regret must be positive, got {target_regret}")
        W_lower = max(0.0, (root - 1.0) / 4.0 *
                      math.log(tau * alpha * D / 3.0 * L_T / target_regret))
        W_rhag = max(0.0, math.sqrt(Q_f) * math.log(2.0 * delta * L_T / target_regret))

    return BoundReport(
        kappa=kappa, delta=delta, L=L, Q_f=Q_f, Q_f_lower=Q_f_lower, rho=rho, tau=tau,
        ogd_upper=delta * L_T,
        rhgd_upper=Q_f * delta * (1.0 - 1.0 / Q_f) ** W * L_T,
        rhag_upper=2.0 * delta * (1.0 - 1.0 / math.sqrt(Q_f)) ** W * L_T,
        lb_w0=tau * G * L_T,
        lb_w=lb_w,
        mc_expectation_bound=(alpha * D / 96.0 * (1.0 - rho) ** 2 *
                              (alpha / (alpha + beta)) ** 2 * L_T * decay),
        W_lower=W_lower, W_rhag=W_rhag,
    )


# ---------------------------------------------------------------------------
# Monte Carlo
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MonteCarloRow:
    algorithm: str
    W: int
    realizations: int
    mean_regret: float
    stderr: float
    bound: float
    passed: bool


CONSTRUCTIONS = ("segmented", "jump_once", "w0_pair")


def _summarize(name: str, W: int, regrets: np.ndarray, bound: float) -> MonteCarloRow:
    mean = float(regrets.mean())
    stderr = float(regrets.std(ddof=1) / np.sqrt(len(regrets))) if len(regrets) > 1 else 0.0
    return MonteCarloRow(algorithm=name, W=W, realizations=len(regrets), mean_regret=mean,
                         stderr=stderr, bound=bound, passed=mean >= bound - 3.0 * stderr)


def lowerbound_monte_carlo(cfg: AdversaryConfig, runners: Dict[str, Runner],
                           realizations: int, construction: str = "segmented",
                           tolerance: float = 1e-10,
                           progress_callback=None) -> List[MonteCarloRow]:
    """
    Estimate expected regret of each runner on random adversarial instances.

    Every runner sees the same realizations. `runners` maps an algorithm name
    to a callable (seq, W) -> Trajectory. The w0_pair construction has exactly
    two equally likely instances, so its mean is exact and `realizations` is
    ignored.

    Returns:
        One MonteCarloRow per algorithm, with passed = mean >= bound - 3 stderr.
    """
    if construction not in CONSTRUCTIONS:
        raise ValueError(f"Unknown construction {construction!r}, expected one of {CONSTRUCTIONS}")
    if not runners:
        raise ValueError("At least one algorithm is required")

    if construction == "w0_pair":
        if cfg.W != 0:
            raise ValueError(f"The pair construction targets W = 0, got W={cfg.W}")
        pair = w0_pair_construction(cfg)
        bound = bound_report(cfg.alpha, cfg.alpha, cfg.beta, pair.G, cfg.D, cfg.L_T, 0).lb_w0
        rows = []
        for name, runner in runners.items():
            regrets = [evaluate_regret(seq, runner(seq, 0), solve(seq, tolerance), tolerance).regret
                       for seq in pair.sequences]
            mean = float(np.dot(pair.probabilities, regrets))
            rows.append(MonteCarloRow(algorithm=name, W=0, realizations=2, mean_regret=mean,
                                      stderr=0.0, bound=bound, passed=mean >= bound))
        return rows

    if realizations < 2:
        raise ValueError(f"Need at least 2 realizations, got {realizations}")
    if construction == "segmented":
        bound = bound_report(cfg.alpha, cfg.alpha, cfg.beta, cfg.alpha * cfg.D, cfg.D,
                             cfg.L_T, cfg.W).mc_expectation_bound
        generate = lambda rng: segmented_theta(cfg, rng)
    else:
        nu = min(cfg.D, cfg.L_T)
        bound = jump_once_expectation_bound(cfg.alpha, cfg.beta, cfg.W, nu, cfg.T)
        generate = lambda rng: jump_once_theta(cfg, nu, rng)

    regrets = {name: np.empty(realizations) for name in runners}
    for i, rng in enumerate(realization_rngs(cfg.seed, realizations)):
        seq = generate(rng)
        optimum = solve(seq, tolerance)
        for name, runner in runners.items():
            regrets[name][i] = evaluate_regret(seq, runner(seq, cfg.W), optimum, tolerance).regret
        if progress_callback:
            progress_callback(i + 1, realizations)

    rows = [_summarize(name, cfg.W, values, bound) for name, values in regrets.items()]
    for row in rows:
        if not row.passed:
            logger.warning("%s at W=%d: mean regret %.4g below bound %.4g - 3*%.3g",
                           row.algorithm, row.W, row.mean_regret, row.bound, row.stderr)
    return rows


def main():
    parser = argparse.ArgumentParser(description="Regret bound constants for one setting")
    parser.add_argument("--alpha", type=float, default=1.0)
    parser.add_argument("--l", type=float, default=None, help="Smoothness (default alpha)")
    parser.add_argument("--beta", type=float, default=1.0)
    parser.add_argument("--G", type=float, default=None, help="Gradient bound (default alpha*D)")
    parser.add_argument("--D", type=float, default=1.0)
    parser.add_argument("--L-T", type=float, default=10.0, dest="L_T")
    parser.add_argument("--T", type=int, default=40)
    parser.add_argument("--w", type=int, default=0)
    parser.add_argument("--target", type=float, default=None, help="Target regret")
    args = parser.parse_args()

    l = args.l if args.l is not None else args.alpha
    G = args.G if args.G is not None else args.alpha * args.D
    report = bound_report(args.alpha, l, args.beta, G, args.D, args.L_T, args.w, args.target)
    print(f"Bounds for alpha={args.alpha}, l={l}, beta={args.beta}, G={G}, "
          f"D={args.D}, L_T={args.L_T}, W={args.w}")
    for name, value in vars(report).items():
        if value is not None:
            print(f"  {name:>22}: {value:.6g}")
    cfg = AdversaryConfig(T=args.T, W=args.w, alpha=args.alpha, beta=args.beta,
                          D=args.D, L_T=args.L_T)
    if args.L_T >= args.D:
        J = segment_index_set_J(cfg)
        print(f"  Delta={J.delta}, |J|={J.count}")


if __name__ == "__main__":
    main()
