"""
scenarios.py — Instance builders: economic dispatch, tracking, the 16-stage example.

Economic dispatch charges generator costs plus an imbalance penalty,

    f_t(x) = sum_i (a_i x_i^2 + b_i x_i + c_i) + xi_t (sum_i x_i + r_t - d_t)^2,

with ramping penalised by the switching cost. Generator outputs range over
[0, capacity_i]. Demand d_t and renewable supply r_t come from CSV files
(columns `timestamp,value`, one row per 5-minute stage, no resampling) or
from the synthetic generators in this module.

Trajectory tracking minimizes 1/2 ||x_t - y_t||^2 plus the control energy
beta/2 ||x_t - x_{t-1}||^2. Tracking formulations that charge
||x_{t+1} - x_t||^2 from t = 0 are the same problem after shifting the index
by one, so both use the same cost sequence.

Usage:
    python scenarios.py --T 1440 --seed 7 --output-dir data/
"""

import argparse
import csv
import os
from dataclasses import dataclass
from datetime import datetime, timedelta
from enum import Enum
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from cost_model import ActionSpace, CostSequence, QuadraticStageCost, isotropic_sequence

# Three conventional units: c(x) = a x^2 + b x + c (cost per MW^2, per MW, flat)
DEFAULT_GENERATORS = ((2.0, 15.0, 10.0), (2.0, 10.0, 27.0), (2.0, 6.0, 21.0))
DEFAULT_CAPACITIES = (2300.0, 2900.0, 4100.0)   # MW
DEFAULT_X0 = (1200.0, 1000.0, 1400.0)           # MW
DEFAULT_XI = 0.5
DEFAULT_BETA = 10.0
DEFAULT_HORIZON = 1440                          # five days of 5-minute stages
STAGE_MINUTES = 5

SPECIAL_THETAS = (0, 0, 4, 0, 0, 4, 0, 4, 0, 4, 0, 4, 4, 0, 4, 4)
SPECIAL_BETA = 13.0


@dataclass
class DispatchSpec:
    """Generators, limits and the demand/renewable series of a dispatch instance."""
    demand: np.ndarray
    renewable: np.ndarray
    generators: Sequence[Tuple[float, float, float]] = DEFAULT_GENERATORS
    capacities: Sequence[float] = DEFAULT_CAPACITIES
    xi: Union[float, Sequence[float]] = DEFAULT_XI
    beta: float = DEFAULT_BETA
    x0: Sequence[float] = DEFAULT_X0


def build_dispatch(spec: DispatchSpec) -> CostSequence:
    """
    Dispatch cost sequence over the box [0, capacity].

    In matrix form P = diag(2a) + 2 xi 11', q = b + 2 xi (r - d) 1,
    c = sum c_i + xi (r - d)^2. `xi` may be a per-stage series.
    """
    demand = np.asarray(spec.demand, dtype=float)
    renewable = np.asarray(spec.renewable, dtype=float)
    if demand.ndim != 1 or demand.shape != renewable.shape:
        raise ValueError(f"Demand and renewable series must have equal length, "
                         f"got {demand.shape} and {renewable.shape}")
    T = demand.shape[0]
    coeffs = np.asarray(spec.generators, dtype=float)
    if coeffs.ndim != 2 or coeffs.shape[1] != 3:
        raise ValueError(f"Generators must be (a, b, c) triples, got shape {coeffs.shape}")
    a, b, c = coeffs.T
    n = a.shape[0]
    if np.any(a <= 0):
        raise ValueError(f"Quadratic coefficients must be positive, got {a}")
    capacities = np.asarray(spec.capacities, dtype=float)
    if capacities.shape != (n,) or np.any(capacities <= 0):
        raise ValueError(f"Need {n} positive capacities, got {spec.capacities}")
    xi = np.broadcast_to(np.asarray(spec.xi, dtype=float), (T,))
    if np.any(xi < 0):
        raise ValueError("Imbalance penalty xi must be >= 0")

    ones = np.ones((n, n))
    imbalance = renewable - demand
    costs = []
    for t in range(T):
        costs.append(QuadraticStageCost(
            P=np.diag(2.0 * a) + 2.0 * xi[t] * ones,
            q=b + 2.0 * xi[t] * imbalance[t],
            c=c.sum() + xi[t] * imbalance[t] ** 2,
        ))
    space = ActionSpace(lower=np.zeros(n), upper=capacities)
    return CostSequence(costs=costs, beta=spec.beta, x0=np.asarray(spec.x0, dtype=float),
                        space=space)


def build_special_example() -> CostSequence:
    """16 stages of 0.5 (x - theta_t)^2 on [0, 4] with beta = 13, x_0 = 0."""
    return isotropic_sequence(np.array(SPECIAL_THETAS, dtype=float), alpha=1.0,
                              beta=SPECIAL_BETA, x0=0.0, space=ActionSpace.interval(0.0, 4.0))


@dataclass
class TrackingSpec:
    """Target positions y_t (T x n, or length T for scalars) inside a box."""
    targets: np.ndarray
    beta: float
    x0: Sequence[float]
    lower: Sequence[float]
    upper: Sequence[float]


def build_tracking(spec: TrackingSpec) -> CostSequence:
    """f_t(x) = 1/2 ||x - y_t||^2, so alpha = l = 1."""
    targets = np.asarray(spec.targets, dtype=float)
    if targets.ndim == 1:
        targets = targets.reshape(-1, 1)
    space = ActionSpace(lower=spec.lower, upper=spec.upper)
    return isotropic_sequence(targets, alpha=1.0, beta=spec.beta,
                              x0=np.asarray(spec.x0, dtype=float), space=space)


# ---------------------------------------------------------------------------
# Traces
# ---------------------------------------------------------------------------

class TraceProfile(Enum):
    DIURNAL_DEMAND = "diurnal_demand"
    GUSTY_WIND = "gusty_wind"


@dataclass
class DiurnalDemandParams:
    base: float = 6500.0        # MW
    amplitude: float = 1200.0   # MW
    period: int = 288           # stages per day
    noise: float = 80.0         # MW, i.i.d. Gaussian


@dataclass
class GustyWindParams:
    mean: float = 1800.0        # MW
    reversion: float = 0.02     # pull toward the mean per stage
    volatility: float = 120.0   # MW per stage
    max_output: float = 4500.0  # MW, installed capacity


def synth_traces(T: int, seed: int, profile: Union[TraceProfile, str],
                 params=None) -> np.ndarray:
    """
    Deterministic synthetic series of length T.

    DiurnalDemand: base + amplitude * sin(2 pi t / period - pi/2) + noise,
    lowest at stage 0 (midnight).
    GustyWind: w_{t+1} = clip(w_t + reversion (mean - w_t) + volatility * eps, 0, max),
    starting at the mean.
    """
    if T < 1:
        raise ValueError(f"T must be >= 1, got {T}")
    profile = TraceProfile(profile)
    rng = np.random.Generator(np.random.Philox(seed))
    stages = np.arange(T)

    if profile is TraceProfile.DIURNAL_DEMAND:
        p = params or DiurnalDemandParams()
        cycle = np.sin(2.0 * np.pi * stages / p.period - np.pi / 2.0)
        return p.base + p.amplitude * cycle + p.noise * rng.standard_normal(T)

    p = params or GustyWindParams()
    shocks = rng.standard_normal(T)
    series = np.empty(T)
    w = p.mean
    for t in range(T):
        series[t] = w
        w = float(np.clip(w + p.reversion * (p.mean - w) + p.volatility * shocks[t],
                          0.0, p.max_output))
    return series


def read_trace_csv(path: str) -> np.ndarray:
    """Read the `value` column of a `timestamp,value` CSV."""
    if not os.path.exists(path):
        raise FileNotFoundError(f"Trace file not found: {path}")
    with open(path) as f:
        reader = csv.DictReader(f)
        rows = list(reader)
    if not rows:
        raise ValueError(f"Trace file is empty: {path}")
    missing = [col for col in ("timestamp", "value") if col not in rows[0]]
    if missing:
        raise ValueError(f"Trace file missing required columns: {missing}")
    try:
        return np.array([float(row["value"]) for row in rows])
    except ValueError as e:
        raise ValueError(f"Non-numeric value in {path}: {e}") from e


def write_trace_csv(path: str, values, start: str = "2020-01-01T00:00:00") -> str:
    """Write a series with 5-minute timestamps from `start`."""
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    t0 = datetime.fromisoformat(start)
    with open(path, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(["timestamp", "value"])
        for k, value in enumerate(values):
            stamp = t0 + timedelta(minutes=STAGE_MINUTES * k)
            writer.writerow([stamp.isoformat(), f"{float(value):.6f}"])
    return path


def synthetic_dispatch_spec(T: int = DEFAULT_HORIZON, seed: int = 0,
                            demand_params: Optional[DiurnalDemandParams] = None,
                            wind_params: Optional[GustyWindParams] = None,
                            **overrides) -> DispatchSpec:
    """Dispatch spec driven by synthetic demand and wind; the two series use seeds seed, seed+1."""
    demand = synth_traces(T, seed, TraceProfile.DIURNAL_DEMAND, demand_params)
    renewable = synth_traces(T, seed + 1, TraceProfile.GUSTY_WIND, wind_params)
    return DispatchSpec(demand=demand, renewable=renewable, **overrides)


def main():
    parser = argparse.ArgumentParser(description="Write synthetic demand and wind traces")
    parser.add_argument("--T", type=int, default=DEFAULT_HORIZON, help="Number of stages")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--output-dir", default="data")
    args = parser.parse_args()

    demand = synth_traces(args.T, args.seed, TraceProfile.DIURNAL_DEMAND)
    wind = synth_traces(args.T, args.seed + 1, TraceProfile.GUSTY_WIND)
    demand_path = write_trace_csv(os.path.join(args.output_dir, "demand.csv"), demand)
    wind_path = write_trace_csv(os.path.join(args.output_dir, "wind.csv"), wind)
    print(f"Demand: {demand_path} ({args.T} stages, {demand.min():.0f}-{demand.max():.0f} MW)")
    print(f"Wind:   {wind_path} ({args.T} stages, {wind.min():.0f}-{wind.max():.0f} MW)")


if __name__ == "__main__":
    main()
