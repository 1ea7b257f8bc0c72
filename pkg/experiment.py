"""
experiment.py — Command-line experiment runner.

Runs the online algorithms against the hindsight optimum and writes CSV tables
and charts to the output directory.

Subcommands:
    run              regret, online and offline cost per (algorithm, W)      -> run.csv
    sweep            regret against W with the upper-bound curves          -> sweep.csv/.svg/.png
    lowerbound       Monte-Carlo regret on adversarial instances           -> lowerbound.csv
    bench            per-stage wall time or gradient evaluations           -> bench.csv
    export-instance  write the selected instance as JSON
    traces           synthetic demand and wind series                      -> demand.csv, wind.csv, traces.svg

Instances: special (16-stage example), dispatch (synthetic or CSV-driven
economic dispatch), tracking, or a path to an instance JSON file.

Exit codes: 0 success, 2 configuration or input error, 3 numerical failure.

Usage:
    python experiment.py run --instance special --algos rhgd,rhag,mpc --w 0-12
    python experiment.py sweep --instance dispatch --algos rhgd,rhag,mpc --w 0-10 --jobs 4
    python experiment.py lowerbound --algos ogd,rhag --w 0,1,2 --realizations 1000
    python experiment.py bench --instance dispatch --w 5,10 --count-gradients
    python experiment.py export-instance --instance special --out output/special.json
"""

import argparse
import csv
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional

import numpy as np
import yaml

from adversary import AdversaryConfig, bound_report, lowerbound_monte_carlo
from cost_model import CostSequence, load_instance, path_length, save_instance
from descent import ConvergenceError
from mpc import MpcConfig, run_mpc
from offline import solve
from online import (AlgoConfig, InformationLeakError, StageRecorder, evaluate_regret,
                    run_follow_minimizer, run_ogd, run_rhag, run_rhgd)
from plot import Chart, save_chart
from scenarios import (DiurnalDemandParams, DispatchSpec, GustyWindParams, TraceProfile,
                       TrackingSpec, build_dispatch, build_special_example, build_tracking,
                       read_trace_csv, synth_traces, write_trace_csv)

logger = logging.getLogger(__name__)

ALGORITHM_NAMES = ("ogd", "rhgd", "rhag", "mpc", "follow")
BUILTIN_INSTANCES = ("special", "dispatch", "tracking")
NEEDS_WINDOW = ("mpc", "follow")

EXIT_CONFIG = 2
EXIT_NUMERICAL = 3

DEFAULTS = {
    "instance": "special",
    "seed": 0,
    "algorithms": {
        "names": ["rhgd", "rhag", "mpc"],
        "w_values": "0-10",
        "gamma": None,
        "eta": None,
        "momentum": None,
    },
    "oracle": {"tolerance": 1e-10, "max_iters": 200000},
    "mpc": {"terminal": "zero", "anchor_weight": 0.0,
            "inner_tolerance": 1e-9, "inner_max_iters": 10000},
    "dispatch": {
        "T": 1440,
        "xi": 0.5,
        "beta": 10.0,
        "generators": [[2.0, 15.0, 10.0], [2.0, 10.0, 27.0], [2.0, 6.0, 21.0]],
        "capacities": [2300.0, 2900.0, 4100.0],
        "x0": [1200.0, 1000.0, 1400.0],
        "demand_csv": None,
        "renewable_csv": None,
    },
    "tracking": {"T": 50, "beta": 1.0, "step_at": 25, "lower": -2.0, "upper": 2.0},
    "traces": {
        "demand": {"base": 6500.0, "amplitude": 1200.0, "period": 288, "noise": 80.0},
        "wind": {"mean": 1800.0, "reversion": 0.02, "volatility": 120.0, "max_output": 4500.0},
    },
    "lowerbound": {"alpha": 1.0, "beta": 1.0, "D": 1.0, "T": 40, "L_T": 10.0,
                   "realizations": 1000, "construction": "segmented",
                   "algorithms": ["ogd", "rhag"], "w_values": "0-2"},
    "output": {"dir": "output"},
}


def _merge(base: dict, override: dict) -> dict:
    merged = dict(base)
    for key, value in (override or {}).items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _merge(merged[key], value)
        else:
            merged[key] = value
    return merged


def load_config(extra_path: Optional[str] = None) -> dict:
    """
    Load config.yaml next to this file (built-in defaults if missing), then
    overlay an optional JSON or YAML file.
    """
    config = DEFAULTS
    config_path = os.path.join(os.path.dirname(os.path.abspath(__file__)), "config.yaml")
    if os.path.exists(config_path):
        with open(config_path) as f:
            config = _merge(config, yaml.safe_load(f) or {})
        logger.debug("Loaded %s", config_path)
    if extra_path:
        if not os.path.exists(extra_path):
            raise FileNotFoundError(f"Config file not found: {extra_path}")
        with open(extra_path) as f:
            try:
                override = yaml.safe_load(f) or {}
            except yaml.YAMLError as e:
                raise ValueError(f"Config file is not valid JSON or YAML: {extra_path}: {e}") from e
        if not isinstance(override, dict):
            raise ValueError(f"Config file must hold a mapping: {extra_path}")
        config = _merge(config, override)
        logger.debug("Applied overrides from %s", extra_path)
    return config


def parse_w_values(text) -> List[int]:
    """'0-10', '0,2,5' or a YAML list into a sorted list of windows."""
    if isinstance(text, int):
        return [text]
    if isinstance(text, (list, tuple)):
        values = [int(v) for v in text]
    else:
        values = []
        for part in str(text).split(","):
            part = part.strip()
            if not part:
                continue
            if "-" in part:
                lo, hi = part.split("-", 1)
                values.extend(range(int(lo), int(hi) + 1))
            else:
                values.append(int(part))
    if not values:
        raise ValueError(f"No prediction windows in {text!r}")
    if any(v < 0 for v in values):
        raise ValueError(f"Prediction windows must be >= 0, got {text!r}")
    return sorted(set(values))


@dataclass
class ExperimentConfig:
    """Everything one command needs, resolved from config files and flags."""
    instance: str = "special"
    algorithms: List[str] = field(default_factory=lambda: ["rhgd", "rhag", "mpc"])
    w_values: List[int] = field(default_factory=lambda: list(range(11)))
    tolerance: float = 1e-10
    oracle_max_iters: int = 200000
    seed: int = 0
    output_dir: str = "output"
    realizations: int = 1000
    count_gradients: bool = False
    jobs: int = 1
    gamma: Optional[float] = None
    eta: Optional[float] = None
    momentum: Optional[float] = None
    mpc: dict = field(default_factory=lambda: dict(DEFAULTS["mpc"]))
    dispatch: dict = field(default_factory=lambda: dict(DEFAULTS["dispatch"]))
    tracking: dict = field(default_factory=lambda: dict(DEFAULTS["tracking"]))
    traces: dict = field(default_factory=lambda: dict(DEFAULTS["traces"]))
    lowerbound: dict = field(default_factory=lambda: dict(DEFAULTS["lowerbound"]))

    def __post_init__(self):
        if not self.algorithms:
            raise ValueError("At least one algorithm is required")
        unknown = [a for a in self.algorithms if a not in ALGORITHM_NAMES]
        if unknown:
            raise ValueError(f"Unknown algorithms {unknown}, expected a subset of {ALGORITHM_NAMES}")
        if any(w < 0 for w in self.w_values):
            raise ValueError(f"Prediction windows must be >= 0, got {self.w_values}")
        if self.tolerance <= 0:
            raise ValueError(f"Oracle tolerance must be positive, got {self.tolerance}")
        if self.jobs < 1:
            raise ValueError(f"jobs must be >= 1, got {self.jobs}")

    @classmethod
    def from_dict(cls, config: dict) -> "ExperimentConfig":
        algos = config["algorithms"]
        return cls(
            instance=str(config["instance"]),
            algorithms=list(algos["names"]),
            w_values=parse_w_values(algos["w_values"]),
            tolerance=float(config["oracle"]["tolerance"]),
            oracle_max_iters=int(config["oracle"]["max_iters"]),
            seed=int(config["seed"]),
            output_dir=config["output"]["dir"],
            realizations=int(config["lowerbound"]["realizations"]),
            gamma=algos.get("gamma"),
            eta=algos.get("eta"),
            momentum=algos.get("momentum"),
            mpc=dict(config["mpc"]),
            dispatch=dict(config["dispatch"]),
            tracking=dict(config["tracking"]),
            traces=dict(config["traces"]),
            lowerbound=dict(config["lowerbound"]),
        )


# ---------------------------------------------------------------------------
# Instances and algorithms
# ---------------------------------------------------------------------------

def build_instance(cfg: ExperimentConfig) -> CostSequence:
    """Resolve the instance name to a cost sequence."""
    name = cfg.instance
    if name == "special":
        return build_special_example()
    if name == "dispatch":
        d = cfg.dispatch
        T = int(d["T"])
        if d.get("demand_csv"):
            demand = read_trace_csv(d["demand_csv"])
        else:
            demand = synth_traces(T, cfg.seed, TraceProfile.DIURNAL_DEMAND,
                                  DiurnalDemandParams(**cfg.traces["demand"]))
        if d.get("renewable_csv"):
            renewable = read_trace_csv(d["renewable_csv"])
        else:
            renewable = synth_traces(T, cfg.seed + 1, TraceProfile.GUSTY_WIND,
                                     GustyWindParams(**cfg.traces["wind"]))
        spec = DispatchSpec(demand=demand, renewable=renewable,
                            generators=[tuple(g) for g in d["generators"]],
                            capacities=d["capacities"], xi=d["xi"], beta=d["beta"], x0=d["x0"])
        return build_dispatch(spec)
    if name == "tracking":
        tr = cfg.tracking
        T = int(tr["T"])
        targets = np.where(np.arange(1, T + 1) < int(tr["step_at"]), 0.0, 1.0)
        return build_tracking(TrackingSpec(targets=targets, beta=float(tr["beta"]), x0=[0.0],
                                           lower=[tr["lower"]], upper=[tr["upper"]]))
    if name.endswith(".json") or os.path.exists(name):
        return load_instance(name)
    raise ValueError(f"Unknown instance {name!r}: use {BUILTIN_INSTANCES} or a JSON file")


def run_algorithm(name: str, seq: CostSequence, W: int, cfg: ExperimentConfig,
                  recorder: Optional[StageRecorder] = None):
    """Dispatch one algorithm by name."""
    algo = AlgoConfig(W=W, gamma=cfg.gamma, eta=cfg.eta, momentum=cfg.momentum)
    if name == "ogd":
        return run_ogd(seq, replace(algo, W=0), recorder)
    if name == "rhgd":
        return run_rhgd(seq, algo, recorder)
    if name == "rhag":
        return run_rhag(seq, algo, recorder)
    if name == "mpc":
        m = cfg.mpc
        return run_mpc(seq, MpcConfig(W=W, terminal=m["terminal"],
                                      anchor_weight=float(m["anchor_weight"]),
                                      inner_tolerance=float(m["inner_tolerance"]),
                                      inner_max_iters=int(m["inner_max_iters"])), recorder)
    if name == "follow":
        return run_follow_minimizer(seq, W, recorder)
    raise ValueError(f"Unknown algorithm {name!r}")


def _tasks(cfg: ExperimentConfig) -> List[tuple]:
    tasks = [(name, W) for name in cfg.algorithms for W in cfg.w_values
             if not (name in NEEDS_WINDOW and W == 0)]
    if not tasks:
        raise ValueError("No runnable (algorithm, W) pairs: mpc and follow need W >= 1")
    return tasks


def _evaluate(job):
    name, W, seq, offline, cfg = job
    recorder = StageRecorder(seq.T)
    traj = run_algorithm(name, seq, W, cfg, recorder)
    record = evaluate_regret(seq, traj, offline, cfg.tolerance, recorder.seconds)
    return name, W, record, recorder


def _run_all(cfg: ExperimentConfig, seq: CostSequence, progress_callback=None) -> List[tuple]:
    offline = solve(seq, cfg.tolerance, cfg.oracle_max_iters)
    jobs = [(name, W, seq, offline, cfg) for name, W in _tasks(cfg)]
    results = []
    if cfg.jobs > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            for i, result in enumerate(pool.map(_evaluate, jobs)):
                results.append(result)
                if progress_callback:
                    progress_callback(i + 1, len(jobs))
    else:
        for i, job in enumerate(jobs):
            results.append(_evaluate(job))
            if progress_callback:
                progress_callback(i + 1, len(jobs))
    order = {name: i for i, name in enumerate(ALGORITHM_NAMES)}
    return sorted(results, key=lambda r: (order[r[0]], r[1]))


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value)).lower()
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return repr(float(value))


def write_csv(path: str, header: List[str], rows: List[list]) -> str:
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    with open(path, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])
    return path


def _print_progress(current: int, total: int):
    print(f"  [{current}/{total}]", end="\r" if current < total else "\n", flush=True)


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def cmd_run(cfg: ExperimentConfig, seq: Optional[CostSequence] = None) -> str:
    """One row per (algorithm, W): regret, costs, mean stage time and evaluations."""
    seq = seq if seq is not None else build_instance(cfg)
    print(f"Running {', '.join(cfg.algorithms)} on {cfg.instance} "
          f"(T={seq.T}, n={seq.n}), W in {cfg.w_values}")
    results = _run_all(cfg, seq, _print_progress)
    rows = [[name, W, rec.regret, rec.online_cost, rec.offline_cost,
             float(np.mean(recorder.seconds)), float(np.mean(recorder.evaluations))]
            for name, W, rec, recorder in results]
    path = write_csv(os.path.join(cfg.output_dir, "run.csv"),
                     ["algorithm", "W", "regret", "online_cost", "offline_cost",
                      "mean_stage_seconds", "mean_stage_evaluations"], rows)
    print(f"  Results written to {path}")
    return path


def cmd_sweep(cfg: ExperimentConfig, seq: Optional[CostSequence] = None) -> Dict[str, str]:
    """Regret per algorithm against W, with the upper bounds of RHGD and RHAG."""
    seq = seq if seq is not None else build_instance(cfg)
    print(f"Sweeping W in {cfg.w_values} on {cfg.instance} (T={seq.T}, n={seq.n})")
    results = _run_all(cfg, seq, _print_progress)
    regret = {(name, W): rec.regret for name, W, rec, _ in results}

    params = seq.class_params
    budget = path_length(seq)
    bounds = {}
    if budget > 0:
        for W in cfg.w_values:
            report = bound_report(params.alpha, params.l, seq.beta, params.G,
                                  seq.space.diameter, budget, W)
            bounds[W] = (report.rhgd_upper, report.rhag_upper)

    header = ["W"] + [f"{name}_regret" for name in cfg.algorithms] + ["rhgd_bound", "rhag_bound"]
    rows = []
    for W in cfg.w_values:
        row = [W] + [regret.get((name, W)) for name in cfg.algorithms]
        row += list(bounds.get(W, (None, None)))
        rows.append(row)
    csv_path = write_csv(os.path.join(cfg.output_dir, "sweep.csv"), header, rows)

    chart = Chart(title=f"Dynamic regret vs prediction window ({cfg.instance})",
                  x_label="prediction window W", y_label="dynamic regret", log_y=True)
    for name in cfg.algorithms:
        points = [(W, regret[(name, W)]) for W in cfg.w_values if (name, W) in regret]
        if points:
            chart.add(name, *zip(*points))
    if bounds:
        ws = sorted(bounds)
        if "rhgd" in cfg.algorithms:
            chart.add("rhgd bound", ws, [bounds[W][0] for W in ws], dashed=True)
        if "rhag" in cfg.algorithms:
            chart.add("rhag bound", ws, [bounds[W][1] for W in ws], dashed=True)
    svg_path = save_chart(chart, os.path.join(cfg.output_dir, "sweep.svg"))
    png_path = save_chart(chart, os.path.join(cfg.output_dir, "sweep.png"))
    print(f"  Sweep written to {csv_path}, {svg_path}, {png_path}")
    return {"csv": csv_path, "svg": svg_path, "png": png_path}


def _lowerbound_task(job):
    adv_cfg, names, realizations, construction, cfg = job
    runners = {name: (lambda seq, W, name=name: run_algorithm(name, seq, W, cfg))
               for name in names}
    return lowerbound_monte_carlo(adv_cfg, runners, realizations, construction, cfg.tolerance)


def cmd_lowerbound(cfg: ExperimentConfig) -> str:
    """Monte-Carlo expected regret against the lower bound for each W."""
    lb = cfg.lowerbound
    names = cfg.algorithms
    construction = lb.get("construction", "segmented")
    jobs = []
    for W in cfg.w_values:
        adv_cfg = AdversaryConfig(T=int(lb["T"]), W=W, alpha=float(lb["alpha"]),
                                  beta=float(lb["beta"]), D=float(lb["D"]),
                                  L_T=float(lb["L_T"]), seed=cfg.seed)
        runnable = [n for n in names if not (n in NEEDS_WINDOW and W == 0)]
        if runnable:
            jobs.append((adv_cfg, runnable, cfg.realizations, construction, cfg))
    print(f"Lower-bound Monte Carlo ({construction}): {', '.join(names)}, "
          f"W in {cfg.w_values}, {cfg.realizations} realizations")

    rows = []
    if cfg.jobs > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            for result in pool.map(_lowerbound_task, jobs):
                rows.extend(result)
    else:
        for i, job in enumerate(jobs):
            rows.extend(_lowerbound_task(job))
            _print_progress(i + 1, len(jobs))
    order = {name: i for i, name in enumerate(ALGORITHM_NAMES)}
    rows.sort(key=lambda r: (order[r.algorithm], r.W))

    for r in rows:
        status = "pass" if r.passed else "FAIL"
        print(f"  {r.algorithm:>6} W={r.W:<3} mean={r.mean_regret:.4e} "
              f"stderr={r.stderr:.2e} bound={r.bound:.4e} {status}")
    path = write_csv(os.path.join(cfg.output_dir, "lowerbound.csv"),
                     ["algorithm", "W", "realizations", "mean_regret", "stderr", "bound", "passed"],
                     [[r.algorithm, r.W, r.realizations, r.mean_regret, r.stderr, r.bound, r.passed]
                      for r in rows])
    print(f"  Results written to {path}")
    return path


def cmd_bench(cfg: ExperimentConfig, seq: Optional[CostSequence] = None) -> str:
    """Per-stage cost of each algorithm: wall time, or gradient evaluations."""
    seq = seq if seq is not None else build_instance(cfg)
    print(f"Benchmarking {', '.join(cfg.algorithms)} on {cfg.instance} (T={seq.T})")
    rows = []
    for name, W in _tasks(cfg):
        recorder = StageRecorder(seq.T)
        run_algorithm(name, seq, W, cfg, recorder)
        if cfg.count_gradients:
            values = recorder.evaluations
            rows.append([name, W, float(np.mean(values)), float(np.median(values)),
                         int(np.max(values))])
        else:
            values = recorder.seconds
            rows.append([name, W, float(np.mean(values)), float(np.median(values))])
        print(f"  {name:>6} W={W:<3} mean={rows[-1][2]:.4g} median={rows[-1][3]:.4g}")
    if cfg.count_gradients:
        header = ["algorithm", "W", "mean_evaluations", "median_evaluations", "max_evaluations"]
    else:
        header = ["algorithm", "W", "mean_s", "median_s"]
    path = write_csv(os.path.join(cfg.output_dir, "bench.csv"), header, rows)
    print(f"  Results written to {path}")
    return path


def cmd_export_instance(cfg: ExperimentConfig, output_path: Optional[str] = None) -> str:
    seq = build_instance(cfg)
    name = os.path.splitext(os.path.basename(cfg.instance))[0]
    path = save_instance(seq, output_path or os.path.join(cfg.output_dir, f"{name}.json"))
    print(f"Instance written to {path} (T={seq.T}, n={seq.n})")
    return path


def cmd_traces(cfg: ExperimentConfig) -> Dict[str, str]:
    """Write the synthetic dispatch inputs and a chart of both series."""
    T = int(cfg.dispatch["T"])
    demand = synth_traces(T, cfg.seed, TraceProfile.DIURNAL_DEMAND,
                          DiurnalDemandParams(**cfg.traces["demand"]))
    wind = synth_traces(T, cfg.seed + 1, TraceProfile.GUSTY_WIND,
                        GustyWindParams(**cfg.traces["wind"]))
    demand_path = write_trace_csv(os.path.join(cfg.output_dir, "demand.csv"), demand)
    wind_path = write_trace_csv(os.path.join(cfg.output_dir, "wind.csv"), wind)
    chart = Chart(title="Synthetic demand and wind", x_label="stage (5 min)", y_label="MW")
    stages = np.arange(1, T + 1)
    chart.add("demand", stages, demand)
    chart.add("wind", stages, wind)
    svg_path = save_chart(chart, os.path.join(cfg.output_dir, "traces.svg"))
    print(f"Traces written to {demand_path}, {wind_path}, {svg_path}")
    return {"demand": demand_path, "wind": wind_path, "svg": svg_path}


COMMANDS = ("run", "sweep", "lowerbound", "bench", "export-instance", "traces")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description="Online optimization with prediction windows")
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--instance", help="special | dispatch | tracking | instance JSON")
    parser.add_argument("--algos", help="Comma-separated subset of " + ",".join(ALGORITHM_NAMES))
    parser.add_argument("--w", help="Prediction windows, e.g. 0-10 or 0,2,5")
    parser.add_argument("--seed", type=int)
    parser.add_argument("--tol", type=float, help="Offline oracle tolerance")
    parser.add_argument("--out", help="Output directory (export-instance: output file)")
    parser.add_argument("--realizations", type=int, help="Monte-Carlo realizations")
    parser.add_argument("--count-gradients", action="store_true",
                        help="bench: report gradient evaluations instead of wall time")
    parser.add_argument("--config", help="JSON or YAML file overriding config.yaml")
    parser.add_argument("--jobs", type=int, default=1, help="Worker processes")
    parser.add_argument("--verbose", action="store_true")
    return parser


def config_from_args(args: argparse.Namespace) -> ExperimentConfig:
    cfg = ExperimentConfig.from_dict(load_config(args.config))
    overrides = {"jobs": args.jobs, "count_gradients": args.count_gradients}
    if args.instance:
        overrides["instance"] = args.instance
    if args.algos:
        overrides["algorithms"] = [a.strip() for a in args.algos.split(",") if a.strip()]
    elif args.command == "lowerbound":
        overrides["algorithms"] = list(cfg.lowerbound["algorithms"])
    if args.w is not None:
        overrides["w_values"] = parse_w_values(args.w)
    elif args.command == "lowerbound":
        overrides["w_values"] = parse_w_values(cfg.lowerbound["w_values"])
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.tol is not None:
        overrides["tolerance"] = args.tol
    if args.out and args.command != "export-instance":
        overrides["output_dir"] = args.out
    if args.realizations is not None:
        overrides["realizations"] = args.realizations
    return replace(cfg, **overrides)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = config_from_args(args)
        if args.command == "run":
            cmd_run(cfg)
        elif args.command == "sweep":
            cmd_sweep(cfg)
        elif args.command == "lowerbound":
            cmd_lowerbound(cfg)
        elif args.command == "bench":
            cmd_bench(cfg)
        elif args.command == "export-instance":
            cmd_export_instance(cfg, args.out)
        elif args.command == "traces":
            cmd_traces(cfg)
    except (ValueError, FileNotFoundError) as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except (ConvergenceError, InformationLeakError) as e:
        print(f"Numerical failure: {e}", file=sys.stderr)
        return EXIT_NUMERICAL
    return 0


if __name__ == "__main__":
    sys.exit(main())
