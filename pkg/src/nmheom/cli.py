"""Configuration-driven experiment runner with CSV/JSON outputs.

Subcommands ``single`` and ``sweep`` evaluate the non-Markovianity measure
at one parameter point or along one axis (delta, chi, or gamma0).  All
defaults equal the baseline figure parameters (epsilon=2, lam=0.1,
gamma0=0.02, t_c=50), so an empty config file reproduces them.  Outputs are
deterministic for a fixed config and seed; wall-clock runtime is kept out
of the scientific outputs and written to ``run_meta.json`` instead.

Exit codes: 0 success, 2 config error, 3 numerical divergence, 4 IO error.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import math
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

import numpy as np

from . import __version__
from .bath import BathModel, Statistics
from .errors import ConfigError, DepthConvergenceError, NumericalDivergenceError
from .heom import HierarchyPropagator, PropagatorConfig, converged_depth
from .measure import PairSampler, maximize, pair_distance_series, pair_states
from .operators import CouplingOperator, EXCITED

SWEEP_AXES = ("delta", "chi", "gamma0")

_SECTIONS = {
    "bath": {"epsilon", "lambda", "gamma0", "delta", "statistics"},
    "coupling": {"chi"},
    "propagation": {"dt", "t_c", "depth", "depth_tolerance"},
    "sampler": {"grid", "random", "seed"},
    "sweep": {"axis", "values", "chi", "statistics"},
    "output": {"directory"},
}


@dataclasses.dataclass
class ExperimentConfig:
    epsilon: float = 2.0
    lam: float = 0.1
    gamma0: float = 0.02
    delta: float = 0.0
    statistics: str = "bose"
    chi: float = 0.0
    dt: float = 0.005
    t_c: float = 50.0
    depth: int | None = None
    depth_tolerance: float = 1e-8
    grid_size: int = 13
    random_count: int = 128
    seed: int = 0
    axis: str | None = None
    values: list[float] | None = None
    chi_list: list[float] | None = None
    statistics_list: list[str] | None = None
    out_dir: str = "out"
    workers: int | None = None

    def __post_init__(self):
        if self.lam <= 0:
            raise ConfigError(f"lambda must be positive, got {self.lam}")
        if self.gamma0 < 0:
            raise ConfigError(f"gamma0 must be non-negative, got {self.gamma0}")
        if not 0.0 <= self.chi <= 1.0:
            raise ConfigError(f"chi must lie in [0, 1], got {self.chi}")
        if self.dt <= 0 or self.t_c <= 0:
            raise ConfigError("dt and t_c must be positive")
        if self.statistics not in ("bose", "fermi"):
            raise ConfigError(f"statistics must be bose or fermi, got {self.statistics!r}")
        if self.axis is not None and self.axis not in SWEEP_AXES:
            raise ConfigError(f"sweep axis must be one of {SWEEP_AXES}, got {self.axis!r}")
        if self.axis is not None and not self.values:
            raise ConfigError("sweep requires a non-empty list of axis values")
        for s in self.statistics_list or []:
            if s not in ("bose", "fermi"):
                raise ConfigError(f"invalid statistics entry {s!r}")
        for c in self.chi_list or []:
            if not 0.0 <= c <= 1.0:
                raise ConfigError(f"chi values must lie in [0, 1], got {c}")

    def bath(self, statistics: str | None = None, **replacements) -> BathModel:
        params = {
            "epsilon": self.epsilon,
            "lam": self.lam,
            "gamma0": self.gamma0,
            "delta": self.delta,
        }
        params.update(replacements)
        return BathModel(statistics=Statistics(statistics or self.statistics), **params)

    def propagation(self) -> PropagatorConfig:
        return PropagatorConfig(
            dt=self.dt,
            t_final=self.t_c,
            depth=self.depth,
            depth_tolerance=self.depth_tolerance,
        )

    def sampler(self) -> PairSampler:
        return PairSampler(
            grid_size=self.grid_size, random_count=self.random_count, seed=self.seed
        )


def _section(data: dict, name: str) -> dict:
    sect = data.get(name, {})
    if not isinstance(sect, dict):
        raise ConfigError(f"[{name}] must be a table")
    unknown = set(sect) - _SECTIONS[name]
    if unknown:
        raise ConfigError(f"unknown keys in [{name}]: {sorted(unknown)}")
    return sect


def load_config(path: str | None) -> ExperimentConfig:
    """Parse a TOML config file; a missing path yields the baseline defaults."""
    data = {}
    if path is not None:
        try:
            with open(path, "rb") as fh:
                data = tomllib.load(fh)
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"invalid config file {path}: {exc}") from exc
    unknown = set(data) - set(_SECTIONS)
    if unknown:
        raise ConfigError(f"unknown config sections: {sorted(unknown)}")
    bath = _section(data, "bath")
    coupling = _section(data, "coupling")
    prop = _section(data, "propagation")
    sampler = _section(data, "sampler")
    sweep = _section(data, "sweep")
    output = _section(data, "output")
    try:
        return ExperimentConfig(
            epsilon=float(bath.get("epsilon", 2.0)),
            lam=float(bath.get("lambda", 0.1)),
            gamma0=float(bath.get("gamma0", 0.02)),
            delta=float(bath.get("delta", 0.0)),
            statistics=str(bath.get("statistics", "bose")),
            chi=float(coupling.get("chi", 0.0)),
            dt=float(prop.get("dt", 0.005)),
            t_c=float(prop.get("t_c", 50.0)),
            depth=int(prop["depth"]) if "depth" in prop else None,
            depth_tolerance=float(prop.get("depth_tolerance", 1e-8)),
            grid_size=int(sampler.get("grid", 13)),
            random_count=int(sampler.get("random", 128)),
            seed=int(sampler.get("seed", 0)),
            axis=sweep.get("axis"),
            values=[float(v) for v in sweep["values"]] if "values" in sweep else None,
            chi_list=[float(v) for v in sweep["chi"]] if "chi" in sweep else None,
            statistics_list=list(sweep["statistics"]) if "statistics" in sweep else None,
            out_dir=str(output.get("directory", "out")),
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid config value: {exc}") from exc


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _require_finite(obj, context: str):
    if isinstance(obj, float) and not math.isfinite(obj):
        raise NumericalDivergenceError(f"non-finite value in {context}")
    if isinstance(obj, dict):
        for v in obj.values():
            _require_finite(v, context)
    if isinstance(obj, (list, tuple)):
        for v in obj:
            _require_finite(v, context)


def _write_json(path: str, payload: dict):
    _require_finite(payload, os.path.basename(path))
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _point_summary(cfg: ExperimentConfig, statistics: str, chi: float, **overrides):
    """Converged-depth validation plus maximization at one parameter point."""
    bath = cfg.bath(statistics=statistics, **overrides)
    coupling = CouplingOperator(chi=chi)
    prop = cfg.propagation()
    excited = np.outer(EXCITED, EXCITED.conj())
    depth = converged_depth(excited, bath, coupling, cfg.epsilon, prop)
    prop_at_depth = dataclasses.replace(prop, depth=depth)
    result = maximize(
        bath,
        coupling,
        cfg.epsilon,
        prop_at_depth,
        sampler=cfg.sampler(),
        workers=cfg.workers or 1,
    )
    return bath, coupling, prop_at_depth, depth, result


def run_single(cfg: ExperimentConfig, out_dir: str | None = None) -> dict:
    """Evaluate one parameter point; write trajectory.csv and summary.json."""
    out = out_dir or cfg.out_dir
    os.makedirs(out, exist_ok=True)
    started = time.perf_counter()

    bath, coupling, prop, depth, result = _point_summary(cfg, cfg.statistics, cfg.chi)
    times, dist = pair_distance_series(
        result.best_pair, bath, coupling, cfg.epsilon, prop
    )
    engine = HierarchyPropagator(bath, coupling, cfg.epsilon, prop)
    traj = engine.run(pair_states(result.best_pair)[0])

    with open(os.path.join(out, "trajectory.csv"), "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["t", "rho_ee", "re_rho_eg", "im_rho_eg", "D_optimal_pair"])
        for i, t in enumerate(times):
            writer.writerow(
                [
                    _fmt(t),
                    _fmt(traj.rho_ee[i]),
                    _fmt(traj.rho_eg[i].real),
                    _fmt(traj.rho_eg[i].imag),
                    _fmt(dist[i]),
                ]
            )

    summary = {
        "bath": {
            "epsilon": cfg.epsilon,
            "lambda": cfg.lam,
            "gamma0": cfg.gamma0,
            "delta": cfg.delta,
            "statistics": cfg.statistics,
        },
        "chi": cfg.chi,
        "propagation": {
            "dt": cfg.dt,
            "t_c": cfg.t_c,
            "depth_requested": cfg.depth,
            "depth_used": depth,
            "depth_converged": True,
            "depth_tolerance": cfg.depth_tolerance,
        },
        "sampler": {
            "grid": cfg.grid_size,
            "random": cfg.random_count,
            "seed": cfg.seed,
        },
        "measure": {
            "N": result.value,
            "best_theta": result.best_pair.theta,
            "best_phi": result.best_pair.phi,
            "pair_count": len(result.per_pair),
        },
    }
    _write_json(os.path.join(out, "summary.json"), summary)
    _write_json(
        os.path.join(out, "run_meta.json"),
        {"runtime_seconds": time.perf_counter() - started, "version": __version__},
    )
    return summary


def _sweep_combinations(cfg: ExperimentConfig):
    chis = cfg.chi_list if cfg.chi_list is not None else [cfg.chi]
    stats = cfg.statistics_list if cfg.statistics_list is not None else [cfg.statistics]
    combos = []
    for value in cfg.values:
        if cfg.axis == "chi":
            combos.extend((value, value, s) for s in stats)
        else:
            combos.extend((value, c, s) for c in chis for s in stats)
    return combos


def _sweep_point(args):
    cfg, value, chi, statistics = args
    row = {
        "value": value,
        "chi": chi,
        "statistics": statistics,
        "N": None,
        "best_theta": None,
        "best_phi": None,
        "depth_used": None,
        "error": None,
    }
    overrides = {} if cfg.axis == "chi" else {cfg.axis: value}
    try:
        _, _, _, depth, result = _point_summary(cfg, statistics, chi, **overrides)
        row.update(
            N=result.value,
            best_theta=result.best_pair.theta,
            best_phi=result.best_pair.phi,
            depth_used=depth,
        )
    except (NumericalDivergenceError, DepthConvergenceError) as exc:
        row["error"] = str(exc)
    return row


def run_sweep(cfg: ExperimentConfig, out_dir: str | None = None) -> list[dict]:
    """Sweep one axis; write one CSV row per value per chi/statistics combo.

    Per-point failures are recorded in the error column without aborting.
    Points run on a process pool, but rows are collected and written in
    sweep order so outputs never depend on completion order.
    """
    if cfg.axis is None:
        raise ConfigError("sweep requires a sweep axis (delta, chi, or gamma0)")
    out = out_dir or cfg.out_dir
    os.makedirs(out, exist_ok=True)
    started = time.perf_counter()

    tasks = [(cfg, value, chi, stats) for value, chi, stats in _sweep_combinations(cfg)]
    workers = cfg.workers or os.cpu_count() or 1
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_sweep_point, tasks))
    else:
        rows = [_sweep_point(task) for task in tasks]

    with open(os.path.join(out, "sweep.csv"), "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow([cfg.axis, "chi", "statistics", "N", "best_theta", "best_phi", "error"])
        for row in rows:
            writer.writerow(
                [
                    _fmt(row["value"]),
                    _fmt(row["chi"]),
                    row["statistics"],
                    "" if row["N"] is None else _fmt(row["N"]),
                    "" if row["best_theta"] is None else _fmt(row["best_theta"]),
                    "" if row["best_phi"] is None else _fmt(row["best_phi"]),
                    row["error"] or "",
                ]
            )

    summary = {
        "axis": cfg.axis,
        "seed": cfg.seed,
        "sampler": {"grid": cfg.grid_size, "random": cfg.random_count},
        "points": [
            {
                "value": row["value"],
                "chi": row["chi"],
                "statistics": row["statistics"],
                "N": row["N"],
                "best_theta": row["best_theta"],
                "best_phi": row["best_phi"],
                "depth_used": row["depth_used"],
                "depth_converged": row["error"] is None,
                "error": row["error"],
            }
            for row in rows
        ],
    }
    _write_json(os.path.join(out, "sweep_summary.json"), summary)
    _write_json(
        os.path.join(out, "run_meta.json"),
        {"runtime_seconds": time.perf_counter() - started, "version": __version__},
    )
    return rows


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nmheom",
        description="Non-Markovianity of a qubit in a Lorentzian environment",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("single", "measure one parameter point"),
        ("sweep", "sweep one parameter axis"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", help="TOML config file (defaults reproduce the baseline)")
        p.add_argument("--out", help="output directory")
        p.add_argument("--seed", type=int, help="sampler seed")
        p.add_argument("--workers", type=int, help="parallel workers (default: cpu count)")
        p.add_argument("--statistics", choices=["bose", "fermi"])
        p.add_argument("--chi", type=float)
        if name == "sweep":
            p.add_argument("--axis", choices=SWEEP_AXES, help="sweep axis override")
            p.add_argument(
                "--values",
                help="comma-separated axis values override, e.g. 0.0,0.1,0.2",
            )
    return parser


def _apply_overrides(cfg: ExperimentConfig, args: argparse.Namespace) -> ExperimentConfig:
    updates = {}
    if args.out is not None:
        updates["out_dir"] = args.out
    if args.seed is not None:
        updates["seed"] = args.seed
    if args.workers is not None:
        updates["workers"] = args.workers
    if args.statistics is not None:
        updates["statistics"] = args.statistics
        updates["statistics_list"] = [args.statistics]
    if args.chi is not None:
        updates["chi"] = args.chi
        updates["chi_list"] = [args.chi]
    if getattr(args, "axis", None) is not None:
        updates["axis"] = args.axis
    if getattr(args, "values", None) is not None:
        try:
            updates["values"] = [float(v) for v in args.values.split(",") if v.strip()]
        except ValueError as exc:
            raise ConfigError(f"invalid --values list: {exc}") from exc
    return dataclasses.replace(cfg, **updates)


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        cfg = _apply_overrides(load_config(args.config), args)
        if args.command == "single":
            run_single(cfg)
        else:
            run_sweep(cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (NumericalDivergenceError, DepthConvergenceError) as exc:
        print(f"numerical divergence: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return 4
    return 0


if __name__ == "__main__":
    sys.exit(main())
