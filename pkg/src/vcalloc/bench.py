"""Experiment harness: run solvers over a grid and tabulate the results.

Run CSV columns, in order::

    type,m,total_slots,seed,solver,r,alpha1,objective,completion_time,
    exchange_cost,feasible,wall_ms

Floats are written with ``repr`` so they round-trip exactly; an infeasible
run has ``inf`` in the three value columns. Rows follow the grid's cell
order, then the configured solver order, regardless of worker scheduling.
"""
from __future__ import annotations

import csv
import io
import json
import math
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional, Sequence

from .model import AllocationResult, GraphJob, SystemParams, VcTopology
from .objective import COST_MODES, CostMode
from .optimal import brute_force_oracle, solve_optimal
from .randomized import solve_randomized
from .scenarios import GridCell, GridSpec, ScenarioConfig, experiment_grid

CSV_COLUMNS = ("type", "m", "total_slots", "seed", "solver", "r", "alpha1", "objective",
               "completion_time", "exchange_cost", "feasible", "wall_ms")
SUMMARY_COLUMNS = ("type", "m", "avg_slots", "solver", "r", "alpha1", "runs", "feasible_runs",
                   "objective_mean", "objective_std", "completion_time_mean",
                   "completion_time_std", "exchange_cost_mean", "exchange_cost_std",
                   "wall_ms_mean", "wall_ms_std")
SOLVERS = ("opt", "rhtsi", "oracle")


@dataclass(frozen=True)
class RunRecord:
    job_type: Optional[int]
    m: int
    total_slots: int
    seed: Optional[int]
    solver: str
    r: Optional[int]
    alpha1: float
    objective: float
    completion_time: float
    exchange_cost: float
    feasible: bool
    wall_ms: float = field(compare=False)

    def row(self) -> list[str]:
        def num(v):
            return "" if v is None else repr(float(v))
        return [
            "" if self.job_type is None else str(self.job_type),
            str(self.m), str(self.total_slots),
            "" if self.seed is None else str(self.seed),
            self.solver, "" if self.r is None else str(self.r),
            num(self.alpha1), num(self.objective), num(self.completion_time),
            num(self.exchange_cost), "true" if self.feasible else "false", num(self.wall_ms),
        ]

    def to_json(self) -> dict[str, Any]:
        def num(v):
            return None if v is None or not math.isfinite(v) else v
        return {"type": self.job_type, "m": self.m, "total_slots": self.total_slots,
                "seed": self.seed, "solver": self.solver, "r": self.r, "alpha1": self.alpha1,
                "objective": num(self.objective), "completion_time": num(self.completion_time),
                "exchange_cost": num(self.exchange_cost), "feasible": self.feasible,
                "wall_ms": self.wall_ms}


def run_solver(job: GraphJob, vc: VcTopology, params: SystemParams, solver: str,
               r: Optional[int] = None, seed: int = 0,
               mode: CostMode = "per-edge") -> AllocationResult:
    if solver == "opt":
        return solve_optimal(job, vc, params, mode)
    if solver == "rhtsi":
        return solve_randomized(job, vc, params, r if r is not None else 100, seed, mode)
    if solver == "oracle":
        return brute_force_oracle(job, vc, params, mode)
    raise ValueError(f"unknown solver {solver!r}")


def make_record(job, vc, params, solver, result: AllocationResult, r=None, seed=None,
                timing=True) -> RunRecord:
    return RunRecord(job.job_type, vc.m, vc.total_slots, seed, solver,
                     r if solver == "rhtsi" else None, params.alpha1, result.objective,
                     result.completion_time, result.exchange_cost, result.feasible,
                     result.meta.wall_time * 1e3 if timing else 0.0)


@dataclass(frozen=True)
class SolverSpec:
    solver: str
    iterations: Optional[int] = None

    def __post_init__(self):
        if self.solver not in SOLVERS:
            raise ValueError(f"unknown solver {self.solver!r}")
        if self.solver == "rhtsi" and (self.iterations is None or self.iterations < 1):
            raise ValueError("rhtsi needs iterations >= 1")


@dataclass(frozen=True)
class ExperimentConfig:
    """Contents of an experiment config file.

    ``timing=False`` writes ``wall_ms`` as 0 so that reruns are byte-identical.
    """

    scenario: ScenarioConfig = field(default_factory=ScenarioConfig)
    grid: GridSpec = field(default_factory=GridSpec)
    solvers: tuple[SolverSpec, ...] = (SolverSpec("opt"), SolverSpec("rhtsi", 100))
    cost_mode: str = "per-edge"
    timing: bool = True

    def __post_init__(self):
        if self.cost_mode not in COST_MODES:
            raise ValueError(f"unknown cost mode {self.cost_mode!r}")
        if not self.solvers:
            raise ValueError("no solvers configured")

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "ExperimentConfig":
        unknown = set(d) - {"scenario", "grid", "solvers", "cost_mode", "timing"}
        if unknown:
            raise ValueError(f"unknown experiment fields: {sorted(unknown)}")
        kw: dict[str, Any] = {}
        if "scenario" in d:
            kw["scenario"] = ScenarioConfig.from_dict(d["scenario"])
        if "grid" in d:
            kw["grid"] = GridSpec.from_dict(d["grid"])
        if "solvers" in d:
            kw["solvers"] = tuple(SolverSpec(**s) for s in d["solvers"])
        for k in ("cost_mode", "timing"):
            if k in d:
                kw[k] = d[k]
        return cls(**kw)

    @classmethod
    def load(cls, path) -> "ExperimentConfig":
        return cls.from_dict(json.loads(Path(path).read_text()))


def _run_cell(args) -> list[RunRecord]:
    cell, solvers, mode, timing = args
    out = []
    for s in solvers:
        # the randomized solver is seeded with the instance seed
        res = run_solver(cell.job, cell.vc, cell.params, s.solver, s.iterations, cell.seed, mode)
        out.append(make_record(cell.job, cell.vc, cell.params, s.solver, res,
                               s.iterations, cell.seed, timing))
    return out


def run_experiment(config: ExperimentConfig, workers: int = 1) -> list[tuple[GridCell, list[RunRecord]]]:
    cells = experiment_grid(config.grid, config.scenario)
    tasks = [(c, config.solvers, config.cost_mode, config.timing) for c in cells]
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            results = list(pool.map(_run_cell, tasks))
    else:
        results = [_run_cell(t) for t in tasks]
    return list(zip(cells, results))


def records_csv(records: Sequence[RunRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for rec in records:
        w.writerow(rec.row())
    return buf.getvalue()


def _mean_std(values):
    vals = [v for v in values if math.isfinite(v)]
    if not vals:
        return "", ""
    std = statistics.pstdev(vals) if len(vals) > 1 else 0.0
    return repr(statistics.fmean(vals)), repr(std)


def summary_csv(results: Sequence[tuple[GridCell, list[RunRecord]]]) -> str:
    """One row per (type, m, avg slots, alpha1, solver) group, over trials."""
    groups: dict[tuple, list[RunRecord]] = {}
    for cell, recs in results:
        for k, rec in enumerate(recs):
            key = (cell.job_type, cell.m, cell.avg_slots, k, rec.solver, rec.r, rec.alpha1)
            groups.setdefault(key, []).append(rec)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SUMMARY_COLUMNS)
    for (t, m, s, _, solver, r, a1), recs in groups.items():
        feas = [x for x in recs if x.feasible]
        row = [t, m, s, solver, "" if r is None else r, repr(a1), len(recs), len(feas)]
        for attr in ("objective", "completion_time", "exchange_cost", "wall_ms"):
            row.extend(_mean_std([getattr(x, attr) for x in feas]))
        w.writerow(row)
    return buf.getvalue()


def write_experiment(config: ExperimentConfig, out: Path, workers: int = 1) -> tuple[Path, Path]:
    """Run the grid; write the run table to ``out`` and the per-group
    summary next to it as ``<stem>.summary.csv``."""
    out = Path(out)
    results = run_experiment(config, workers)
    records = [rec for _, recs in results for rec in recs]
    summary = out.with_name(out.stem + ".summary.csv")
    out.write_text(records_csv(records))
    summary.write_text(summary_csv(results))
    return out, summary
