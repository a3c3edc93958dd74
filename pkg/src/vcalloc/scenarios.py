"""Job topologies, random vehicular clouds and experiment grids.

All intervals are sampled uniformly. Defaults follow the evaluation setup:
``t, c in [0.2, 0.6]``, ``omega in [0.1, 0.4]``, ``lambda in [0.01, 0.06]``,
``epsilon = xi = 0.9``.
"""
from __future__ import annotations

import itertools
from dataclasses import asdict, dataclass, field, fields, replace
from typing import Any, Optional, Sequence

import numpy as np

from .model import GraphJob, SystemParams, VcTopology

JOB_TYPES = {
    1: "closed triad",
    2: "square",
    3: "bull",
    4: "double-star",
    5: "tadpole",
}

_TEMPLATES = {
    1: (3, [(0, 1), (1, 2), (0, 2)]),
    2: (4, [(0, 1), (1, 2), (2, 3), (0, 3)]),
    # triangle 0-1-2 with horns 3 on 1 and 4 on 2; 0 is the nose
    3: (5, [(0, 1), (0, 2), (1, 2), (1, 3), (2, 4)]),
    # hubs 0 and 1, two leaves each
    4: (6, [(0, 1), (0, 2), (0, 3), (1, 4), (1, 5)]),
    # triangle 0-1-2 with tail 2-3-4
    5: (5, [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4)]),
}


def job_topology(job_type: int) -> GraphJob:
    """Unweighted template (all ``omega = 0``) for job type 1..5."""
    if job_type not in _TEMPLATES:
        raise ValueError(f"unknown job type {job_type!r}; expected one of 1..5")
    n, edges = _TEMPLATES[job_type]
    return GraphJob(n, tuple((i, k, 0.0) for i, k in edges), job_type)


def _interval(v) -> tuple[float, float]:
    lo, hi = v
    if lo > hi:
        raise ValueError(f"interval [{lo}, {hi}] is empty")
    return (lo, hi)


@dataclass(frozen=True)
class ScenarioConfig:
    sp_count: tuple[int, int] = (4, 8)
    slots_per_sp: tuple[int, int] = (3, 6)
    edge_probability: float = 0.6
    trans: tuple[float, float] = (0.2, 0.6)
    cost: tuple[float, float] = (0.2, 0.6)
    omega: tuple[float, float] = (0.1, 0.4)
    rate: tuple[float, float] = (0.01, 0.06)
    epsilon: float = 0.9
    xi: float = 0.9
    alpha1: float = 0.5
    exec_time: float = 1.0
    seed: int = 0

    def __post_init__(self):
        for f in ("sp_count", "slots_per_sp", "trans", "cost", "omega", "rate"):
            object.__setattr__(self, f, tuple(_interval(getattr(self, f))))
        if self.sp_count[0] < 1:
            raise ValueError("sp_count must be at least 1 (the JO)")
        if self.slots_per_sp[0] < 0:
            raise ValueError("slot counts must be non-negative")
        if not 0.0 <= self.edge_probability <= 1.0:
            raise ValueError("edge_probability must lie in [0, 1]")
        if self.rate[0] <= 0:
            raise ValueError("contact rates must be positive")

    def rng(self) -> np.random.Generator:
        return np.random.default_rng(self.seed)

    def params(self) -> SystemParams:
        return SystemParams(self.epsilon, self.xi, self.alpha1, self.exec_time)

    def to_dict(self) -> dict[str, Any]:
        return {k: list(v) if isinstance(v, tuple) else v for k, v in asdict(self).items()}

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "ScenarioConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(d) - known
        if unknown:
            raise ValueError(f"unknown scenario fields: {sorted(unknown)}")
        return cls(**{k: tuple(v) if isinstance(v, list) else v for k, v in d.items()})


def random_vc(config: ScenarioConfig, rng: np.random.Generator) -> tuple[VcTopology, SystemParams]:
    """Draw one cloud. Every provider links to the JO; provider pairs link
    independently with ``edge_probability``."""
    m = int(rng.integers(config.sp_count[0], config.sp_count[1], endpoint=True))
    jo = m - 1
    kappa = rng.integers(config.slots_per_sp[0], config.slots_per_sp[1], size=m, endpoint=True)
    trans = rng.uniform(*config.trans, size=m)
    trans[jo] = 0.0
    adj = np.zeros((m, m), dtype=bool)
    rate = np.zeros((m, m))
    cost = np.zeros((m, m))
    for j in range(m):
        for k in range(j + 1, m):
            linked = k == jo or rng.random() < config.edge_probability
            if linked:
                adj[j, k] = adj[k, j] = True
                rate[j, k] = rate[k, j] = rng.uniform(*config.rate)
                cost[j, k] = cost[k, j] = rng.uniform(*config.cost)
    return VcTopology(tuple(int(k) for k in kappa), adj, rate, trans, cost), config.params()


def weighted_job(template: GraphJob, config: ScenarioConfig, rng: np.random.Generator) -> GraphJob:
    """Draw ``omega`` for every edge of ``template``."""
    w = rng.uniform(*config.omega, size=len(template.edge_list))
    return template.with_weights(w.tolist())


def random_instance(job_type: int, config: ScenarioConfig, rng: np.random.Generator):
    job = weighted_job(job_topology(job_type), config, rng)
    vc, params = random_vc(config, rng)
    return job, vc, params


def derive_seed(master_seed: int, *key: int) -> int:
    return int(np.random.SeedSequence([master_seed, *key]).generate_state(1, np.uint64)[0])


@dataclass(frozen=True)
class GridSpec:
    """Cartesian sweep. ``slots`` are per-provider averages; each ``kappa[j]``
    is drawn in ``[avg - slot_spread, avg + slot_spread]`` (floored at 0)."""

    sp_counts: Sequence[int] = (4, 5)
    slots: Sequence[int] = (3, 4, 5)
    types: Sequence[int] = (1, 2, 3, 4, 5)
    trials: int = 10
    alpha1: Sequence[float] = (0.5,)
    slot_spread: int = 1
    master_seed: int = 0

    def __post_init__(self):
        for f in ("sp_counts", "slots", "types", "alpha1"):
            object.__setattr__(self, f, tuple(getattr(self, f)))

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "GridSpec":
        known = {f.name for f in fields(cls)}
        unknown = set(d) - known
        if unknown:
            raise ValueError(f"unknown grid fields: {sorted(unknown)}")
        return cls(**d)


@dataclass(frozen=True)
class GridCell:
    index: int
    job: GraphJob
    vc: VcTopology = field(compare=False)
    params: SystemParams
    trial: int
    seed: int
    job_type: int
    m: int
    avg_slots: int


def experiment_grid(grid: GridSpec, config: Optional[ScenarioConfig] = None) -> list[GridCell]:
    """Expand ``grid`` into instances. The instance seed depends on
    ``(master_seed, m, slots, type, trial)`` but not on ``alpha1``, so an
    ``alpha1`` sweep re-solves the very same instances."""
    config = config or ScenarioConfig()
    axes = (grid.sp_counts, grid.slots, grid.types, range(grid.trials), grid.alpha1)
    if grid.trials < 1 or any(len(a) == 0 for a in axes):
        raise ValueError("experiment grid is empty")
    for t in grid.types:
        if t not in _TEMPLATES:
            raise ValueError(f"unknown job type {t!r}")
    cells = []
    for idx, (m, s, t, trial, a1) in enumerate(itertools.product(*axes)):
        seed = derive_seed(grid.master_seed, m, s, t, trial)
        cfg = replace(config, sp_count=(m, m),
                      slots_per_sp=(max(0, s - grid.slot_spread), s + grid.slot_spread),
                      alpha1=a1, seed=seed)
        job, vc, params = random_instance(t, cfg, np.random.default_rng(seed))
        cells.append(GridCell(idx, job, vc, params, trial, seed, t, m, s))
    return cells
