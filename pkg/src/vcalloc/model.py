"""Domain types for graph-job allocation over a vehicular cloud.

Indices are 0-based throughout. In a cloud with ``m`` service providers the
job owner is the last one, ``m - 1``; it hosts components like any other
provider but has zero transmission time and is exempt from the
transmission-reliability constraint.
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Optional, Sequence

import numpy as np


class IncompleteAssignmentError(ValueError):
    """Raised when an operation needs every component placed."""


def _frozen(a, dtype) -> np.ndarray:
    arr = np.array(a, dtype=dtype, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class GraphJob:
    """Undirected pattern graph: components joined by data-flow edges.

    ``edges`` holds ``(i, i2, omega)`` triples as supplied; ``omega`` is the
    connecting duration the two hosting providers must sustain. Use
    :func:`validate_job` to check the invariants.
    """

    n: int
    edges: tuple[tuple[int, int, float], ...]
    job_type: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(
            self, "edges",
            tuple((int(i), int(k), float(w)) for i, k, w in self.edges))

    def __eq__(self, other):
        if not isinstance(other, GraphJob):
            return NotImplemented
        return (self.n, self.edges, self.job_type) == (other.n, other.edges, other.job_type)

    def __hash__(self):
        return hash((self.n, self.edges, self.job_type))

    @cached_property
    def edge_list(self) -> tuple[tuple[int, int, float], ...]:
        """Canonical edges ``(lo, hi, omega)`` sorted, duplicates collapsed."""
        seen = {}
        for i, k, w in self.edges:
            key = (min(i, k), max(i, k))
            seen.setdefault(key, w)
        return tuple((i, k, w) for (i, k), w in sorted(seen.items()))

    @cached_property
    def neighbors(self) -> tuple[tuple[int, ...], ...]:
        adj = [set() for _ in range(self.n)]
        for i, k, _ in self.edge_list:
            if i != k:
                adj[i].add(k)
                adj[k].add(i)
        return tuple(tuple(sorted(s)) for s in adj)

    @cached_property
    def omega(self) -> dict[tuple[int, int], float]:
        """Edge weight lookup keyed by both orientations."""
        out = {}
        for i, k, w in self.edge_list:
            out[(i, k)] = w
            out[(k, i)] = w
        return out

    def with_weights(self, omegas: Sequence[float]) -> "GraphJob":
        """Same structure with new weights, one per entry of :attr:`edge_list`."""
        edges = self.edge_list
        if len(omegas) != len(edges):
            raise ValueError(f"expected {len(edges)} weights, got {len(omegas)}")
        return GraphJob(self.n, tuple((i, k, float(w)) for (i, k, _), w in zip(edges, omegas)),
                        self.job_type)


@dataclass(frozen=True, eq=False)
class VcTopology:
    """Host graph of service providers in one vehicular cloud.

    Dense ``m x m`` matrices: ``adjacency`` (one-hop V2V link), ``rate``
    (exponential contact-duration parameter, meaningful where linked) and
    ``cost`` (data-exchange cost). ``trans`` is the per-component transmission
    time from the job owner to each provider; ``trans[m-1]`` is 0.
    """

    kappa: tuple[int, ...]
    adjacency: np.ndarray
    rate: np.ndarray
    trans: np.ndarray
    cost: np.ndarray

    def __post_init__(self):
        kappa = tuple(int(k) for k in self.kappa)
        m = len(kappa)
        object.__setattr__(self, "kappa", kappa)
        object.__setattr__(self, "adjacency", _frozen(self.adjacency, bool))
        object.__setattr__(self, "rate", _frozen(self.rate, float))
        object.__setattr__(self, "trans", _frozen(self.trans, float))
        object.__setattr__(self, "cost", _frozen(self.cost, float))
        for name in ("adjacency", "rate", "cost"):
            if getattr(self, name).shape != (m, m):
                raise ValueError(f"{name} must have shape ({m}, {m})")
        if self.trans.shape != (m,):
            raise ValueError(f"trans must have shape ({m},)")
        if m < 1:
            raise ValueError("a vehicular cloud needs at least the job owner")

    @property
    def m(self) -> int:
        return len(self.kappa)

    @property
    def jo(self) -> int:
        """Index of the job owner."""
        return len(self.kappa) - 1

    @property
    def total_slots(self) -> int:
        return sum(self.kappa)

    # Plain-float copies for hot loops; numpy scalar indexing is slow there.
    @cached_property
    def trans_list(self) -> list[float]:
        return self.trans.tolist()

    @cached_property
    def cost_rows(self) -> list[list[float]]:
        return self.cost.tolist()

    @cached_property
    def rate_rows(self) -> list[list[float]]:
        return self.rate.tolist()

    @cached_property
    def adjacency_rows(self) -> list[list[bool]]:
        return self.adjacency.tolist()

    def __eq__(self, other):
        if not isinstance(other, VcTopology):
            return NotImplemented
        return (self.kappa == other.kappa
                and all(np.array_equal(getattr(self, f), getattr(other, f))
                        for f in ("adjacency", "rate", "trans", "cost")))

    __hash__ = None

    @classmethod
    def from_edges(cls, kappa: Sequence[int], edges: Iterable[Sequence[float]],
                   trans: Sequence[float]) -> "VcTopology":
        """Build from ``(j, j2, rate, cost)`` rows.

        A row is mirrored to ``(j2, j)`` unless that orientation is listed
        too, so conflicting rows survive as asymmetric matrices for
        :func:`validate_topology` to report.
        """
        m = len(kappa)
        adj = np.zeros((m, m), dtype=bool)
        rate = np.zeros((m, m))
        cost = np.zeros((m, m))
        given = {}
        for j, k, lam, c in edges:
            given[(int(j), int(k))] = (float(lam), float(c))
        for (j, k), (lam, c) in given.items():
            for a, b in ((j, k), (k, j)):
                if (a, b) == (j, k) or (a, b) not in given:
                    adj[a, b] = True
                    rate[a, b] = lam
                    cost[a, b] = c
        return cls(tuple(kappa), adj, rate, np.asarray(trans, dtype=float), cost)

    def edge_rows(self) -> list[tuple[int, int, float, float]]:
        m = self.m
        return [(j, k, float(self.rate[j, k]), float(self.cost[j, k]))
                for j in range(m) for k in range(j + 1, m) if self.adjacency[j, k]]

    def permuted(self, perm: Sequence[int]) -> "VcTopology":
        """Relabel providers: new provider ``perm[j]`` is old provider ``j``.

        The job owner must stay last (``perm[m-1] == m-1``).
        """
        m = self.m
        perm = list(perm)
        if sorted(perm) != list(range(m)) or perm[-1] != m - 1:
            raise ValueError("perm must be a permutation fixing the job owner")
        inv = np.argsort(perm)
        return VcTopology(tuple(self.kappa[inv[j]] for j in range(m)),
                          self.adjacency[np.ix_(inv, inv)], self.rate[np.ix_(inv, inv)],
                          self.trans[inv], self.cost[np.ix_(inv, inv)])


@dataclass(frozen=True)
class Assignment:
    """Placement of components onto ``(provider, slot)`` pairs.

    ``placement[i]`` is ``None`` for a component not yet placed.
    """

    placement: tuple[Optional[tuple[int, int]], ...]

    def __post_init__(self):
        pl = tuple(None if p is None else (int(p[0]), int(p[1])) for p in self.placement)
        used = [p for p in pl if p is not None]
        if len(set(used)) != len(used):
            raise ValueError("two components share a slot")
        object.__setattr__(self, "placement", pl)

    @classmethod
    def from_providers(cls, sps: Sequence[Optional[int]]) -> "Assignment":
        """Assign slots ``0, 1, ...`` on each provider in component order."""
        nxt: dict[int, int] = {}
        out = []
        for j in sps:
            if j is None:
                out.append(None)
                continue
            s = nxt.get(j, 0)
            nxt[j] = s + 1
            out.append((j, s))
        return cls(tuple(out))

    @property
    def n(self) -> int:
        return len(self.placement)

    @property
    def providers(self) -> tuple[Optional[int], ...]:
        return tuple(None if p is None else p[0] for p in self.placement)

    @property
    def complete(self) -> bool:
        return all(p is not None for p in self.placement)

    def counts(self, m: int) -> list[int]:
        out = [0] * m
        for p in self.placement:
            if p is not None:
                out[p[0]] += 1
        return out

    def matrix(self, m: int) -> np.ndarray:
        """Binary ``n x m`` indicator of component-to-provider placement."""
        x = np.zeros((self.n, m), dtype=int)
        for i, p in enumerate(self.placement):
            if p is not None:
                x[i, p[0]] = 1
        return x


@dataclass(frozen=True)
class SystemParams:
    """Reliability thresholds and objective weights.

    ``alpha2`` is always ``1 - alpha1``; passing it explicitly only checks
    consistency.
    """

    epsilon: float = 0.9
    xi: float = 0.9
    alpha1: float = 0.5
    exec_time: float = 1.0
    alpha2: float = field(default=None)

    def __post_init__(self):
        if not 0.0 <= self.alpha1 <= 1.0:
            raise ValueError("alpha1 must lie in [0, 1]")
        a2 = 1.0 - self.alpha1
        if self.alpha2 is not None and abs(self.alpha2 - a2) > 1e-12:
            raise ValueError("alpha1 + alpha2 must equal 1")
        object.__setattr__(self, "alpha2", a2)
        for name in ("epsilon", "xi"):
            v = getattr(self, name)
            if not 0.0 < v <= 1.0:
                raise ValueError(f"{name} must lie in (0, 1]")
        if self.exec_time < 0:
            raise ValueError("exec_time must be non-negative")

    def with_alpha1(self, alpha1: float) -> "SystemParams":
        return SystemParams(self.epsilon, self.xi, alpha1, self.exec_time)


@dataclass(frozen=True)
class SolverMeta:
    solver: str
    iterations: int
    seed: Optional[int] = None
    wall_time: float = field(default=0.0, compare=False)
    # best-so-far objective after each iteration (randomized solver only)
    trace: tuple[float, ...] = ()


@dataclass(frozen=True)
class AllocationResult:
    assignment: Optional[Assignment]
    completion_time: float
    exchange_cost: float
    objective: float
    feasible: bool
    meta: SolverMeta

    @classmethod
    def infeasible(cls, meta: SolverMeta) -> "AllocationResult":
        return cls(None, math.inf, math.inf, math.inf, False, meta)


def _check_assignment(job: GraphJob, vc: VcTopology, x: Assignment) -> None:
    if x.n != job.n:
        raise ValueError(f"assignment covers {x.n} components, job has {job.n}")
    if not x.complete:
        missing = [i for i, p in enumerate(x.placement) if p is None]
        raise IncompleteAssignmentError(f"components {missing} are not placed")
    for i, (j, _) in enumerate(x.placement):
        if not 0 <= j < vc.m:
            raise ValueError(f"component {i} placed on unknown provider {j}")


def derive_exchange_indicator(job: GraphJob, vc: VcTopology, x: Assignment) -> np.ndarray:
    """Symmetric 0/1 matrix marking provider pairs that exchange data."""
    _check_assignment(job, vc, x)
    sp = x.providers
    y = np.zeros((vc.m, vc.m), dtype=int)
    for i, k, _ in job.edge_list:
        a, b = sp[i], sp[k]
        if a != b:
            y[a, b] = y[b, a] = 1
    return y


def _connected(n: int, edges) -> bool:
    if n == 0:
        return True
    adj = [[] for _ in range(n)]
    for i, k, _ in edges:
        if 0 <= i < n and 0 <= k < n:
            adj[i].append(k)
            adj[k].append(i)
    seen = {0}
    queue = deque([0])
    while queue:
        u = queue.popleft()
        for v in adj[u]:
            if v not in seen:
                seen.add(v)
                queue.append(v)
    return len(seen) == n


def validate_job(job: GraphJob) -> list[str]:
    """Every invariant violation of ``job``; an empty list means valid."""
    errors = []
    if job.n < 1:
        errors.append("job has no components")
    weights: dict[tuple[int, int], float] = {}
    for i, k, w in job.edges:
        if not (0 <= i < job.n and 0 <= k < job.n):
            errors.append(f"edge ({i},{k}) references unknown component")
            continue
        if i == k:
            errors.append(f"self-loop on component {i}")
            continue
        if not math.isfinite(w) or w < 0:
            errors.append(f"negative or non-finite weight on edge ({i},{k})")
        key = (min(i, k), max(i, k))
        if key in weights and weights[key] != w:
            errors.append(f"asymmetric weight on edge {key}")
        weights.setdefault(key, w)
    if job.n >= 1 and not _connected(job.n, job.edges):
        errors.append("job graph is disconnected")
    return errors


def validate_topology(vc: VcTopology) -> list[str]:
    """Every invariant violation of ``vc``; an empty list means valid."""
    errors = []
    m, jo = vc.m, vc.jo
    for j, k in enumerate(vc.kappa):
        if k < 0:
            errors.append(f"negative slot count on SP {j}")
    for name, mat in (("adjacency", vc.adjacency), ("rate", vc.rate), ("cost", vc.cost)):
        if not np.array_equal(mat, mat.T):
            errors.append(f"asymmetric {name}")
    if np.any(np.diag(vc.adjacency)):
        errors.append("adjacency has self-links")
    if np.any(np.diag(vc.cost) != 0):
        errors.append("nonzero self exchange cost")
    for j in range(m - 1):
        if not vc.adjacency[j, jo]:
            errors.append(f"SP {j} not one-hop to JO")
    for j in range(m):
        for k in range(j + 1, m):
            if vc.adjacency[j, k] and not vc.rate[j, k] > 0:
                errors.append(f"non-positive contact rate on link ({j},{k})")
    if np.any(vc.trans < 0) or not np.all(np.isfinite(vc.trans)):
        errors.append("negative transmission time")
    if vc.trans[jo] != 0:
        errors.append("JO transmission time must be 0")
    if np.any(vc.cost < 0):
        errors.append("negative exchange cost")
    return errors
