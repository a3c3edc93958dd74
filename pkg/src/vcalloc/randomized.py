"""Randomized allocation over a BFS layering of the job ("hierarchical tree").

Each iteration picks a uniformly random root, layers the job breadth-first
from it, and places the layers in order. Every component goes to a slot drawn
uniformly among the free slots whose provider keeps all constraints
satisfied with respect to what is already placed:

* the provider's upload to the JO, counted after this placement, stays
  reliable (``>= xi``);
* every job edge to an already placed neighbour, whether in the same layer or
  the previous one, lands on the same provider or on a linked pair whose
  contact is reliable (``>= epsilon``).

An iteration that finds no admissible slot for some component is abandoned.
The best feasible candidate over ``r`` iterations is returned.

Randomness: a run seeded with ``seed`` reads one PCG64 stream
(``SeedSequence(seed)``). Iteration ``k`` consumes exactly the block of
``2n`` uniforms starting at draw ``2n * k`` (one for the root, at most
``n - 1`` for layer shuffles, one per placement), so any iteration can be
replayed alone via ``PCG64.advance`` and concurrent runs reproduce the serial
result.
"""
from __future__ import annotations

import math
import time
from collections import deque
from dataclasses import dataclass
from typing import Optional, Protocol, Sequence

import numpy as np

from .model import AllocationResult, Assignment, GraphJob, SolverMeta, SystemParams, VcTopology
from .objective import (CostMode, combine, completion_from_counts, cost_function, is_feasible,
                        link_ok, upload_ok)


@dataclass(frozen=True)
class HierarchicalTree:
    root: int
    layers: tuple[tuple[int, ...], ...]

    @property
    def layer_sizes(self) -> list[int]:
        return [len(layer) for layer in self.layers]


def build_hierarchical_tree(job: GraphJob, root: int) -> HierarchicalTree:
    if not 0 <= root < job.n:
        raise ValueError(f"root {root} is not a component of the job")
    seen = {root}
    layers = [(root,)]
    frontier = deque([root])
    while frontier:
        nxt = []
        for u in frontier:
            for v in job.neighbors[u]:
                if v not in seen:
                    seen.add(v)
                    nxt.append(v)
        if not nxt:
            break
        layers.append(tuple(sorted(nxt)))
        frontier = deque(nxt)
    if len(seen) != job.n:
        missing = sorted(set(range(job.n)) - seen)
        raise ValueError(f"job is disconnected: components {missing} unreachable from {root}")
    return HierarchicalTree(root, tuple(layers))


class UniformSource(Protocol):
    def random(self) -> float: ...


class BlockDraws:
    """Hands out a fixed block of uniforms; ``random.Random`` fits the same slot."""

    __slots__ = ("random",)

    def __init__(self, uniforms: Sequence[float]):
        self.random = iter(uniforms).__next__


class _MaskBits(dict):
    """``bits[mask]`` lists the providers set in ``mask``, filled on demand."""

    def __init__(self, m: int):
        super().__init__()
        self.m = m

    def __missing__(self, mask: int) -> list[int]:
        out = self[mask] = [j for j in range(self.m) if mask >> j & 1]
        return out


class _Plan:
    """Per-instance tables shared by every iteration of one solve."""

    def __init__(self, job: GraphJob, vc: VcTopology, params: SystemParams):
        self.job, self.vc, self.params = job, vc, params
        self.m = vc.m
        # largest load per provider that keeps its upload reliable
        self.cap = []
        for j in range(vc.m):
            c = 0
            while c < vc.kappa[j] and upload_ok(vc, params, j, c + 1):
                c += 1
            self.cap.append(c)
        # edge_mask[e][a]: bitmask of providers b such that job edge e may span a-b
        self.edge_mask = []
        self.nbrs: list[list[tuple[int, int]]] = [[] for _ in range(job.n)]
        for e, (i, k, w) in enumerate(job.edge_list):
            self.edge_mask.append([
                sum(1 << b for b in range(vc.m) if a == b or link_ok(vc, params, a, b, w))
                for a in range(vc.m)])
            self.nbrs[i].append((k, e))
            self.nbrs[k].append((i, e))
        self.trees = [build_hierarchical_tree(job, root) for root in range(job.n)] \
            if job.n and vc.total_slots >= job.n else []
        # Per tree and layer: (component, rows for earlier-layer neighbours,
        # (neighbour, row) for same-layer neighbours). Earlier layers are
        # always placed; same-layer ones depend on the shuffled order.
        self.tree_layers = []
        for tree in self.trees:
            depth = {i: d for d, layer in enumerate(tree.layers) for i in layer}
            self.tree_layers.append([
                [(i,
                  [(k, self.edge_mask[e]) for k, e in self.nbrs[i] if depth[k] < d],
                  [(k, self.edge_mask[e]) for k, e in self.nbrs[i] if depth[k] == d])
                 for i in layer]
                for d, layer in enumerate(tree.layers)])
        self.trans = vc.trans_list
        self.n = job.n
        self.kappa = list(vc.kappa)
        self.bits = _MaskBits(vc.m)
        self.initial_mask = self.open_mask([0] * vc.m)

    def open_mask(self, counts: Sequence[int]) -> int:
        return sum(1 << j for j in range(self.m) if counts[j] < self.cap[j])


@dataclass
class PlacementState:
    """Scratch state of one iteration."""

    free: list[int]
    counts: list[int]
    gamma: list[float]
    sp_of: list[Optional[int]]

    @classmethod
    def empty(cls, job: GraphJob, vc: VcTopology) -> "PlacementState":
        return cls(list(vc.kappa), [0] * vc.m, [0.0] * vc.m, [None] * job.n)

    def assignment(self) -> Assignment:
        return Assignment.from_providers(self.sp_of)


def _admissible(plan: _Plan, state: PlacementState, i: int) -> list[int]:
    sp = state.sp_of
    mask = plan.open_mask(state.counts)
    for k, e in plan.nbrs[i]:
        if sp[k] is not None:
            mask &= plan.edge_mask[e][sp[k]]
    return plan.bits[mask]


def admissible_providers(state: PlacementState, i: int, job: GraphJob, vc: VcTopology,
                         params: SystemParams) -> list[int]:
    """Providers that can take component ``i`` next without breaking a constraint."""
    return _admissible(_Plan(job, vc, params), state, i)


def _place_layer(plan: _Plan, state: PlacementState, entries, rng: UniformSource,
                 open_mask: int) -> int:
    """Core of :func:`place_layer`.

    ``entries`` are ``(component, placed_rows, pending)`` as built in
    :class:`_Plan`; ``open_mask`` marks providers below their load cap.
    Returns the updated mask, or -1 when a component is stuck.
    """
    draw = rng.random
    order = list(entries)
    for a in range(len(order) - 1, 0, -1):
        b = min(int(draw() * (a + 1)), a)
        order[a], order[b] = order[b], order[a]
    sp, free, counts, gamma = state.sp_of, state.free, state.counts, state.gamma
    cap, trans, bits = plan.cap, plan.trans, plan.bits
    for i, placed, pending in order:
        mask = open_mask
        for k, row in placed:
            mask &= row[sp[k]]
        for k, row in pending:
            a = sp[k]
            if a is not None:
                mask &= row[a]
        if not mask:
            return -1
        choices = bits[mask]
        # uniform over free slots == provider weighted by its free count
        total = 0
        for j in choices:
            total += free[j]
        u = min(int(draw() * total), total - 1)
        for j in choices:
            u -= free[j]
            if u < 0:
                break
        sp[i] = j
        free[j] -= 1
        c = counts[j] = counts[j] + 1
        gamma[j] = c * trans[j]
        if c >= cap[j]:
            open_mask &= ~(1 << j)
    return open_mask


def place_layer(state: PlacementState, layer: Sequence[int], job: GraphJob, vc: VcTopology,
                params: SystemParams, rng: UniformSource) -> bool:
    """Place one layer in a shuffled order; ``False`` if some component is stuck.

    On failure ``state`` is left partially updated and must be discarded.
    """
    plan = _Plan(job, vc, params)
    entries = [(i, [], [(k, plan.edge_mask[e]) for k, e in plan.nbrs[i]]) for i in layer]
    return _place_layer(plan, state, entries, rng, plan.open_mask(state.counts)) >= 0


def _sample(plan: _Plan, rng: UniformSource) -> Optional[PlacementState]:
    if not plan.trees:
        return None
    layers = plan.tree_layers[min(int(rng.random() * plan.n), plan.n - 1)]
    state = PlacementState(plan.kappa[:], [0] * plan.m, [0.0] * plan.m, [None] * plan.n)
    mask = plan.initial_mask
    for entries in layers:
        mask = _place_layer(plan, state, entries, rng, mask)
        if mask < 0:
            return None
    return state


def sample_iteration(job: GraphJob, vc: VcTopology, params: SystemParams,
                     rng: UniformSource) -> Optional[Assignment]:
    """One randomized placement attempt; ``None`` if it gets stuck."""
    state = _sample(_Plan(job, vc, params), rng)
    return None if state is None else state.assignment()


def draws_per_iteration(job: GraphJob) -> int:
    return 2 * job.n


def iteration_draws(seed: int, iteration: int, job: GraphJob) -> BlockDraws:
    """The uniforms iteration ``iteration`` of a ``seed``-seeded run consumes."""
    d = draws_per_iteration(job)
    bg = np.random.PCG64(np.random.SeedSequence(seed))
    bg.advance(d * iteration)
    return BlockDraws(np.random.Generator(bg).random(d).tolist())


def solve_randomized(job: GraphJob, vc: VcTopology, params: SystemParams, r: int = 100,
                     seed: int = 0, mode: CostMode = "per-edge") -> AllocationResult:
    """Best of ``r`` independent randomized iterations; ties keep the earliest."""
    if r < 1:
        raise ValueError("iteration count must be at least 1")
    start = time.perf_counter()
    plan = _Plan(job, vc, params)
    cost_of = cost_function(job, vc, mode)
    d = draws_per_iteration(job)
    uniforms = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed))) \
        .random((r, d)).tolist()
    best = None
    best_obj = math.inf
    trace = []
    for it in range(r):
        state = _sample(plan, BlockDraws(uniforms[it]))
        if state is not None:
            ct = completion_from_counts(vc, params, state.counts)
            ec = cost_of(state.sp_of)
            obj = combine(params, ct, ec)
            if obj < best_obj:
                best, best_obj = (state.assignment(), ct, ec), obj
        trace.append(best_obj)
    if best is not None:
        report = is_feasible(job, vc, params, best[0])
        if not report.feasible:
            raise AssertionError(f"layered placement produced an infeasible assignment: "
                                 f"{report.violations}")
    elapsed = time.perf_counter() - start
    meta = SolverMeta("rhtsi", r, seed, elapsed, tuple(trace))
    if best is None:
        return AllocationResult.infeasible(meta)
    x, ct, ec = best
    return AllocationResult(x, ct, ec, best_obj, True, meta)
