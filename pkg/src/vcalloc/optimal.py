"""Exact allocation: enumerate every feasible candidate, keep the cheapest.

:func:`enumerate_candidates` backtracks over components, choosing a provider
for each one and pruning on capacity, pairwise contact and upload
reliability as soon as they fail. Slots on one provider are interchangeable,
so a candidate is determined by its provider vector alone.

:func:`brute_force_oracle` is the slow, literal alternative used by the tests:
it walks every injective component-to-slot map and checks each with
:func:`~vcalloc.objective.is_feasible`.
"""
from __future__ import annotations

import itertools
import time
from dataclasses import dataclass
from typing import Iterator

from .model import AllocationResult, Assignment, GraphJob, SolverMeta, SystemParams, VcTopology
from .objective import (CostMode, combine, completion_from_counts, completion_time,
                        cost_function, exchange_cost, is_feasible, link_ok, objective,
                        upload_ok)

ORACLE_MAX_SLOTS = 12
ORACLE_MAX_COMPONENTS = 6


class OracleRefused(ValueError):
    """The instance is too large for exhaustive slot-level enumeration."""


@dataclass(frozen=True)
class Candidate:
    assignment: Assignment
    objective: float
    completion_time: float
    exchange_cost: float


def enumerate_candidates(job: GraphJob, vc: VcTopology, params: SystemParams,
                         mode: CostMode = "per-edge") -> Iterator[Candidate]:
    """Yield every feasible candidate in lexicographic order of provider vectors."""
    n, m = job.n, vc.m
    if vc.total_slots < n:
        return
    # For component k, the earlier neighbours whose provider is already fixed.
    back = [[(i, job.omega[(i, k)]) for i in job.neighbors[k] if i < k] for k in range(n)]
    sp = [0] * n
    counts = [0] * m
    link = {}
    cost_of = cost_function(job, vc, mode)

    def pair_ok(a, b, w):
        key = (a, b, w)
        ok = link.get(key)
        if ok is None:
            ok = link[key] = link_ok(vc, params, a, b, w)
        return ok

    def extend(k):
        if k == n:
            ct = completion_from_counts(vc, params, counts)
            ec = cost_of(sp)
            yield Candidate(Assignment.from_providers(sp), combine(params, ct, ec), ct, ec)
            return
        for j in range(m):
            c = counts[j]
            if c >= vc.kappa[j] or not upload_ok(vc, params, j, c + 1):
                continue
            if any(sp[i] != j and not pair_ok(sp[i], j, w) for i, w in back[k]):
                continue
            sp[k] = j
            counts[j] = c + 1
            yield from extend(k + 1)
            counts[j] = c

    yield from extend(0)


def solve_optimal(job: GraphJob, vc: VcTopology, params: SystemParams,
                  mode: CostMode = "per-edge") -> AllocationResult:
    """Minimum-objective candidate; ties go to the lexicographically smallest
    provider vector."""
    start = time.perf_counter()
    best = None
    count = 0
    for cand in enumerate_candidates(job, vc, params, mode):
        count += 1
        if best is None or cand.objective < best.objective:
            best = cand
    elapsed = time.perf_counter() - start
    meta = SolverMeta("opt", count, None, elapsed)
    if best is None:
        return AllocationResult.infeasible(meta)
    return AllocationResult(best.assignment, best.completion_time, best.exchange_cost,
                            best.objective, True, meta)


def brute_force_oracle(job: GraphJob, vc: VcTopology, params: SystemParams,
                       mode: CostMode = "per-edge") -> AllocationResult:
    """Scan all ``K!/(K-n)!`` injective slot maps with no symmetry reduction."""
    K, n = vc.total_slots, job.n
    if K > ORACLE_MAX_SLOTS or n > ORACLE_MAX_COMPONENTS:
        raise OracleRefused(
            f"oracle limited to K <= {ORACLE_MAX_SLOTS} and n <= {ORACLE_MAX_COMPONENTS}"
            f" (got K={K}, n={n})")
    start = time.perf_counter()
    slots = [(j, s) for j in range(vc.m) for s in range(vc.kappa[j])]
    best_key, best_x = None, None
    seen = 0
    for pick in itertools.permutations(slots, n):
        x = Assignment(pick)
        if not is_feasible(job, vc, params, x).feasible:
            continue
        seen += 1
        key = (objective(job, vc, params, x, mode), x.providers)
        if best_key is None or key < best_key:
            best_key, best_x = key, x
    elapsed = time.perf_counter() - start
    meta = SolverMeta("oracle", seen, None, elapsed)
    if best_x is None:
        return AllocationResult.infeasible(meta)
    ct = completion_time(job, vc, params, best_x)
    ec = exchange_cost(job, vc, best_x, mode)
    return AllocationResult(best_x, ct, ec, best_key[0], True, meta)

