"""Contact model, objective terms and the four feasibility constraints."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal

from .model import (Assignment, GraphJob, SystemParams, VcTopology,
                    _check_assignment, derive_exchange_indicator)

CostMode = Literal["per-edge", "per-pair"]
COST_MODES = ("per-edge", "per-pair")


def contact_probability(T: float, lam: float) -> float:
    """Probability that an exponential contact with rate ``lam`` outlasts ``T``."""
    if not T >= 0:
        raise ValueError(f"duration must be non-negative, got {T}")
    if not lam > 0:
        raise ValueError(f"contact rate must be positive, got {lam}")
    return math.exp(-T * lam)


# The two helpers below are the single source of truth for constraints (b)
# and (c); both solvers prune with them so their verdicts agree bit-for-bit
# with is_feasible.

def link_reliability(vc: VcTopology, j: int, k: int, omega: float) -> float:
    """Contact probability required by a job edge of weight ``omega`` across ``j``-``k``."""
    t = vc.trans_list
    return contact_probability(abs(t[j] - t[k]) + omega, vc.rate_rows[j][k])


def link_ok(vc: VcTopology, params: SystemParams, j: int, k: int, omega: float) -> bool:
    return vc.adjacency_rows[j][k] and link_reliability(vc, j, k, omega) >= params.epsilon


def upload_reliability(vc: VcTopology, j: int, count: int) -> float:
    """Probability the JO-to-``j`` link survives uploading ``count`` components."""
    return contact_probability(count * vc.trans_list[j], vc.rate_rows[j][vc.jo])


def upload_ok(vc: VcTopology, params: SystemParams, j: int, count: int) -> bool:
    if j == vc.jo or count == 0:
        return True
    return vc.adjacency_rows[j][vc.jo] and upload_reliability(vc, j, count) >= params.xi


# Provider-vector kernels. Every solver scores candidates through these, so
# objective values agree exactly across solvers.

def completion_from_counts(vc: VcTopology, params: SystemParams, counts) -> float:
    t = vc.trans_list
    return max((counts[j] * t[j] for j in range(len(t) - 1)), default=0.0) + params.exec_time


def edge_cost_from_providers(job: GraphJob, vc: VcTopology, sp) -> float:
    c = vc.cost_rows
    # fsum is exactly rounded, so the value does not depend on edge order.
    return math.fsum(c[sp[i]][sp[k]] for i, k, _ in job.edge_list if sp[i] != sp[k])


def completion_time(job: GraphJob, vc: VcTopology, params: SystemParams, x: Assignment) -> float:
    """Slowest parallel upload plus the common execution time."""
    _check_assignment(job, vc, x)
    return completion_from_counts(vc, params, x.counts(vc.m))


def exchange_cost(job: GraphJob, vc: VcTopology, x: Assignment,
                  mode: CostMode = "per-edge") -> float:
    """Data-exchange cost of ``x``.

    ``per-edge`` charges ``cost[j, k]`` once for every job edge split across
    providers ``j != k``. ``per-pair`` charges each provider pair at most once,
    i.e. half the sum of ``y * cost`` over the exchange-indicator matrix.
    """
    if mode == "per-edge":
        _check_assignment(job, vc, x)
        return edge_cost_from_providers(job, vc, x.providers)
    if mode == "per-pair":
        y = derive_exchange_indicator(job, vc, x)
        m, c = vc.m, vc.cost_rows
        return math.fsum(c[j][k] for j in range(m) for k in range(j + 1, m) if y[j, k])
    raise ValueError(f"unknown cost mode {mode!r}")


def cost_function(job: GraphJob, vc: VcTopology, mode: CostMode):
    """``sp -> exchange cost`` for complete provider vectors ``sp``."""
    if mode == "per-edge":
        return lambda sp: edge_cost_from_providers(job, vc, sp)
    if mode == "per-pair":
        return lambda sp: exchange_cost(job, vc, Assignment.from_providers(sp), "per-pair")
    raise ValueError(f"unknown cost mode {mode!r}")


def combine(params: SystemParams, ct: float, ec: float) -> float:
    """Weighted sum; the one place the two objective terms are mixed."""
    return params.alpha1 * ct + params.alpha2 * ec


def objective(job: GraphJob, vc: VcTopology, params: SystemParams, x: Assignment,
              mode: CostMode = "per-edge") -> float:
    return combine(params, completion_time(job, vc, params, x), exchange_cost(job, vc, x, mode))


@dataclass(frozen=True)
class Violation:
    """``margin`` is achieved minus required; negative means violated."""

    constraint: str
    indices: tuple
    margin: float


def check_capacity(vc: VcTopology, x: Assignment) -> tuple[bool, list[Violation]]:
    """Constraint (a): at most ``kappa[j]`` components on provider ``j``."""
    out = []
    counts = [0] * vc.m
    for i, p in enumerate(x.placement):
        if p is None:
            continue
        j, s = p
        if not 0 <= j < vc.m:
            out.append(Violation("a", (i, j), -1.0))
            continue
        counts[j] += 1
        if s >= vc.kappa[j] or s < 0:
            out.append(Violation("a", (i, j, s), float(vc.kappa[j] - 1 - s)))
    for j, c in enumerate(counts):
        if c > vc.kappa[j]:
            out.append(Violation("a", (j,), float(vc.kappa[j] - c)))
    return not out, out


def check_pairwise_contact(job: GraphJob, vc: VcTopology, params: SystemParams,
                           x: Assignment) -> tuple[bool, list[Violation]]:
    """Constraint (b) on every job edge whose endpoints sit on different providers.

    Split edges also need a one-hop link between the two providers. Unplaced
    components are skipped.
    """
    out = []
    sp = x.providers
    for i, k, w in job.edge_list:
        a, b = sp[i], sp[k]
        if a is None or b is None or a == b:
            continue
        if not vc.adjacency[a, b]:
            out.append(Violation("b", (i, k, a, b), -params.epsilon))
            continue
        p = link_reliability(vc, a, b, w)
        if not p >= params.epsilon:
            out.append(Violation("b", (i, k, a, b), p - params.epsilon))
    return not out, out


def check_transmission(vc: VcTopology, params: SystemParams,
                       x: Assignment) -> tuple[bool, list[Violation]]:
    """Constraint (c): each loaded provider other than the JO must be reachable
    for its whole upload with probability at least ``xi``."""
    out = []
    counts = x.counts(vc.m)
    for j in range(vc.m - 1):
        if counts[j] == 0:
            continue
        if not vc.adjacency[j, vc.jo]:
            out.append(Violation("c", (j,), -params.xi))
            continue
        p = upload_reliability(vc, j, counts[j])
        if not p >= params.xi:
            out.append(Violation("c", (j,), p - params.xi))
    return not out, out


@dataclass(frozen=True)
class FeasibilityReport:
    capacity_ok: bool
    pairwise_contact_ok: bool
    transmission_ok: bool
    completeness_ok: bool
    violations: list[Violation] = field(default_factory=list)

    @property
    def feasible(self) -> bool:
        return (self.capacity_ok and self.pairwise_contact_ok
                and self.transmission_ok and self.completeness_ok)

    def __bool__(self):
        return self.feasible


def is_feasible(job: GraphJob, vc: VcTopology, params: SystemParams,
                x: Assignment) -> FeasibilityReport:
    if x.n != job.n:
        raise ValueError(f"assignment covers {x.n} components, job has {job.n}")
    cap, v_a = check_capacity(vc, x)
    if v_a:
        # out-of-range providers make the remaining checks meaningless
        if any(len(v.indices) == 2 for v in v_a):
            return FeasibilityReport(False, False, False, x.complete, v_a)
    pair, v_b = check_pairwise_contact(job, vc, params, x)
    trans, v_c = check_transmission(vc, params, x)
    missing = [i for i, p in enumerate(x.placement) if p is None]
    v_d = [Violation("d", tuple(missing), float(-len(missing)))] if missing else []
    return FeasibilityReport(cap, pair, trans, not missing, v_a + v_b + v_c + v_d)
