"""Shared fixtures: the five-component worked example, small reference
instances, and a generator of oracle-sized random instances."""
from __future__ import annotations

import numpy as np
import pytest

from vcalloc import Assignment, GraphJob, SystemParams, VcTopology
from vcalloc.scenarios import ScenarioConfig, random_instance

# Worked example. Components are labelled 1..5 in the drawing; here they are
# 0..4. Providers SP1..SP5 are 0..4, SP5 being the job owner.
BOWTIE_EDGES = [(0, 2), (0, 4), (1, 4), (2, 4), (3, 4), (1, 3)]

# Dyadic exchange costs keep every sum exact in binary floating point.
BOWTIE_COST = {
    (1, 2): 0.0625, (1, 3): 0.25, (1, 4): 0.1875, (1, 5): 0.125,
    (2, 3): 0.4375, (2, 4): 0.75, (2, 5): 0.375,
    (3, 4): 0.3125, (3, 5): 0.5,
    (4, 5): 0.625,
}


def c(a: int, b: int) -> float:
    """Exchange cost between SPa and SPb, 1-based like the drawing."""
    return BOWTIE_COST[(min(a, b), max(a, b))]


def bowtie_job() -> GraphJob:
    return GraphJob(5, tuple((i, k, 0.1) for i, k in BOWTIE_EDGES))


def bowtie_vc() -> VcTopology:
    rows = [(a - 1, b - 1, 0.01, cost) for (a, b), cost in BOWTIE_COST.items()]
    return VcTopology.from_edges([5] * 5, rows, [0.25, 0.25, 0.25, 0.25, 0.0])


# The four illustrated candidates as 0-based provider vectors.
BOWTIE_CANDIDATES = {
    1: (0, 0, 0, 0, 0),
    2: (0, 0, 2, 0, 0),
    3: (4, 1, 2, 3, 4),
    4: (0, 1, 2, 3, 4),
}

BOWTIE_EXPECTED = {
    1: 0.0,
    2: 2 * c(1, 3),
    3: 2 * c(3, 5) + c(2, 5) + c(4, 5) + c(2, 4),
    4: c(1, 3) + c(1, 5) + c(2, 5) + c(3, 5) + c(4, 5) + c(2, 4),
}


@pytest.fixture
def bowtie():
    return bowtie_job(), bowtie_vc()


def triangle_job(omega: float = 0.1) -> GraphJob:
    return GraphJob(3, ((0, 1, omega), (1, 2, omega), (0, 2, omega)), job_type=1)


def path_job(n: int = 3, omega: float = 0.1) -> GraphJob:
    return GraphJob(n, tuple((i, i + 1, omega) for i in range(n - 1)))


def full_vc(kappa, trans, rate=0.01, cost=0.5) -> VcTopology:
    m = len(kappa)
    rows = [(j, k, rate, cost) for j in range(m) for k in range(j + 1, m)]
    return VcTopology.from_edges(kappa, rows, trans)


LOOSE = SystemParams(epsilon=0.01, xi=0.01, alpha1=0.5)


def reference_instance():
    """Triangle job on three providers with slots [2, 2, 1] and loose thresholds."""
    vc = VcTopology.from_edges(
        [2, 2, 1],
        [(0, 1, 0.02, 0.3), (0, 2, 0.03, 0.5), (1, 2, 0.01, 0.25)],
        [0.2, 0.4, 0.0])
    return triangle_job(), vc, LOOSE


@pytest.fixture
def reference():
    return reference_instance()


def small_instance(seed: int, params: SystemParams | None = None):
    """Random instance with n <= K <= 10 and n <= 5, drawn reproducibly from ``seed``."""
    rng = np.random.default_rng(seed)
    while True:
        job_type = int(rng.choice([1, 2, 3, 5]))
        m = int(rng.integers(2, 6))
        cfg = ScenarioConfig(sp_count=(m, m), slots_per_sp=(0, 3), rate=(0.01, 0.2),
                             alpha1=float(rng.choice([0.0, 0.25, 0.5, 0.75, 1.0])))
        job, vc, p = random_instance(job_type, cfg, rng)
        if job.n <= vc.total_slots <= 10:
            break
    if params is not None:
        p = params
    return job, vc, p


def placement(*sps) -> Assignment:
    return Assignment.from_providers(sps)



def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "REPORT", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
