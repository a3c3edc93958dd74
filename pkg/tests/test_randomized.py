import collections
import itertools
import math
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import LOOSE, full_vc, path_job, reference_instance, small_instance, triangle_job
from vcalloc import (GraphJob, PlacementState, SystemParams, VcTopology,
                     build_hierarchical_tree, is_feasible, objective, place_layer,
                     solve_optimal, solve_randomized)
from vcalloc.randomized import (BlockDraws, draws_per_iteration, iteration_draws,
                                sample_iteration)
from vcalloc.scenarios import job_topology


# -- hierarchical tree ----------------------------------------------------------

def test_bull_from_nose():
    # the nose is the degree-3 vertex whose other neighbours are the two horns' bases
    tree = build_hierarchical_tree(job_topology(3), 0)
    assert tree.layer_sizes == [1, 2, 2]
    assert tree.layers == ((0,), (1, 2), (3, 4))


def test_tadpole_from_tail_end():
    tree = build_hierarchical_tree(job_topology(5), 4)
    assert tree.layer_sizes == [1, 1, 1, 2]


@pytest.mark.parametrize("root", [0, 1, 2])
def test_triad_layers(root):
    assert build_hierarchical_tree(job_topology(1), root).layer_sizes == [1, 2]


def test_path_layers():
    job = path_job(3)
    assert build_hierarchical_tree(job, 1).layer_sizes == [1, 2]
    assert build_hierarchical_tree(job, 0).layer_sizes == [1, 1, 1]


def test_tree_errors():
    with pytest.raises(ValueError, match="disconnected"):
        build_hierarchical_tree(GraphJob(3, ((0, 1, 0.1),)), 0)
    with pytest.raises(ValueError):
        build_hierarchical_tree(path_job(3), 3)


@given(st.integers(1, 5), st.data())
def test_tree_partitions_and_links_layers(job_type, data):
    job = job_topology(job_type)
    tree = build_hierarchical_tree(job, data.draw(st.integers(0, job.n - 1)))
    flat = [i for layer in tree.layers for i in layer]
    assert sorted(flat) == list(range(job.n))
    for up, down in zip(tree.layers, tree.layers[1:]):
        for i in down:
            assert set(job.neighbors[i]) & set(up)


# -- place_layer -------------------------------------------------------------------

def test_single_free_slot_is_always_chosen():
    job = GraphJob(1, ())
    vc = full_vc([0, 1, 0], [0.2, 0.3, 0.0])
    for seed in range(20):
        state = PlacementState.empty(job, vc)
        assert place_layer(state, (0,), job, vc, LOOSE, random.Random(seed))
        assert state.sp_of == [1]
        assert state.free == [0, 0, 0] and state.counts == [0, 1, 0]
        assert state.gamma[1] == 0.3


def _unlinked_pair_vc(kappa):
    return VcTopology.from_edges(kappa, [(0, 2, 0.01, 0.3), (1, 2, 0.01, 0.3)],
                                 [0.2, 0.2, 0.0])


def test_unlinked_split_rejected_colocation_accepted():
    job = GraphJob(2, ((0, 1, 0.0),))
    vc = _unlinked_pair_vc([2, 1, 0])
    for seed in range(50):
        state = PlacementState.empty(job, vc)
        ok = place_layer(state, (0, 1), job, vc, LOOSE, random.Random(seed))
        # the first component may take the lone SP1 slot and strand the second
        if ok:
            assert state.sp_of == [0, 0]
    vc = _unlinked_pair_vc([1, 1, 0])
    for seed in range(20):
        state = PlacementState.empty(job, vc)
        assert not place_layer(state, (0, 1), job, vc, LOOSE, random.Random(seed))


def test_upload_limit_counts_the_new_component():
    # one component on SP0 is reliable enough, two are not
    job = GraphJob(2, ((0, 1, 0.0),))
    lam = -math.log(0.9) / 0.3  # e^{-lam * 0.3} == 0.9 exactly at one component
    vc = VcTopology.from_edges([2, 0], [(0, 1, lam * 0.999, 0.3)], [0.3, 0.0])
    params = SystemParams(epsilon=0.01, xi=0.9)
    state = PlacementState.empty(job, vc)
    assert not place_layer(state, (0, 1), job, vc, params, random.Random(0))
    single = GraphJob(1, ())
    state = PlacementState.empty(single, vc)
    assert place_layer(state, (0,), single, vc, params, random.Random(0))


# -- exact sampling distribution ------------------------------------------------

def _link(vc, params, a, b, w):
    if a == b:
        return True
    if not vc.adjacency[a, b]:
        return False
    return math.exp(-(abs(vc.trans[a] - vc.trans[b]) + w) * vc.rate[a, b]) >= params.epsilon


def _upload(vc, params, j, count):
    if j == vc.m - 1:
        return True
    return math.exp(-count * vc.trans[j] * vc.rate[j, vc.m - 1]) >= params.xi


def exact_distribution(job, vc, params):
    """Outcome probabilities of one iteration, by enumerating every random choice.

    Root uniform, each layer in a uniformly random order, each component on a
    uniformly random free slot among admissible ones. ``None`` collects the
    probability of getting stuck.
    """
    out = collections.defaultdict(Fraction)
    nbr = {i: {} for i in range(job.n)}
    for i, k, w in job.edge_list:
        nbr[i][k] = w
        nbr[k][i] = w

    def place(order, sp, free, prob, rest):
        if not order:
            if not rest:
                out[tuple(sp)] += prob
                return
            layer = rest[0]
            perms = list(itertools.permutations(layer))
            for p in perms:
                place(list(p), sp, free, prob / len(perms), rest[1:])
            return
        i = order[0]
        ok = []
        for j in range(vc.m):
            if free[j] == 0:
                continue
            if not _upload(vc, params, j, vc.kappa[j] - free[j] + 1):
                continue
            if all(sp[k] is None or _link(vc, params, sp[k], j, w) for k, w in nbr[i].items()):
                ok.append(j)
        total = sum(free[j] for j in ok)
        if total == 0:
            out[None] += prob
            return
        for j in ok:
            sp2, free2 = list(sp), list(free)
            sp2[i] = j
            free2[j] -= 1
            place(order[1:], sp2, free2, prob * Fraction(free[j], total), rest)

    for root in range(job.n):
        layers = build_hierarchical_tree(job, root).layers
        place([], [None] * job.n, list(vc.kappa), Fraction(1, job.n), list(layers))
    return dict(out)


def _tight_instance():
    # path a-b-c; SP0-SP1 unlinked, SP1 holds one slot, JO one slot
    vc = VcTopology.from_edges([2, 1, 1], [(0, 2, 0.02, 0.3), (1, 2, 0.05, 0.4)],
                               [0.2, 0.5, 0.0])
    return path_job(3, omega=0.2), vc, SystemParams(epsilon=0.9, xi=0.9)


def test_exact_distribution_sums_to_one():
    for job, vc, params in (reference_instance(), _tight_instance()):
        dist = exact_distribution(job, vc, params)
        assert sum(dist.values()) == 1


@pytest.mark.slow
@pytest.mark.parametrize("make", [reference_instance, _tight_instance])
def test_empirical_frequencies_match_exact(make):
    job, vc, params = make()
    dist = exact_distribution(job, vc, params)
    trials = 100_000
    rng = random.Random(12345)
    seen = collections.Counter()
    for _ in range(trials):
        x = sample_iteration(job, vc, params, rng)
        seen[None if x is None else x.providers] += 1
    assert set(seen) <= set(dist)
    for outcome, p in dist.items():
        p = float(p)
        sd = math.sqrt(p * (1 - p) / trials)
        assert abs(seen[outcome] / trials - p) <= 5 * sd + 1e-9, outcome


# -- solve_randomized ---------------------------------------------------------------

def test_only_jo_gives_all_on_jo():
    vc = VcTopology.from_edges([4], [], [0.0])
    params = SystemParams(alpha1=0.5)
    for r in (1, 7):
        res = solve_randomized(triangle_job(), vc, params, r=r, seed=3)
        assert res.assignment.providers == (0, 0, 0)
        assert res.objective == 0.5 * params.exec_time


def test_too_few_slots():
    vc = full_vc([1, 0, 1], [0.2, 0.3, 0.0])
    res = solve_randomized(triangle_job(), vc, LOOSE, r=1)
    assert not res.feasible and res.assignment is None and math.isinf(res.objective)


def test_iteration_count_validated():
    job, vc, params = reference_instance()
    with pytest.raises(ValueError):
        solve_randomized(job, vc, params, r=0)


def test_reference_gap_shrinks_with_r():
    job, vc, params = reference_instance()
    opt = solve_optimal(job, vc, params).objective
    gaps = [solve_randomized(job, vc, params, r=r, seed=7).objective - opt for r in (1, 10, 1000)]
    assert gaps[0] >= gaps[1] >= gaps[2] >= 0
    assert gaps[2] == 0.0


def test_deterministic_given_seed():
    job, vc, params = small_instance(5)
    a = solve_randomized(job, vc, params, r=50, seed=11)
    b = solve_randomized(job, vc, params, r=50, seed=11)
    assert a == b and a.meta.trace == b.meta.trace


def test_iterations_replay_individually():
    job, vc, params = reference_instance()
    d = draws_per_iteration(job)
    bulk = np.random.Generator(np.random.PCG64(np.random.SeedSequence(9))).random((6, d))
    for k in range(6):
        block = iteration_draws(9, k, job)
        assert [block.random() for _ in range(d)] == bulk[k].tolist()


def test_parallel_reduction_matches_serial():
    job, vc, params = reference_instance()
    r, seed = 40, 4
    serial = solve_randomized(job, vc, params, r=r, seed=seed)
    # evaluate iterations out of order, then reduce by (objective, index)
    scored = []
    for k in reversed(range(r)):
        x = sample_iteration(job, vc, params, iteration_draws(seed, k, job))
        if x is not None:
            scored.append((objective(job, vc, params, x), k, x))
    best = min(scored, key=lambda t: t[:2])
    assert serial.objective == best[0]
    assert serial.assignment.providers == best[2].providers


def test_block_draws_run_out():
    rng = BlockDraws([0.5])
    rng.random()
    with pytest.raises(StopIteration):
        rng.random()


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 60), st.integers(0, 2**32))
def test_outputs_feasible_and_never_superoptimal(inst, r, seed):
    job, vc, params = small_instance(inst)
    res = solve_randomized(job, vc, params, r=r, seed=seed)
    opt = solve_optimal(job, vc, params)
    trace = res.meta.trace
    assert len(trace) == r
    assert all(a >= b for a, b in zip(trace, trace[1:]))
    assert trace[-1] == res.objective
    if res.feasible:
        assert is_feasible(job, vc, params, res.assignment).feasible
        assert res.objective >= opt.objective
        assert res.objective == params.alpha1 * res.completion_time + \
            params.alpha2 * res.exchange_cost
    else:
        assert math.isinf(res.objective)


@pytest.mark.slow
def test_loose_large_r_finds_optimum():
    # every candidate has positive probability under loose thresholds
    hits = 0
    for inst in range(10):
        job, vc, _ = small_instance(inst)
        opt = solve_optimal(job, vc, LOOSE).objective
        hits += solve_randomized(job, vc, LOOSE, r=10_000, seed=inst).objective == opt
    assert hits == 10
