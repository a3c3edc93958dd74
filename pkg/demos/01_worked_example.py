"""Exchange cost of four placements of a five-component job.

The job has six data-flow edges. We place it four ways on a cloud of four
service providers plus the job owner (SP5) and compare the two cost
conventions: charging every crossing edge, or every provider pair once.
"""
from vcalloc import Assignment, GraphJob, SystemParams, VcTopology, exchange_cost, objective

edges = [(0, 2), (0, 4), (1, 4), (2, 4), (3, 4), (1, 3)]
job = GraphJob(5, tuple((i, k, 0.1) for i, k in edges))

# exchange cost between SPa and SPb, labelled 1..5 as in a drawing
cost = {(1, 2): 0.0625, (1, 3): 0.25, (1, 4): 0.1875, (1, 5): 0.125, (2, 3): 0.4375,
        (2, 4): 0.75, (2, 5): 0.375, (3, 4): 0.3125, (3, 5): 0.5, (4, 5): 0.625}
vc = VcTopology.from_edges([5] * 5, [(a - 1, b - 1, 0.01, c) for (a, b), c in cost.items()],
                           [0.25] * 4 + [0.0])

placements = {
    "everything on SP1": (0, 0, 0, 0, 0),
    "component 3 moved to SP3": (0, 0, 2, 0, 0),
    "spread, 1 and 5 on the JO": (4, 1, 2, 3, 4),
    "one component per provider": (0, 1, 2, 3, 4),
}

params = SystemParams(alpha1=0.5)
print(f"{'placement':<30}{'per-edge':>10}{'per-pair':>10}{'objective':>11}")
for name, sps in placements.items():
    x = Assignment.from_providers(sps)
    print(f"{name:<30}{exchange_cost(job, vc, x, 'per-edge'):>10.4f}"
          f"{exchange_cost(job, vc, x, 'per-pair'):>10.4f}"
          f"{objective(job, vc, params, x):>11.4f}")
