"""Trading completion time against exchange cost.

Sweeping the completion-time weight from 0 to 1 on one instance: the optimum
moves from co-located placements (cheap, slow uploads) toward spread
placements that shorten the slowest upload.
"""
import numpy as np

from vcalloc import solve_optimal
from vcalloc.scenarios import ScenarioConfig, random_instance

cfg = ScenarioConfig(sp_count=(5, 5), slots_per_sp=(2, 4))
job, vc, params = random_instance(3, cfg, np.random.default_rng(3))
print(f"slots per provider {vc.kappa}, upload times {np.round(vc.trans, 3).tolist()}")
print(f"{'alpha1':>6} {'completion':>11} {'exchange':>9}  placement")
for a1 in np.linspace(0, 1, 9):
    res = solve_optimal(job, vc, params.with_alpha1(float(a1)))
    print(f"{a1:>6.3f} {res.completion_time:>11.4f} {res.exchange_cost:>9.4f}  "
          f"{res.assignment.providers}")
