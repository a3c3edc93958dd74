"""Exact search against the layered randomized allocator.

Draws a handful of double-star jobs on five-provider clouds and reports the
optimum, what the randomized allocator finds for a few iteration budgets,
and how long each takes.
"""
import time

import numpy as np

from vcalloc import solve_optimal, solve_randomized
from vcalloc.scenarios import ScenarioConfig, random_instance

cfg = ScenarioConfig(sp_count=(5, 5), slots_per_sp=(4, 6))
budgets = (10, 100, 1000)

print(f"{'inst':>4} {'cands':>6} {'opt':>8} {'ms':>7}" +
      "".join(f" {'r=' + str(r):>8} {'ms':>6}" for r in budgets))
for k in range(6):
    job, vc, params = random_instance(4, cfg, np.random.default_rng(k))
    t = time.perf_counter()
    opt = solve_optimal(job, vc, params)
    line = f"{k:>4} {opt.meta.iterations:>6} {opt.objective:>8.4f} " \
           f"{(time.perf_counter() - t) * 1e3:>7.1f}"
    for r in budgets:
        t = time.perf_counter()
        res = solve_randomized(job, vc, params, r=r, seed=k)
        line += f" {res.objective:>8.4f} {(time.perf_counter() - t) * 1e3:>6.1f}"
    print(line)

# The incumbent only ever improves; here is one run's trace, thinned out.
job, vc, params = random_instance(3, cfg, np.random.default_rng(42))
trace = solve_randomized(job, vc, params, r=200, seed=1).meta.trace
print("\nbest-so-far every 20 iterations:", [round(v, 4) for v in trace[::20]])
