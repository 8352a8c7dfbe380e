# %% [markdown]
# # One cover, step by step
#
# Build G(n, p), look at the clique-size schedule, run the two steps of the
# first iteration by hand, then compare with a full run.

# %%
import math

import numpy as np

from gnpcover import CoverParams, derive_schedule, generate_gnp, run_cover, verify_cover
from gnpcover.cover import CoverState, cover_accounting, step_a, step_b
from gnpcover.baselines import greedy_cover, lower_bound

n, p, seed = 200, 0.5, 7
g = generate_gnp(n, p, seed)
print(g, "expected m =", math.comb(n, 2) * p)

# %% [markdown]
# The schedule is `k_i = floor(k / i)` with `k = floor(alpha log_{1/p} n)`.
# At this size it stops after one or two iterations: a size below 3 ends it.

# %%
for alpha in (0.55, 0.8, 1.0):
    print(alpha, derive_schedule(n, CoverParams(alpha=alpha, p=p)))

# %%
state = CoverState.initial(g, seed=seed)
kept, stats = step_a(state, 4)
print(f"4-cliques: {stats.N}, busiest edge lies in X*2 = {stats.x_star_2}")
print(f"Step A kept {len(kept)} cliques (mean {stats.N / stats.x_star_2:.1f})")
print(f"uncovered after Step A: {state.active.size} of {g.m}")

# %% [markdown]
# Step B patches each surviving edge with a probability that depends on how
# many cliques it was offered, so every edge ends the iteration uncovered
# with the same probability `e^-1 - 1/X*2`.

# %%
added = step_b(state, stats)
print(f"Step B added {len(added)} edges, {state.active.size} remain")
print(f"fraction remaining {state.active.size / g.m:.4f}, "
      f"predicted {math.exp(-1) - 1 / stats.x_star_2:.4f}")

# %%
run = run_cover(g, CoverParams(alpha=1.0, p=p, rng_seed=seed))
print(run.schedule, run.exit_reason)
for r in run.records:
    print(r)
print("valid:", bool(verify_cover(g, run.cover)))
print("cover", len(run.cover), "=", cover_accounting(run))
print("lower bound", lower_bound(g).lower, "greedy", len(greedy_cover(g)), "edges", g.m)

# %%
sizes = np.bincount([len(c) for c in run.cover])
print({k: int(v) for k, v in enumerate(sizes) if v})
