# %% [markdown]
# # Edge survival over repeated first iterations
#
# Freeze one graph and replay iteration 1 with fresh algorithm seeds.  Each
# edge should stay uncovered with probability `e^-1 - 1/X*2` regardless of
# how many cliques contain it.

# %%
import math

import numpy as np

from gnpcover import CoverParams, generate_gnp
from gnpcover.harness import estimate_selection, estimate_survival
from gnpcover.cliques import cliques_containing

g = generate_gnp(150, 0.5, 11)
params = CoverParams(schedule_override=(4,), rng_seed=3)
rep = estimate_survival(g, params, reps=1000, sampled_edges=30)
target = math.exp(-1) - 1 / rep.x_star_2
print(f"X*2 = {rep.x_star_2}, target {target:.4f}")

# %%
print(" x_u   freq   z")
for e in sorted(rep.edges, key=lambda e: e.x_u)[::3]:
    print(f"{e.x_u:4d}  {e.frequency:.3f}  {(e.frequency - e.target) / e.sigma:+.2f}")
print("within 4 sigma:", rep.fraction_within(4))

# %% [markdown]
# Counts `x_u` vary by a factor of two or more, yet frequencies do not
# drift with them.  Pairs of edges survive jointly at about `target^2`.

# %%
joint = np.array([pr.frequency for pr in rep.pairs])
print(f"pairs: mean joint {joint.mean():.4f}, target^2 {target ** 2:.4f}")

# %%
picks = [next(cliques_containing(e, 4, g)) for e in g.edge_list()[::400]]
sel = estimate_selection(g, params, picks, reps=2000)
print(f"keep probability 1/X*2 = {sel.target:.5f}")
print(np.round(sel.frequencies(), 5))

# %% [markdown]
# Error against the target shrinks like `1/sqrt(reps)`.

# %%
for reps in (100, 400, 1600):
    err = estimate_survival(g, params, reps, 30).mean_abs_error()
    print(reps, round(err, 4), round(err * math.sqrt(reps), 3))
