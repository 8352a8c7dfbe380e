# %% [markdown]
# # Normalised cover size across n
#
# `r(n) = |cover| (ln n)^2 / n^2` against the counting lower bound.  Small
# grid here; the acceptance suite runs n up to 1024.

# %%
import tempfile

from gnpcover import ExperimentConfig, derive_schedule, CoverParams, run_experiment, summarize_scaling

out = tempfile.mkdtemp()
cfg = ExperimentConfig(n_grid=[64, 128, 256], p=0.5, alpha=0.55, seeds=[0, 1, 2], output_dir=out)
summaries = run_experiment(cfg)
print(summarize_scaling(summaries, 0.5).format())

# %%
for s in summaries:
    print(f"n={s.n} seed={s.seed} m={s.m} cover={s.cover_size} greedy={s.greedy_size} "
          f"lower={s.lower} final 2-cliques={s.uncovered_final} ({s.exit_reason})")

# %% [markdown]
# With `alpha = 0.55` and `p = 1/2` the schedule has a single iteration for
# every n here: `floor(k/2) < 3`.  About `e^-1` of the edges are left for the
# final pass and become 2-cliques, so the cover has `Theta(m)` members and
# `r(n)` grows like `(ln n)^2`.  The asymptotic regime needs `k/i` to stay
# large over many iterations.

# %%
for n in (128, 1024, 2**20, 2**40):
    s = derive_schedule(n, CoverParams(alpha=0.55, p=0.5))
    print(n, s.k, s.i0, s.sizes)
