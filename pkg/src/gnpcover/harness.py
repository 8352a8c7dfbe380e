"""Batch experiments on G(n, p): cover sizes against baselines, clique-count
concentration, and Monte Carlo survival frequencies for a frozen iteration.

Files written by :func:`run_experiment` into ``output_dir``:

``iterations.csv``
    ``n,p,alpha,seed,i,k_i,Y_i,Z_i,x_star_2,x_star_3,uncovered_after,elapsed_ms``
``summary.csv`` / ``summary.json``
    one :class:`RunSummary` per ``(n, seed)`` cell
``covers/n{n}_seed{seed}.txt``
    the cover, one clique per line (when ``save_covers``)
``survival.csv``
    per-edge survival frequencies (when ``monte_carlo_reps > 0``)
"""
from __future__ import annotations

import csv
import dataclasses
import io
import json
import logging
import math
import multiprocessing
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from . import _kernels, rng
from .baselines import c1_reference, greedy_cover, lower_bound
from .cliques import (DEFAULT_CLIQUE_BUDGET, check_budget, count_containing, count_per_edge,
                      expected_count)
from .cover import (CoverParams, derive_schedule, patch_edges, rho_array, run_cover,
                    select_cliques, verify_cover, write_cover)
from .errors import SizingError
from .graph import EdgeSet, Graph, edge_pair, generate_gnp, pair_count

log = logging.getLogger(__name__)

ITERATION_COLUMNS = ["n", "p", "alpha", "seed", "i", "k_i", "Y_i", "Z_i", "x_star_2",
                     "x_star_3", "uncovered_after", "elapsed_ms"]
SUMMARY_COLUMNS = ["n", "p", "alpha", "seed", "status", "m", "omega", "lower", "greedy_size",
                   "cover_size", "sum_Y", "sum_Z", "uncovered_final", "uncovered_bound",
                   "ratio", "exit_reason", "valid", "predicted_Yi"]
SURVIVAL_COLUMNS = ["n", "seed", "u", "v", "x_u", "x_star_2", "reps", "frequency", "target",
                    "sigma"]


@dataclass
class ExperimentConfig:
    n_grid: list[int]
    p: float = 0.5
    alpha: float = 0.55
    seeds: list[int] = field(default_factory=lambda: [0])
    schedule_override: list[int] | None = None
    monte_carlo_reps: int = 0
    sampled_edges: int = 50
    output_dir: str = "results"
    clique_budget: float = DEFAULT_CLIQUE_BUDGET
    save_covers: bool = True
    greedy: bool = True

    def __post_init__(self):
        self.n_grid = [int(n) for n in self.n_grid]
        self.seeds = [rng.check_seed(s) for s in self.seeds]
        if not self.seeds:
            raise ValueError("at least one seed is required")
        if any(n < 3 for n in self.n_grid):
            raise ValueError("every grid size must be at least 3")
        if self.schedule_override is not None:
            self.schedule_override = [int(k) for k in self.schedule_override]

    def cover_params(self, seed: int) -> CoverParams:
        sched = tuple(self.schedule_override) if self.schedule_override else None
        return CoverParams(alpha=self.alpha, p=self.p, schedule_override=sched,
                           rng_seed=seed, clique_budget=self.clique_budget)


@dataclass
class RunSummary:
    n: int
    p: float
    alpha: float
    seed: int
    status: str = "ok"
    m: int | None = None
    omega: int | None = None
    lower: int | None = None
    greedy_size: int | None = None
    cover_size: int | None = None
    sum_Y: int | None = None
    sum_Z: int | None = None
    uncovered_final: int | None = None
    uncovered_bound: float | None = None
    ratio: float | None = None
    exit_reason: str | None = None
    valid: bool | None = None
    predicted_Yi: list[float] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.status == "ok"


@dataclass
class ConditionReport:
    i: int
    j: int
    beta_i: float
    gamma_i: float
    max_upper_ratio: float
    violating_edge_count: int
    violation_budget: float
    upper_ratios: dict[int, list[float]] = field(default_factory=dict)
    predictions: dict[int, float] = field(default_factory=dict)


@dataclass
class EdgeSurvival:
    u: int
    v: int
    x_u: int
    survived: int
    frequency: float
    target: float
    sigma: float

    def within(self, k: float = 4.0) -> bool:
        return abs(self.frequency - self.target) <= k * self.sigma


@dataclass
class PairSurvival:
    first: tuple[int, int]
    second: tuple[int, int]
    frequency: float
    independent: float


@dataclass
class SurvivalReport:
    k: int
    x_star_2: int
    reps: int
    edges: list[EdgeSurvival]
    pairs: list[PairSurvival]

    def fraction_within(self, k: float = 4.0) -> float:
        return sum(e.within(k) for e in self.edges) / len(self.edges) if self.edges else 1.0

    def mean_abs_error(self) -> float:
        return float(np.mean([abs(e.frequency - e.target) for e in self.edges]))


@dataclass
class SelectionReport:
    k: int
    x_star_2: int
    reps: int
    cliques: list[tuple[int, ...]]
    hits: list[int]

    @property
    def target(self) -> float:
        return 1.0 / self.x_star_2

    @property
    def sigma(self) -> float:
        q = self.target
        return math.sqrt(q * (1 - q) / self.reps)

    def frequencies(self) -> list[float]:
        return [h / self.reps for h in self.hits]


@dataclass
class ScalingRow:
    n: int
    mean_ratio: float
    stderr: float
    runs: int


@dataclass
class ScalingTable:
    rows: list[ScalingRow]
    c1_reference: float
    verdict: str

    def format(self) -> str:
        lines = [f"{'n':>6}  {'mean ratio':>11}  {'stderr':>9}  runs"]
        for r in self.rows:
            lines.append(f"{r.n:>6}  {r.mean_ratio:>11.4f}  {r.stderr:>9.4f}  {r.runs}")
        lines.append(f"lower-bound constant c1 = {self.c1_reference:.4f}")
        lines.append(f"verdict: {self.verdict}")
        return "\n".join(lines)


# ---------------------------------------------------------------- single cell


def predicted_steps(n: int, p: float, k: int, iterations: int) -> list[float]:
    """Expected Step A yield per iteration, ``n^2 i^2 p / (k^2 e^{i-1})``."""
    return [n * n * i * i * p / (k * k * math.exp(i - 1)) for i in range(1, iterations + 1)]


def run_cell(n: int, seed: int, config: ExperimentConfig) -> tuple[RunSummary, list[list], str | None]:
    """Generate, cover, verify and bound one instance.

    Returns the summary, its per-iteration CSV rows and the cover file text.
    """
    summary = RunSummary(n=n, p=config.p, alpha=config.alpha, seed=seed)
    g = generate_gnp(n, config.p, seed)
    params = config.cover_params(seed)
    try:
        run = run_cover(g, params)
    except SizingError as exc:
        summary.status = f"sizing: {exc}"
        summary.m = g.m
        return summary, [], None
    verdict = verify_cover(g, run.cover)
    bounds = lower_bound(g, config.p if 0 < config.p else None)
    summary.m = g.m
    summary.omega = bounds.omega
    summary.lower = bounds.lower
    summary.greedy_size = len(greedy_cover(g)) if config.greedy else None
    summary.cover_size = len(run.cover)
    summary.sum_Y = sum(r.Y_i for r in run.records)
    summary.sum_Z = sum(r.Z_i for r in run.records)
    summary.uncovered_final = run.uncovered_final
    summary.uncovered_bound = n * n / math.log(n) ** 3
    summary.ratio = len(run.cover) * math.log(n) ** 2 / (n * n)
    summary.exit_reason = run.exit_reason
    summary.valid = bool(verdict)
    if run.schedule is not None and run.schedule.k > 0:
        summary.predicted_Yi = predicted_steps(n, config.p, run.schedule.k, len(run.schedule.sizes))
    if not verdict:
        summary.status = f"invalid cover: {verdict.reason} {verdict.witness}"
    rows = [[n, config.p, config.alpha, seed, r.i, r.k_i, r.Y_i, r.Z_i, r.x_star_2, r.x_star_3,
             r.uncovered_after, round(r.elapsed * 1000.0, 3)] for r in run.records]
    text = None
    if config.save_covers:
        buf = io.StringIO()
        write_cover(run.cover, buf)
        text = buf.getvalue()
    return summary, rows, text


def _cell_job(args):
    n, seed, config = args
    summary, rows, text = run_cell(n, seed, config)
    survival = []
    if config.monte_carlo_reps > 0 and summary.ok:
        g = generate_gnp(n, config.p, seed)
        try:
            rep = estimate_survival(g, config.cover_params(seed), config.monte_carlo_reps,
                                    config.sampled_edges)
        except SizingError as exc:
            log.warning("survival skipped for n=%d seed=%d: %s", n, seed, exc)
        else:
            survival = [[n, seed, e.u, e.v, e.x_u, rep.x_star_2, rep.reps, e.frequency,
                         e.target, e.sigma] for e in rep.edges]
    return summary, rows, text, survival


def run_experiment(config: ExperimentConfig, workers: int = 1) -> list[RunSummary]:
    """Run every ``(n, seed)`` cell and write the result files.

    Cells run in up to ``workers`` processes; files are written afterwards in
    grid order, so their contents do not depend on ``workers``.
    """
    jobs = [(n, seed, config) for n in config.n_grid for seed in config.seeds]
    if workers > 1:
        ctx = multiprocessing.get_context("spawn")
        with ProcessPoolExecutor(max_workers=workers, mp_context=ctx) as pool:
            results = list(pool.map(_cell_job, jobs))
    else:
        results = [_cell_job(job) for job in jobs]

    out = Path(config.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    summaries = [r[0] for r in results]
    with open(out / "iterations.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(ITERATION_COLUMNS)
        for _, rows, _, _ in results:
            w.writerows(rows)
    with open(out / "summary.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(SUMMARY_COLUMNS)
        for s in summaries:
            row = dataclasses.asdict(s)
            row["predicted_Yi"] = ";".join(repr(y) for y in s.predicted_Yi)
            w.writerow(["" if row[c] is None else row[c] for c in SUMMARY_COLUMNS])
    with open(out / "summary.json", "w") as fh:
        json.dump([dataclasses.asdict(s) for s in summaries], fh, indent=1)
        fh.write("\n")
    if config.save_covers:
        (out / "covers").mkdir(exist_ok=True)
        for s, (_, _, text, _) in zip(summaries, results):
            if text is not None:
                (out / "covers" / f"n{s.n}_seed{s.seed}.txt").write_text(text)
    if config.monte_carlo_reps > 0:
        with open(out / "survival.csv", "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(SURVIVAL_COLUMNS)
            for *_, rows in results:
                w.writerows(rows)
    return summaries


def load_config(path: str | os.PathLike) -> ExperimentConfig:
    """Read a JSON object or flat ``key=value`` lines (lists comma-separated)."""
    text = Path(path).read_text()
    if text.lstrip().startswith("{"):
        return ExperimentConfig(**json.loads(text))
    fields = {f.name: f for f in dataclasses.fields(ExperimentConfig)}
    kwargs = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected key=value")
        k, v = (s.strip() for s in line.split("=", 1))
        if k not in fields:
            raise ValueError(f"{path}:{lineno}: unknown key '{k}'")
        kwargs[k] = _parse_value(k, v)
    return ExperimentConfig(**kwargs)


def _parse_value(key: str, value: str):
    if key in ("n_grid", "seeds", "schedule_override"):
        return [int(x) for x in value.split(",") if x.strip()] or None
    if key in ("save_covers", "greedy"):
        return value.lower() in ("1", "true", "yes", "on")
    if key in ("monte_carlo_reps", "sampled_edges"):
        return int(value)
    if key in ("p", "alpha", "clique_budget"):
        return float(value)
    return value


# ---------------------------------------------------------------- concentration


def check_conditions(g: Graph, j: int, sampled_S: int, seed: int = 0, *,
                     active: EdgeSet | None = None, i: int = 1,
                     p: float | None = None) -> ConditionReport:
    """Compare clique counts with their predictions at iteration ``i``.

    Upper ratios ``X(S, j) / c(s, j, i)`` are measured for ``S`` empty, for
    ``sampled_S`` random active edges and for ``sampled_S`` random active
    triangles.  The lower tail is a full census of active edges against
    ``(1 - gamma_i) c(2, j, i)``.  The asymptotic thresholds ``beta_i = i n^-1/4``,
    ``gamma_i = i n^-1/16`` and the budget ``i n^{31/16}`` are reported, not
    enforced.
    """
    n = g.n
    active = EdgeSet.full(g) if active is None else active
    if p is None:
        p = g.m / pair_count(n) if n > 1 else 1.0
    beta = i * n ** -0.25
    gamma = i * n ** (-1 / 16)
    report = ConditionReport(i=i, j=j, beta_i=beta, gamma_i=gamma, max_upper_ratio=0.0,
                             violating_edge_count=0, violation_budget=i * n ** (31 / 16))
    if active.size == 0 or j > n:
        return report
    stats = count_per_edge(j, g, active)
    c = {s: expected_count(s, j, i, n, p) for s in (0, 2, 3) if s <= j}
    report.predictions = c
    report.upper_ratios[0] = [stats.N / c[0]]
    gen = rng.generator(seed)
    idx = active.indices()
    pick = np.sort(gen.choice(idx, size=min(sampled_S, len(idx)), replace=False))
    report.upper_ratios[2] = (stats.per_edge[pick] / c[2]).tolist()
    if j >= 3:
        dense = active.as_graph().dense()
        tri = []
        for e in gen.choice(idx, size=sampled_S, replace=True):
            u, v = _pair(n, int(e))
            common = np.flatnonzero(dense[u] & dense[v])
            if len(common):
                w = int(gen.choice(common))
                tri.append(count_containing((u, v, w), j, g, active) / c[3])
        report.upper_ratios[3] = tri
    report.max_upper_ratio = max(max(r) for r in report.upper_ratios.values() if r)
    report.violating_edge_count = int(np.sum(stats.per_edge[idx] < (1 - gamma) * c[2]))
    return report


def _pair(n: int, e: int) -> tuple[int, int]:
    u, v = edge_pair(n, np.array([e]))
    return int(u[0]), int(v[0])


# ---------------------------------------------------------------- Monte Carlo


def _frozen_first_iteration(g: Graph, params: CoverParams):
    schedule = derive_schedule(g.n, params)
    if not schedule.sizes:
        raise SizingError("the schedule has no iteration to replay")
    k = schedule.sizes[0]
    active = EdgeSet.full(g)
    check_budget(k, 1, g, active, params.p, params.clique_budget,
                 seed=rng.key(params.rng_seed, rng.SAMPLING, 1))
    return k, active, count_per_edge(k, g, active)


def survival_probability(x_u, x_star: int) -> np.ndarray:
    """Exact one-iteration survival ``(1 - 1/X*)^X_u (1 - rho)`` of an edge."""
    x_u = np.asarray(x_u, dtype=np.float64)
    return (1.0 - 1.0 / x_star) ** x_u * (1.0 - rho_array(x_u, x_star))


def estimate_survival(g: Graph, params: CoverParams, reps: int, sampled_edges: int,
                      seed: int | None = None) -> SurvivalReport:
    """Replay iteration 1 ``reps`` times on the frozen graph.

    Only the algorithm's randomness changes between replicates (replicate ``r``
    is exactly iteration 1 of a cover run with seed ``subseed(rng_seed, r)``).
    Frequencies of sampled edges staying uncovered are compared with the exact
    marginal; consecutive sampled edges are also paired to measure joint
    survival.
    """
    k, active, stats = _frozen_first_iteration(g, params)
    x_star = stats.x_star_2
    n = g.n
    idx_all = active.indices()
    gen = rng.generator(params.rng_seed if seed is None else seed)
    idx = np.sort(gen.choice(idx_all, size=min(sampled_edges, len(idx_all)), replace=False))
    us, vs = edge_pair(n, idx)
    x_u = stats.per_edge[idx]
    alive = np.zeros((reps, len(idx)), dtype=bool)
    covered = np.zeros(pair_count(n), dtype=bool)
    for r in range(reps):
        sub = rng.subseed(params.rng_seed, r)
        covered[:] = False
        if x_star > 0:
            kept = select_cliques(active, k, x_star, sub, 1)
            _kernels.mark_clique_edges(n, kept, covered)
            hit = covered[idx]
            added = patch_edges(us, vs, x_u, x_star, sub, 1)
            alive[r] = ~hit & ~added
        else:
            alive[r] = True
    freq = alive.mean(axis=0)
    target = survival_probability(x_u, x_star) if x_star > 0 else np.ones(len(idx))
    edges = [EdgeSurvival(int(us[t]), int(vs[t]), int(x_u[t]), int(alive[:, t].sum()),
                          float(freq[t]), float(target[t]),
                          math.sqrt(target[t] * (1 - target[t]) / reps))
             for t in range(len(idx))]
    pairs = []
    for t in range(0, len(idx) - 1, 2):
        joint = float(np.mean(alive[:, t] & alive[:, t + 1]))
        pairs.append(PairSurvival((int(us[t]), int(vs[t])), (int(us[t + 1]), int(vs[t + 1])),
                                  joint, float(target[t] * target[t + 1])))
    return SurvivalReport(k=k, x_star_2=x_star, reps=reps, edges=edges, pairs=pairs)


def estimate_selection(g: Graph, params: CoverParams, cliques: Sequence[Sequence[int]],
                       reps: int) -> SelectionReport:
    """How often each given clique is kept by Step A of iteration 1 over ``reps`` replays."""
    k, active, stats = _frozen_first_iteration(g, params)
    cliques = [tuple(sorted(int(v) for v in c)) for c in cliques]
    if any(len(c) != k for c in cliques):
        raise ValueError(f"all cliques must have size {k}")
    weights = np.array([g.n ** (k - 1 - t) for t in range(k)], dtype=np.int64)
    targets = np.array(cliques, dtype=np.int64).reshape(-1, k) @ weights
    hits = np.zeros(len(cliques), dtype=np.int64)
    for r in range(reps):
        kept = select_cliques(active, k, stats.x_star_2, rng.subseed(params.rng_seed, r), 1)
        hits += np.isin(targets, kept @ weights)
    return SelectionReport(k=k, x_star_2=stats.x_star_2, reps=reps, cliques=cliques,
                           hits=hits.tolist())


# ---------------------------------------------------------------- scaling


def summarize_scaling(summaries: Sequence[RunSummary], p: float | None = None) -> ScalingTable:
    """Mean normalised cover size ``|cover| (ln n)^2 / n^2`` per ``n``."""
    by_n: dict[int, list[float]] = {}
    for s in summaries:
        if s.ok and s.ratio is not None:
            by_n.setdefault(s.n, []).append(s.ratio)
    if len(by_n) < 2:
        raise ValueError("need completed runs at two or more distinct n")
    rows = []
    for n in sorted(by_n):
        vals = np.array(by_n[n])
        se = float(vals.std(ddof=1) / math.sqrt(len(vals))) if len(vals) > 1 else 0.0
        rows.append(ScalingRow(n, float(vals.mean()), se, len(vals)))
    if p is None:
        p = summaries[0].p
    means = [r.mean_ratio for r in rows]
    steps = np.diff(means)
    scale = max(abs(x) for x in means) or 1.0
    if np.all(np.abs(steps) <= 1e-12 * scale):
        verdict = "flat"
    elif np.all(steps < 0):
        verdict = "decreasing: consistent with a c2 n^2/(ln n)^2 upper bound"
    elif np.all(steps > 0):
        verdict = "increasing: not yet in the n^2/(ln n)^2 regime"
    else:
        verdict = "mixed"
    return ScalingTable(rows, c1_reference(p) if 0 < p <= 1 else float("nan"), verdict)
