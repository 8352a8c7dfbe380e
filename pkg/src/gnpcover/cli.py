"""Command line entry point.

Exit codes: 0 success, 2 validation failure (bad arguments or an invalid
cover), 3 sizing or budget error, 4 parse error.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from contextlib import contextmanager

from . import harness
from .baselines import exact_theta1, greedy_cover, lower_bound
from .cliques import DEFAULT_CLIQUE_BUDGET
from .cover import CoverParams, cover_accounting, read_cover, run_cover, verify_cover, write_cover
from .errors import GraphParseError, SizingError
from .graph import generate_gnp, load_graph, save_graph

EXIT_OK, EXIT_INVALID, EXIT_SIZING, EXIT_PARSE = 0, 2, 3, 4


@contextmanager
def _output(path: str | None):
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w") as fh:
            yield fh


def _schedule(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad schedule '{text}'") from None


def _graph_from(args):
    if getattr(args, "graph", None):
        with open(args.graph) as fh:
            return load_graph(fh)
    if args.n is None:
        raise ValueError("give --graph or --n")
    return generate_gnp(args.n, args.p, args.seed)


def _add_instance(sp, need_graph=False):
    sp.add_argument("--graph", required=need_graph, help="graph file (n m / u v lines)")
    if not need_graph:
        sp.add_argument("--n", type=int, help="generate G(n, p) instead of reading a file")
        sp.add_argument("--p", type=float, default=0.5)
        sp.add_argument("--seed", type=int, default=0)


def _params(args) -> CoverParams:
    return CoverParams(alpha=args.alpha, p=args.p, schedule_override=args.schedule,
                       rng_seed=args.seed, clique_budget=args.budget)


def _add_cover_flags(sp):
    sp.add_argument("--alpha", type=float, default=0.55)
    sp.add_argument("--schedule", type=_schedule, help="explicit clique sizes, e.g. 5,4,3")
    sp.add_argument("--budget", type=float, default=DEFAULT_CLIQUE_BUDGET,
                    help="largest clique count allowed per iteration")


def cmd_gen(args) -> int:
    g = generate_gnp(args.n, args.p, args.seed)
    with _output(args.out) as fh:
        save_graph(g, fh)
    return EXIT_OK


def cmd_run(args) -> int:
    g = _graph_from(args)
    run = run_cover(g, _params(args))
    with _output(args.out) as fh:
        write_cover(run.cover, fh)
    for r in run.records:
        print(f"i={r.i} k_i={r.k_i} Y={r.Y_i} Z={r.Z_i} X*2={r.x_star_2} X*3={r.x_star_3} "
              f"uncovered={r.uncovered_after} {r.elapsed * 1000:.1f}ms", file=sys.stderr)
    print(f"n={g.n} m={g.m} cover={len(run.cover)} exit={run.exit_reason} "
          f"final_edges={run.uncovered_final} accounted={cover_accounting(run)}", file=sys.stderr)
    return EXIT_OK


def cmd_verify(args) -> int:
    with open(args.graph) as fh:
        g = load_graph(fh)
    with open(args.cover) as fh:
        cover = read_cover(fh)
    verdict = verify_cover(g, cover)
    if verdict:
        print(f"valid: {len(cover)} cliques cover all {g.m} edges")
        return EXIT_OK
    print(f"invalid: {verdict.reason} {verdict.witness}")
    return EXIT_INVALID


def cmd_exact(args) -> int:
    g = _graph_from(args)
    size, cover = exact_theta1(g, args.cap)
    print(size)
    if args.out:
        with _output(args.out) as fh:
            write_cover(cover, fh)
    return EXIT_OK


def cmd_greedy(args) -> int:
    g = _graph_from(args)
    cover = greedy_cover(g)
    with _output(args.out) as fh:
        write_cover(cover, fh)
    print(f"greedy cover: {len(cover)} cliques", file=sys.stderr)
    return EXIT_OK


def cmd_bounds(args) -> int:
    g = _graph_from(args)
    rep = lower_bound(g, args.p if args.graph is None else None)
    print(json.dumps({"m": rep.m, "omega": rep.omega, "lower": rep.lower,
                      "c1_reference": rep.c1_reference}))
    return EXIT_OK


def cmd_survival(args) -> int:
    g = _graph_from(args)
    rep = harness.estimate_survival(g, _params(args), args.reps, args.edges)
    print("u,v,x_u,frequency,target,sigma")
    for e in rep.edges:
        print(f"{e.u},{e.v},{e.x_u},{e.frequency:.6f},{e.target:.6f},{e.sigma:.6f}")
    print(f"k={rep.k} X*2={rep.x_star_2} reps={rep.reps} "
          f"within 4 sigma: {rep.fraction_within(4.0):.3f}", file=sys.stderr)
    return EXIT_OK


def cmd_experiment(args) -> int:
    config = harness.load_config(args.config)
    if args.output_dir:
        config.output_dir = args.output_dir
    summaries = harness.run_experiment(config, workers=args.workers)
    failed = [s for s in summaries if not s.ok]
    for s in failed:
        print(f"n={s.n} seed={s.seed}: {s.status}", file=sys.stderr)
    if len({s.n for s in summaries if s.ok}) >= 2:
        print(harness.summarize_scaling(summaries, config.p).format())
    if any(s.valid is False for s in summaries):
        return EXIT_INVALID
    if failed:
        return EXIT_SIZING
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="gnpcover", description=__doc__.splitlines()[0])
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("gen", help="write a G(n, p) graph file")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--p", type=float, required=True)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_gen)

    sp = sub.add_parser("run", help="cover one graph with the randomized algorithm")
    _add_instance(sp)
    _add_cover_flags(sp)
    sp.add_argument("--out", help="cover file (default stdout)")
    sp.set_defaults(func=cmd_run)

    sp = sub.add_parser("verify", help="check a cover file against a graph file")
    sp.add_argument("--graph", required=True)
    sp.add_argument("--cover", required=True)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("exact", help="minimum clique cover of a tiny graph")
    _add_instance(sp)
    sp.add_argument("--cap", type=int, default=12)
    sp.add_argument("--out", help="also write the optimal cover here")
    sp.set_defaults(func=cmd_exact)

    sp = sub.add_parser("greedy", help="greedy clique cover")
    _add_instance(sp)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_greedy)

    sp = sub.add_parser("bounds", help="clique number and counting lower bound")
    _add_instance(sp)
    sp.set_defaults(func=cmd_bounds)

    sp = sub.add_parser("survival", help="Monte Carlo edge survival for iteration 1")
    _add_instance(sp)
    _add_cover_flags(sp)
    sp.add_argument("--reps", type=int, default=2000)
    sp.add_argument("--edges", type=int, default=50)
    sp.set_defaults(func=cmd_survival)

    sp = sub.add_parser("experiment", help="run a configured grid of instances")
    sp.add_argument("--config", required=True)
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--output-dir")
    sp.set_defaults(func=cmd_experiment)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    try:
        return args.func(args)
    except GraphParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except SizingError as exc:
        print(f"sizing error: {exc}", file=sys.stderr)
        return EXIT_SIZING
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
