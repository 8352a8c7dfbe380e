"""Randomized edge clique covers of G(n, p), with baselines and experiment tooling."""
from .baselines import BoundReport, exact_theta1, greedy_cover, lower_bound
from .cliques import (CliqueStats, cliques_containing, count_containing, count_per_edge,
                      estimate_clique_count, expected_count, max_clique, maximal_cliques)
from .cover import (CliqueCover, CoverParams, CoverRun, IterationRecord, Schedule,
                    derive_schedule, read_cover, rho, run_cover, step_a, step_b,
                    verify_cover, write_cover)
from .errors import GraphParseError, NotACliqueError, SizingError
from .graph import EdgeSet, Graph, edge_count, generate_gnp, load_graph, save_graph
from .harness import (ExperimentConfig, RunSummary, check_conditions, estimate_selection,
                      estimate_survival, run_experiment, summarize_scaling)

__all__ = [
    "BoundReport", "CliqueCover", "CliqueStats", "CoverParams", "CoverRun", "EdgeSet",
    "ExperimentConfig", "Graph", "GraphParseError", "IterationRecord", "NotACliqueError",
    "RunSummary", "Schedule", "SizingError", "check_conditions", "cliques_containing",
    "count_containing", "count_per_edge", "derive_schedule", "edge_count", "estimate_clique_count",
    "estimate_selection", "estimate_survival", "exact_theta1", "expected_count", "generate_gnp",
    "greedy_cover", "load_graph", "lower_bound", "max_clique", "maximal_cliques", "read_cover",
    "rho", "run_cover", "run_experiment", "save_graph", "step_a", "step_b", "summarize_scaling",
    "verify_cover", "write_cover",
]
