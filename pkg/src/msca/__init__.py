"""Submodular-cost allocation and multiway partition: relaxations, roundings and exact checks."""

from .core import (
    GraphCut,
    HypergraphCut,
    HypergraphSeparation,
    Modular,
    SetFunction,
    WeightedHypergraph,
    check_monotone,
    check_submodular,
    check_symmetric,
    contract_terminal,
    make_graph_cut,
    make_hypergraph_cut,
    make_hypergraph_separation,
)
from .exact import brute_min_subset, estimate, exact_optimum, lovasz_eval_reference
from .lovasz import lovasz_eval, lovasz_subgradient, objective, threshold_set
from .problems import (
    MSCA,
    GraphMC,
    HypergraphMC,
    HypergraphMP,
    InfeasibleError,
    SubLabel,
    SubMP,
    TooLargeError,
)
from .relax import solve, solve_lp, solve_subgradient
from .rounding import (
    RoundingOutcome,
    ckr_round,
    half_round,
    kt_round,
    monotone_greedy,
    sym_sublabel_round,
    sym_submp_round,
    theta_round,
    uncross,
)

__version__ = "0.1.0"

__all__ = [
    "GraphCut", "HypergraphCut", "HypergraphSeparation", "Modular", "SetFunction",
    "WeightedHypergraph", "check_monotone", "check_submodular", "check_symmetric",
    "contract_terminal", "make_graph_cut", "make_hypergraph_cut", "make_hypergraph_separation",
    "brute_min_subset", "estimate", "exact_optimum", "lovasz_eval_reference", "lovasz_eval",
    "lovasz_subgradient", "objective", "threshold_set", "MSCA", "GraphMC", "HypergraphMC",
    "HypergraphMP", "InfeasibleError", "SubLabel", "SubMP", "TooLargeError", "solve", "solve_lp",
    "solve_subgradient", "RoundingOutcome", "ckr_round", "half_round", "kt_round",
    "monotone_greedy", "sym_sublabel_round", "sym_submp_round", "theta_round", "uncross",
]
