"""Inseparability tests for finite-dimensional bipartite quantum states."""

from sepcheck.criteria import (
    CONSTANTS,
    Verdict,
    chsh_check,
    evaluate,
    evaluate_all,
    invariant_bound_check,
    ppt_check,
    qubit_g_check,
    srur_check,
    srur_paper_check,
)
from sepcheck.harness import ThresholdResult, compare_sweep, threshold_bisect
from sepcheck.linalg import BipartiteLayout, DensityMatrix, partial_transpose
from sepcheck.spin import SpinLabel, heisenberg_coupling, paper_operators, pauli, spin_operators
from sepcheck.states import WernerFamily, werner

__all__ = [
    "CONSTANTS",
    "BipartiteLayout",
    "DensityMatrix",
    "SpinLabel",
    "ThresholdResult",
    "Verdict",
    "WernerFamily",
    "chsh_check",
    "compare_sweep",
    "evaluate",
    "evaluate_all",
    "heisenberg_coupling",
    "invariant_bound_check",
    "paper_operators",
    "partial_transpose",
    "pauli",
    "ppt_check",
    "qubit_g_check",
    "spin_operators",
    "srur_check",
    "srur_paper_check",
    "threshold_bisect",
    "werner",
]
