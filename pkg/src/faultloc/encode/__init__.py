"""Relaxed-program encoding: weights, SSA, bit-blasting, Wcnf assembly."""

from .bitblast import bitblast, lit_true, term_value
from .formulas import Clause, CnfFormula, Wcnf
from .ssa import ScopeOutputs, SsaProgram, eval_term, free_syms, run_defs
from .translate import ssa_translate
from .wcnf import build_wcnf
from .weights import compute_weights

__all__ = [
    "Clause",
    "CnfFormula",
    "ScopeOutputs",
    "SsaProgram",
    "Wcnf",
    "bitblast",
    "build_wcnf",
    "compute_weights",
    "eval_term",
    "free_syms",
    "lit_true",
    "run_defs",
    "ssa_translate",
    "term_value",
]
