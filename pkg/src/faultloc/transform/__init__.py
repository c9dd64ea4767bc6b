"""Program transformation: unrolling over failing tests, relaxation
instrumentation, and sub-expression refinement."""

from .instrument import (
    EXPR_LIST_ITEM, IF_CONDITION, INPUT_STMT, IO_KINDS, KINDS,
    LOOP_CONDITION, OUTPUT_STMT, STATEMENT, Component, ComponentTable,
    CondChoice, Guarded, InstrumentedAst, ItemChoice, LoopGuard,
    NondetChoice, RefinedRead, build_table, chain_operands, instrument,
    refine_instrument,
)
from .printing import print_instrumented, print_unrolled, vector_factors
from .unroll import Scope, ScopeExit, UnrolledAst, unroll

__all__ = [
    "EXPR_LIST_ITEM", "IF_CONDITION", "INPUT_STMT", "IO_KINDS", "KINDS",
    "LOOP_CONDITION", "OUTPUT_STMT", "STATEMENT", "Component",
    "ComponentTable", "CondChoice", "Guarded", "InstrumentedAst",
    "ItemChoice", "LoopGuard", "NondetChoice", "RefinedRead", "Scope",
    "ScopeExit", "UnrolledAst", "build_table", "chain_operands",
    "instrument", "print_instrumented", "print_unrolled",
    "refine_instrument", "unroll", "vector_factors",
]
