"""Hierarchical component weights.

Two passes over the original program, lexical per function (a call site is
a leaf; the callee's body is weighted where it is defined):

1. Non-I/O components, bottom-up. Leaf statements and expression-list
   items weigh 1. A condition weighs the sum of the non-I/O components
   nested under it (then+else for ifs, body+update for loops), floored at
   1 so every weight stays positive — reads and writes are deliberately
   excluded from these sums so that relaxing a condition around a print
   stays cheap.
2. I/O components all get io_multiplier * max(1, sum of all non-I/O
   weights), which makes touching any read or write strictly more
   expensive than relaxing the entire program logic.
"""

from __future__ import annotations

from typing import Sequence

from ..frontend import nodes as N
from ..transform.instrument import ComponentTable


def compute_weights(table: ComponentTable, ast: N.Program,
                    io_multiplier: int = 100) -> ComponentTable:
    """Fill ``weight`` for every component of a plain table, in place."""
    assert not table.refined, "refined tables carry their own scaled weights"
    if io_multiplier < 1:
        raise ValueError("io_multiplier must be >= 1")
    comp_of = {c.node_id: c for c in table}

    def weigh(stmts: Sequence[N.Stmt]) -> int:
        """Assign non-I/O weights under stmts; return their sum."""
        total = 0
        for s in stmts:
            comp = comp_of.get(s.node_id)
            if isinstance(s, N.Block):
                total += weigh(s.body)
            elif isinstance(s, (N.Assign, N.CallStmt, N.Return)):
                if comp is not None:  # main's returns have no component
                    comp.weight = 1
                    total += 1
            elif isinstance(s, N.If):
                inner = weigh(s.then_body) + weigh(s.else_body)
                if comp is not None:
                    comp.weight = max(1, inner)
                    total += comp.weight + inner
            elif isinstance(s, N.While):
                inner = weigh(s.body)
                if comp is not None:
                    comp.weight = max(1, inner)
                    total += comp.weight + inner
            elif isinstance(s, N.For):
                total += weigh(s.init)
                inner = weigh(s.body) + weigh(s.update)
                if comp is not None:  # absent for `for (;;)` headers
                    comp.weight = max(1, inner)
                    total += comp.weight
                total += inner
        return total

    for fn in ast.functions:
        weigh(fn.body)

    non_io_sum = sum(c.weight for c in table if not c.is_io)
    io_weight = io_multiplier * max(1, non_io_sum)
    for c in table:
        if c.is_io:
            c.weight = io_weight
    for c in table:
        assert c.weight >= 1, f"component {c.component_id} left unweighted"
    return table
