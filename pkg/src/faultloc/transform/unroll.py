"""Unrolling: one renamed program scope per failing test.

Each failing test gets a deep copy of main's body and of every helper
function, with all identifiers suffixed `_i` so no name is shared
between scopes. Returns in the copied main body become ScopeExit
markers (the chain jump of the unrolled program); helper returns are
left alone since helpers are inlined downstream. Per-scope input
arrays, expected-output sequences and the final assertion descriptor
live as data on the UnrolledAst; the read/write offset bookkeeping they
imply is materialized by the printer and the encoder.

Cloned nodes keep the node_id of the original node they came from:
within the unrolled tree ids are provenance tags linking every
occurrence back to one source component, and are deliberately not
unique anymore.
"""

from __future__ import annotations

import copy
from dataclasses import dataclass, field
from typing import Sequence

from ..errors import UnrollError
from ..frontend import nodes as N
from ..frontend.suite import TestCase


@dataclass
class ScopeExit(N.Stmt):
    """Transfer to the next scope (or to the assertion block)."""

    next_index: int = 0


@dataclass
class Scope:
    index: int
    test_id: str
    body: list  # renamed statements of main
    helpers: list  # renamed FunctionDef clones owned by this scope
    rename: dict = field(default_factory=dict)


@dataclass
class UnrolledAst:
    source: N.Program
    scopes: list
    inputs: list  # per scope: tuple of ints
    expected: list  # per scope: tuple of ints (assertion descriptor)

    @property
    def test_ids(self) -> list:
        return [s.test_id for s in self.scopes]


def _rename_tree(node: N.Node, mapping: dict) -> None:
    for n in N.walk(node):
        if isinstance(n, (N.VarRef, N.ArrayRef, N.VarDecl, N.Param)):
            n.name = mapping.get(n.name, n.name)
        elif isinstance(n, (N.Call, N.FunctionDef)):
            n.name = mapping.get(n.name, n.name)


def _collect_names(program: N.Program) -> set:
    names = set()
    for fn in program.functions:
        names.add(fn.name)
        for n in N.walk(fn):
            if isinstance(n, (N.VarDecl, N.Param)):
                names.add(n.name)
    return names


def _replace_returns(stmts: list, next_index: int) -> list:
    out = []
    for s in stmts:
        if isinstance(s, N.Return):
            out.append(ScopeExit(next_index=next_index,
                                 line=s.line, col=s.col, node_id=s.node_id))
            continue
        if isinstance(s, N.If):
            s.then_body = _replace_returns(s.then_body, next_index)
            s.else_body = _replace_returns(s.else_body, next_index)
        elif isinstance(s, (N.While, N.For)):
            s.body = _replace_returns(s.body, next_index)
        elif isinstance(s, N.Block):
            s.body = _replace_returns(s.body, next_index)
        out.append(s)
    return out


def _straight_line_reads(stmts: Sequence[N.Stmt]) -> int:
    # reads that happen unconditionally: not under any if or loop
    count = 0
    for s in stmts:
        if isinstance(s, N.ReadStmt):
            count += 1
        elif isinstance(s, N.Block):
            count += _straight_line_reads(s.body)
        elif isinstance(s, N.Return):
            break  # nothing after an unconditional return executes
    return count


def unroll(ast: N.Program, failing: Sequence[TestCase]) -> UnrolledAst:
    """Build the m-scope unrolled program for the given failing tests."""
    if not failing:
        raise ValueError("unroll requires at least one failing test")
    must_read = _straight_line_reads(ast.main.body)
    for t in failing:
        if len(t.inputs) < must_read:
            raise UnrollError(
                f"test {t.test_id} supplies {len(t.inputs)} inputs but the "
                f"program unconditionally reads {must_read}")

    names = sorted(_collect_names(ast))
    helpers = [fn for fn in ast.functions if fn.name != "main"]
    scopes = []
    for i, t in enumerate(failing):
        mapping = {name: f"{name}_{i}" for name in names}
        body = copy.deepcopy(ast.main.body)
        holder = N.Block(body=body)
        _rename_tree(holder, mapping)
        body = _replace_returns(holder.body, i + 1)
        if not (body and isinstance(body[-1], ScopeExit)):
            body.append(ScopeExit(next_index=i + 1))
        fns = copy.deepcopy(helpers)
        for fn in fns:
            _rename_tree(fn, mapping)
        scopes.append(Scope(index=i, test_id=t.test_id, body=body,
                            helpers=fns, rename=mapping))
    return UnrolledAst(
        source=ast,
        scopes=scopes,
        inputs=[tuple(t.inputs) for t in failing],
        expected=[tuple(t.expected) for t in failing],
    )
