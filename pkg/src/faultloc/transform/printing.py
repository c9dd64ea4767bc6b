"""Textual artifacts for the unrolled and instrumented programs.

These are diagnostic outputs (golden-tested): C-shaped text showing what
the transformation did. Reads become indexed accesses of a per-scope input
array with a post-incremented offset, writes append to a per-scope output
buffer, scope exits are gotos down the scope chain, and the program ends
with one assertion saying some failing test still fails — a model of its
violation is exactly an execution on which every failing test passes.

Relaxation variables print at file scope (shared by all scopes and helper
clones); ``_ev`` variables and the I/O scaffolding print one set per
scope. Iteration-indexed variables print as vectors: one dimension per
enclosing loop, flattened to a single subscript in row-major order, with
each loop's offset variable initialized before the loop and bumped once
per iteration. A loop condition's own dimension has ``unwind + 1`` slots
(the exit check runs once more than the body); every other dimension has
``unwind``.
"""

from __future__ import annotations

from math import prod

from ..frontend import nodes as N
from ..frontend.printer import Printer
from .instrument import (LOOP_CONDITION, Component, CondChoice, Guarded,
                         InstrumentedAst, ItemChoice, LoopGuard,
                         NondetChoice, RefinedRead)
from .unroll import Scope, ScopeExit, UnrolledAst


def vector_factors(comp: Component, unwind: int) -> tuple:
    """Per-dimension sizes of the printed vector, outermost first."""
    k = len(comp.los_path)
    if k == 0:
        return ()
    own = unwind + 1 if comp.kind == LOOP_CONDITION else unwind
    return tuple([unwind] * (k - 1) + [own])


class _ScopePrinter(Printer):
    """Prints the statements of one scope, or of one helper clone.

    ``mode`` is "plain" for the pre-instrumentation unrolled program (no
    relaxation, no loop offsets), "relaxed" otherwise.
    """

    def __init__(self, scope_index: int, unwind: int, mode: str):
        super().__init__()
        self.si = scope_index
        self.unwind = unwind
        self.mode = mode
        self._los_count = 0

    # -- naming ------------------------------------------------------------

    def sfx(self, base: str) -> str:
        return f"{base}_{self.si}"

    def _fresh_los(self) -> str:
        self._los_count += 1
        base = "_los" if self._los_count == 1 else f"_los{self._los_count}"
        return self.sfx(base)

    def rv_ref(self, comp: Component) -> str:
        if not comp.los_path:
            return comp.rv_name
        names = [self.sfx(l) for l in comp.los_path]
        factors = vector_factors(comp, self.unwind)
        index = names[0]
        for name, f in zip(names[1:], factors[1:]):
            index = f"({index}) * {f} + {name}"
        return f"{comp.rv_name}[{index}]"

    # -- scaffolding statements ---------------------------------------------

    def read_text(self, s: N.ReadStmt) -> str:
        target = self.expr(s.target)
        return f"{target} = {self.sfx('_input')}[{self.sfx('_ioff')}++];"

    def print_text(self, s: N.PrintStmt) -> str:
        out, olen = self.sfx("_out"), self.sfx("_olen")
        return (f"{{ {out}[{olen}] = {self.expr(s.value)}; "
                f"{olen} = {olen} + 1; }}")

    def simple_text(self, s: N.Stmt) -> str:
        """One-line text of a simple statement (the Guarded payloads)."""
        if isinstance(s, N.Assign):
            return f"{self.expr(s.target)} = {self.expr(s.value)};"
        if isinstance(s, N.ReadStmt):
            return self.read_text(s)
        if isinstance(s, N.PrintStmt):
            return self.print_text(s)
        if isinstance(s, N.Return):
            return ("return;" if s.value is None
                    else f"return {self.expr(s.value)};")
        assert isinstance(s, N.CallStmt), type(s).__name__
        return f"{self.expr(s.call)};"

    # -- statement overrides -------------------------------------------------

    def stmt(self, s: N.Stmt):
        if isinstance(s, N.ReadStmt):
            self.emit(self.read_text(s))
        elif isinstance(s, N.PrintStmt):
            self.emit(self.print_text(s))
        elif isinstance(s, ScopeExit):
            self.emit(f"goto {scope_label(s.next_index)};")
        elif isinstance(s, N.While) and self.mode == "relaxed":
            los = self._fresh_los()
            self.emit(f"int {los} = 0;")
            self.emit(f"while ({self.expr(s.cond)}) {{")
            self.depth += 1
            self.body(s.body)
            self.emit(f"{los} = {los} + 1;")
            self.depth -= 1
            self.emit("}")
        elif isinstance(s, N.For) and self.mode == "relaxed":
            los = self._fresh_los()
            self.emit(f"int {los} = 0;")
            init = ", ".join(self.inline_item(i) for i in s.init)
            cond = self.expr(s.cond) if s.cond is not None else ""
            update = [self.inline_item(u) for u in s.update] + [f"{los}++"]
            self.emit(f"for ({init}; {cond}; {', '.join(update)}) {{")
            self.braced(s.body)
            self.emit("}")
        else:
            super().stmt(s)

    def extra_stmt(self, s: N.Stmt):
        if isinstance(s, Guarded):
            self.emit(f"if ({self.rv_ref(s.comp)}) "
                      f"{self.simple_text(s.stmt)}")
        elif isinstance(s, ItemChoice):
            self.emit(f"{self.inline_item(s)};")
        elif isinstance(s, RefinedRead):
            rv = self.rv_ref(s.comp)
            target = self.expr(s.target.target)
            self.emit(f"if ({rv}) {self.read_text(s.target)} "
                      f"else {target} = nondet_int();")
        else:
            super().extra_stmt(s)

    def extra_inline_item(self, s: N.Stmt) -> str:
        assert isinstance(s, ItemChoice), type(s).__name__
        inner = self.inline_item(s.item)
        return f"{self.rv_ref(s.comp)} ? ({inner}) : 1"

    # -- expression overrides --------------------------------------------------

    def extra_expr(self, e: N.Expr, prec: int) -> str:
        if isinstance(e, CondChoice):
            ev = self.sfx(e.comp.ev_name)
            return f"{self.rv_ref(e.comp)} ? ({self.expr(e.cond)}) : {ev}"
        if isinstance(e, LoopGuard):
            return f"!{self.rv_ref(e.comp)} || ({self.expr(e.cond)})"
        if isinstance(e, NondetChoice):
            fallback = "nondet_bool()" if e.is_bool else "nondet_int()"
            return (f"({self.rv_ref(e.comp)} ? ({self.expr(e.expr)})"
                    f" : {fallback})")
        return super().extra_expr(e, prec)


def scope_label(index: int) -> str:
    return f"scope_{index}"


def _assertion_text(u: UnrolledAst) -> str:
    tests = []
    for i, expected in enumerate(u.expected):
        terms = [f"_olen_{i} == {len(expected)}"]
        terms += [f"_out_{i}[{j}] == {v}" for j, v in enumerate(expected)]
        tests.append(" && ".join(terms))
    return "assert(" + " || ".join(f"!({t})" for t in tests) + ");"


def _scope_globals(u: UnrolledAst, index: int) -> list:
    lines = []
    inputs = u.inputs[index]
    cells = ", ".join(str(v) for v in inputs) or "0"
    lines.append(f"int _input_{index}[{max(1, len(inputs))}]"
                 f" = {{{cells}}};")
    lines.append(f"int _ioff_{index} = 0;")
    lines.append(f"int _out_{index}[{len(u.expected[index]) + 4}];")
    lines.append(f"int _olen_{index} = 0;")
    return lines


def _emit_program(u: UnrolledAst, scopes: list, mode: str, unwind: int,
                  header: list) -> str:
    lines = list(header)
    for scope in scopes:
        if not scope.helpers:
            continue
        lines.append("")
        lines.append(f"// helpers for scope {scope.index}"
                     f" (test {scope.test_id})")
        for fn in scope.helpers:
            p = _ScopePrinter(scope.index, unwind, mode)
            p.function(fn)
            lines += p.lines
    lines.append("")
    lines.append("int main() {")
    for scope in scopes:
        lines.append(f"{scope_label(scope.index)}: ;"
                     f" // test {scope.test_id}")
        p = _ScopePrinter(scope.index, unwind, mode)
        p.depth = 1
        p.body(scope.body)
        lines += p.lines
    lines.append(f"{scope_label(len(scopes))}: ;")
    lines.append("    " + _assertion_text(u))
    lines.append("    return 0;")
    lines.append("}")
    return "\n".join(lines) + "\n"


def print_unrolled(u: UnrolledAst) -> str:
    """Listing-2-shaped text: the unrolled program before relaxation."""
    header = ["#include <assert.h>", ""]
    for i in range(len(u.scopes)):
        header += _scope_globals(u, i)
    return _emit_program(u, u.scopes, "plain", 1, header)


def print_instrumented(inst: InstrumentedAst) -> str:
    """Listing-3/5-shaped text: the relaxed program with its shared
    relaxation variables and per-scope scaffolding."""
    u = inst.unrolled
    header = ["#include <assert.h>", "#include <stdbool.h>"]
    if inst.refined:
        header += ["int nondet_int(void);", "bool nondet_bool(void);"]
    header.append("")

    scalars, vectors = [], []
    for c in inst.table:
        factors = vector_factors(c, inst.unwind)
        if factors:
            vectors.append(f"bool {c.rv_name}[{prod(factors)}];")
        else:
            scalars.append(c.rv_name)
    if scalars:
        header.append(f"bool {', '.join(scalars)};")
    header += vectors

    for i in range(len(u.scopes)):
        header.append(f"// scope {i} (test {u.scopes[i].test_id})")
        header += _scope_globals(u, i)
        evs = [f"{c.ev_name}_{i}" for c in inst.table
               if c.ev_id is not None]
        if evs:
            header.append(f"bool {', '.join(evs)};")
    return _emit_program(u, inst.scopes, "relaxed", inst.unwind, header)
