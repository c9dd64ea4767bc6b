"""Hypothesis strategies producing random valid MiniC programs.

Programs are built directly as ASTs, always semantically valid, and
always terminating: every loop uses a dedicated counter variable that
the loop body never touches, counting up to a small literal bound.
Used by the printer round-trip test and the interpreter/encoder
differential tests.
"""

from __future__ import annotations

import hypothesis.strategies as st

from faultloc.frontend import nodes as n
from faultloc.frontend.parser import parse_program
from faultloc.frontend.printer import print_program

SCALARS = ["v0", "v1", "v2", "v3"]
ARRAY = "arr"
ARRAY_SIZE = 4
COUNTERS = ["l0", "l1", "l2", "l3"]

_BIN_OPS = ["+", "-", "*", "/", "%", "<", "<=", ">", ">=", "==", "!=", "&&", "||"]


@st.composite
def exprs(draw, depth: int = 3) -> n.Expr:
    if depth <= 0:
        # literals stay non-negative: the parser never produces a negative
        # IntLit (unary minus owns that shape), and neither may we
        leaf = draw(st.sampled_from(["int", "var", "arr"]))
        if leaf == "int":
            return n.IntLit(draw(st.integers(0, 40)))
        if leaf == "var":
            return n.VarRef(draw(st.sampled_from(SCALARS)))
        return n.ArrayRef(ARRAY, n.IntLit(draw(st.integers(0, ARRAY_SIZE))))
    kind = draw(st.sampled_from(["leaf", "leaf", "unary", "binary", "binary"]))
    if kind == "leaf":
        return draw(exprs(depth=0))
    if kind == "unary":
        return n.Unary(draw(st.sampled_from(["-", "!"])), draw(exprs(depth=depth - 1)))
    return n.Binary(
        draw(st.sampled_from(_BIN_OPS)),
        draw(exprs(depth=depth - 1)),
        draw(exprs(depth=depth - 1)),
    )


@st.composite
def lvalues(draw) -> n.LValue:
    if draw(st.booleans()):
        return n.VarRef(draw(st.sampled_from(SCALARS)))
    return n.ArrayRef(ARRAY, draw(exprs(depth=1)))


@st.composite
def stmt_lists(draw, counters: list[str], depth: int, budget: int) -> list[n.Stmt]:
    out: list[n.Stmt] = []
    count = draw(st.integers(1, max(1, min(3, budget))))
    for _ in range(count):
        kinds = ["assign", "assign", "read", "print"]
        if depth > 0:
            kinds += ["if"]
            if counters:
                kinds += ["while", "for"]
        kind = draw(st.sampled_from(kinds))
        if kind == "assign":
            out.append(n.Assign(draw(lvalues()), draw(exprs(depth=2))))
        elif kind == "read":
            out.append(n.ReadStmt(draw(lvalues())))
        elif kind == "print":
            out.append(n.PrintStmt(draw(exprs(depth=2))))
        elif kind == "if":
            then_body = draw(stmt_lists(counters, depth - 1, budget // 2))
            else_body = draw(stmt_lists(counters, depth - 1, budget // 2)) \
                if draw(st.booleans()) else []
            out.append(n.If(draw(exprs(depth=2)), then_body, else_body))
        else:
            lc = counters[-1]
            inner = draw(stmt_lists(counters[:-1], depth - 1, budget // 2))
            bound = n.IntLit(draw(st.integers(0, 3)))
            cond = n.Binary("<", n.VarRef(lc), bound)
            step = n.Assign(n.VarRef(lc), n.Binary("+", n.VarRef(lc), n.IntLit(1)))
            if kind == "while":
                out.append(n.Assign(n.VarRef(lc), n.IntLit(0)))
                out.append(n.While(cond, inner + [step]))
            else:
                init = n.Assign(n.VarRef(lc), n.IntLit(0))
                out.append(n.For([init], cond, [step], inner))
    return out


@st.composite
def minic_programs(draw) -> n.Program:
    body: list[n.Stmt] = []
    for v in SCALARS + COUNTERS:
        body.append(n.VarDecl("int", v))
    body.append(n.VarDecl("int", ARRAY, ARRAY_SIZE))
    body.extend(draw(stmt_lists(list(COUNTERS), depth=2, budget=8)))
    body.append(n.Return(n.IntLit(0)))
    main = n.FunctionDef("int", "main", [], body)
    # Round through the printer so positions and ids are the parser's.
    return parse_program(print_program(n.Program([main])))


input_vectors = st.lists(st.integers(-200, 200), min_size=0, max_size=6)
