"""Relaxation instrumentation: one suspect component per relaxable node.

Every relaxable node of the original program becomes a *component* with a
single healthy variable ``_rvK`` shared by all scopes of the unrolled
program; the id counter is shared between ``_rv`` and ``_ev`` names, so an
if-condition consumes two consecutive ids (its ``_rv`` and its scope-local
``_ev``). Four rewrite rules cover the whole language:

1. generic statement ``S``       ->  ``if (_rv) S;``
2. if-condition ``c``            ->  ``_rv ? c : _ev``
3. expression-list item ``e``    ->  ``_rv ? e : 1``
4. loop condition ``c``          ->  ``!_rv[_los] || c``

Statements under a loop are relaxed per iteration: their variables are
printed as vectors indexed by the loop's offset variable (``_los``,
``_los2``, ... per function, initialized before the loop and bumped each
iteration). A loop condition is checked ``unwind + 1`` times, so its own
vector has one more entry than the vectors of the statements in its body.
Helper-function components exist once regardless of call count; their
variables are declared in the main scope and passed through.

:func:`refine_instrument` rebuilds the program at sub-expression
granularity: nodes named by a previous diagnosis split into fresh
components (condition chain operands, assignment right-hand sides, ...)
whose inactive branch is an unconstrained nondeterministic value, while
every other node is emitted bare and always executes. Weights of the split
components are scaled by the least common multiple of the split sizes so
they stay positive integers; the table records that scale.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from ..errors import CapacityError
from ..frontend import nodes as N
from .unroll import Scope, ScopeExit, UnrolledAst, unroll

# Component kinds.
STATEMENT = "Statement"
IF_CONDITION = "IfCondition"
LOOP_CONDITION = "LoopCondition"
EXPR_LIST_ITEM = "ExprListItem"
INPUT_STMT = "InputStmt"
OUTPUT_STMT = "OutputStmt"

KINDS = (STATEMENT, IF_CONDITION, LOOP_CONDITION, EXPR_LIST_ITEM,
         INPUT_STMT, OUTPUT_STMT)
IO_KINDS = frozenset((INPUT_STMT, OUTPUT_STMT))


# --------------------------------------------------------------------------
# Components
# --------------------------------------------------------------------------


@dataclass
class Component:
    """One suspect unit of the original program.

    ``healthy_var`` is the id K of the shared ``_rvK``; ``ev_id`` is set
    for if-conditions only (their scope-local ``_ev``). ``vector_size``
    counts the dynamic occurrences of the node per scope (call
    multiplicity times loop unrolling factors); ``los_path`` holds the
    loop-offset names that index the printed vector, outermost first.
    ``role``/``split`` describe refinement fragments: which piece of the
    parent node this is and how many pieces the node was split into.
    """

    component_id: int
    node_id: int
    line: int
    kind: str
    healthy_var: int
    ev_id: Optional[int] = None
    indexed: bool = False
    los_path: tuple = ()
    vector_size: int = 1
    weight: int = 0
    role: str = ""
    split: int = 1

    @property
    def rv_name(self) -> str:
        return f"_rv{self.healthy_var}"

    @property
    def ev_name(self) -> Optional[str]:
        return None if self.ev_id is None else f"_ev{self.ev_id}"

    @property
    def is_io(self) -> bool:
        return self.kind in IO_KINDS


@dataclass
class ComponentTable:
    """All components, indexed by component_id == list position.

    ``scale`` is 1 for plain instrumentation; a refined table stores the
    lcm of the split factors there so costs remain comparable with the
    unrefined run after multiplying the latter by ``scale``.
    """

    components: list
    scale: int = 1
    refined: bool = False

    def __len__(self) -> int:
        return len(self.components)

    def __iter__(self):
        return iter(self.components)

    def __getitem__(self, component_id: int) -> Component:
        c = self.components[component_id]
        assert c.component_id == component_id
        return c

    def by_node(self, node_id: int) -> list:
        return [c for c in self.components if c.node_id == node_id]

    def component_for(self, node_id: int) -> Component:
        found = self.by_node(node_id)
        assert len(found) == 1, f"node {node_id}: {len(found)} components"
        return found[0]

    def lines(self, component_ids: Iterable[int]) -> tuple:
        return tuple(sorted({self[i].line for i in component_ids}))


# --------------------------------------------------------------------------
# Wrapper nodes introduced by instrumentation
# --------------------------------------------------------------------------


@dataclass
class Guarded(N.Stmt):
    """Rule 1: ``if (_rv) stmt;`` — inactive means skipped."""

    stmt: N.Stmt
    comp: Component


@dataclass
class CondChoice(N.Expr):
    """Rule 2: ``_rv ? cond : _ev`` — inactive hands control to ``_ev``."""

    cond: N.Expr
    comp: Component


@dataclass
class ItemChoice(N.Stmt):
    """Rule 3: ``_rv ? item : 1`` — a relaxed init/update slot."""

    item: N.Stmt
    comp: Component


@dataclass
class LoopGuard(N.Expr):
    """Rule 4: ``!_rv[_los] || cond`` — inactive forces another spin."""

    cond: N.Expr
    comp: Component


@dataclass
class NondetChoice(N.Expr):
    """Refinement: ``_rv ? expr : nondet()`` with a fresh unconstrained
    value per scope and per iteration; boolean or int per context."""

    expr: N.Expr
    comp: Component
    is_bool: bool = False


@dataclass
class RefinedRead(N.Stmt):
    """Refinement of a read: when active it consumes the next input into
    the target as usual; when inactive the target receives an
    unconstrained value and the input cursor does not advance."""

    target: N.Stmt  # the original ReadStmt
    comp: Component


@dataclass
class InstrumentedAst:
    unrolled: UnrolledAst
    scopes: list  # Scope objects whose bodies/helpers are instrumented
    table: ComponentTable
    unwind: int
    refined: bool = False

    @property
    def source(self) -> N.Program:
        return self.unrolled.source


# --------------------------------------------------------------------------
# Planning: enumerate relaxable slots of the original program
# --------------------------------------------------------------------------


@dataclass
class _Slot:
    """A relaxable node of the original program, in numbering order."""

    node: N.Node  # statement, or the If/While/For owning a condition
    kind: str
    line: int
    los_path: tuple
    mult: int  # dynamic occurrences per scope
    cond: Optional[N.Expr] = None  # the condition expr for *Condition kinds


def _expr_calls(expr: Optional[N.Node]):
    if expr is None:
        return
    for n in N.walk(expr):
        if isinstance(n, N.Call):
            yield n.name


def _stmt_expr_calls(s: N.Stmt):
    """Callee names appearing in the statement's own expressions (not in
    nested statements)."""
    if isinstance(s, N.Assign):
        yield from _expr_calls(s.target)
        yield from _expr_calls(s.value)
    elif isinstance(s, N.ReadStmt):
        yield from _expr_calls(s.target)
    elif isinstance(s, N.PrintStmt):
        yield from _expr_calls(s.value)
    elif isinstance(s, N.CallStmt):
        yield from _expr_calls(s.call)
    elif isinstance(s, N.Return):
        yield from _expr_calls(s.value)


def _call_multiplicities(program: N.Program, unwind: int) -> dict:
    """Dynamic call count per function for one scope. main is 1; a callee
    adds caller_mult * unwind^depth per call site, depth counting the
    loops enclosing the site. Unreachable helpers stay at 0."""
    sites: dict[str, list] = {fn.name: [] for fn in program.functions}

    def scan(fn_name: str, stmts: Sequence[N.Stmt], depth: int) -> None:
        for s in stmts:
            for callee in _stmt_expr_calls(s):
                sites[fn_name].append((callee, depth))
            if isinstance(s, N.If):
                for callee in _expr_calls(s.cond):
                    sites[fn_name].append((callee, depth))
                scan(fn_name, s.then_body, depth)
                scan(fn_name, s.else_body, depth)
            elif isinstance(s, N.While):
                for callee in _expr_calls(s.cond):
                    sites[fn_name].append((callee, depth + 1))
                scan(fn_name, s.body, depth + 1)
            elif isinstance(s, N.For):
                scan(fn_name, s.init, depth)
                for callee in _expr_calls(s.cond):
                    sites[fn_name].append((callee, depth + 1))
                scan(fn_name, s.body, depth + 1)
                scan(fn_name, s.update, depth + 1)
            elif isinstance(s, N.Block):
                scan(fn_name, s.body, depth)

    for fn in program.functions:
        scan(fn.name, fn.body, 0)

    # Callers before callees (the call graph is a DAG: no recursion).
    order: list[str] = []
    seen: set[str] = set()

    def dfs(name: str) -> None:
        if name in seen:
            return
        seen.add(name)
        for callee, _ in sites.get(name, ()):
            dfs(callee)
        order.append(name)

    dfs("main")
    mult = {fn.name: 0 for fn in program.functions}
    mult["main"] = 1
    for caller in reversed(order):
        for callee, depth in sites.get(caller, ()):
            mult[callee] += mult[caller] * unwind**depth
    return mult


def _plan_slots(program: N.Program, unwind: int, vector_cap: int) -> list:
    """Relaxable slots in numbering order: main first, then the remaining
    functions in source order, skipping functions that are never called."""
    mult = _call_multiplicities(program, unwind)
    slots: list[_Slot] = []

    def visit_function(fn: N.FunctionDef) -> None:
        fn_mult = mult[fn.name]
        in_main = fn.name == "main"
        los_counter = 0

        def fresh_los() -> str:
            nonlocal los_counter
            los_counter += 1
            return "_los" if los_counter == 1 else f"_los{los_counter}"

        def add(node: N.Node, kind: str, los_path: tuple, m: int,
                cond: Optional[N.Expr] = None, line: int = 0) -> None:
            if m > vector_cap:
                raise CapacityError(
                    f"component at line {line or node.line} needs {m} "
                    f"iteration-indexed entries, above the cap {vector_cap}")
            slots.append(_Slot(node=node, kind=kind, line=line or node.line,
                               los_path=los_path, mult=m, cond=cond))

        def visit(stmts: Sequence[N.Stmt], los_path: tuple, m: int) -> None:
            for s in stmts:
                if isinstance(s, N.VarDecl):
                    continue
                if isinstance(s, N.Return):
                    # main's returns become scope-exit scaffolding; a
                    # helper's returns are skippable statements (control
                    # falls through to the next statement).
                    if not in_main:
                        add(s, STATEMENT, los_path, m)
                    continue
                if isinstance(s, N.Block):
                    visit(s.body, los_path, m)
                elif isinstance(s, N.Assign):
                    add(s, STATEMENT, los_path, m)
                elif isinstance(s, N.ReadStmt):
                    add(s, INPUT_STMT, los_path, m)
                elif isinstance(s, N.PrintStmt):
                    add(s, OUTPUT_STMT, los_path, m)
                elif isinstance(s, N.CallStmt):
                    add(s, STATEMENT, los_path, m)
                elif isinstance(s, N.If):
                    add(s, IF_CONDITION, los_path, m, cond=s.cond)
                    visit(s.then_body, los_path, m)
                    visit(s.else_body, los_path, m)
                elif isinstance(s, N.While):
                    los = fresh_los()
                    add(s, LOOP_CONDITION, los_path + (los,),
                        m * (unwind + 1), cond=s.cond)
                    visit(s.body, los_path + (los,), m * unwind)
                else:
                    assert isinstance(s, N.For), type(s).__name__
                    for item in s.init:
                        add(item, EXPR_LIST_ITEM, los_path, m)
                    los = fresh_los()
                    if s.cond is not None:
                        add(s, LOOP_CONDITION, los_path + (los,),
                            m * (unwind + 1), cond=s.cond)
                    visit(s.body, los_path + (los,), m * unwind)
                    for item in s.update:
                        add(item, EXPR_LIST_ITEM, los_path + (los,),
                            m * unwind)

        visit(fn.body, (), fn_mult)

    ordered = [program.main]
    ordered += [fn for fn in program.functions if fn.name != "main"]
    for fn in ordered:
        if mult[fn.name] >= 1:
            visit_function(fn)
    return slots


def build_table(program: N.Program, unwind: int,
                vector_cap: int = 4096) -> ComponentTable:
    """Number the components of the original program.

    The id counter is shared between ``_rv`` and ``_ev``: an if-condition
    takes ids K (rv) and K+1 (ev), everything else takes one id.
    """
    comps: list[Component] = []
    next_id = 1
    for slot in _plan_slots(program, unwind, vector_cap):
        ev_id = None
        rv_id = next_id
        next_id += 1
        if slot.kind == IF_CONDITION:
            ev_id = next_id
            next_id += 1
        comps.append(Component(
            component_id=len(comps),
            node_id=slot.node.node_id,
            line=slot.line,
            kind=slot.kind,
            healthy_var=rv_id,
            ev_id=ev_id,
            indexed=bool(slot.los_path),
            los_path=slot.los_path,
            vector_size=slot.mult,
        ))
    return ComponentTable(components=comps)


# --------------------------------------------------------------------------
# Plain instrumentation (the four rules)
# --------------------------------------------------------------------------


def _instrument_stmts(stmts: Sequence[N.Stmt], comp_of: dict) -> list:
    out: list[N.Stmt] = []
    for s in stmts:
        if isinstance(s, (N.VarDecl, ScopeExit)):
            out.append(s)
        elif isinstance(s, N.Block):
            s.body = _instrument_stmts(s.body, comp_of)
            out.append(s)
        elif isinstance(s, (N.Assign, N.ReadStmt, N.PrintStmt, N.CallStmt,
                            N.Return)):
            out.append(Guarded(stmt=s, comp=comp_of[s.node_id],
                               line=s.line, node_id=s.node_id))
        elif isinstance(s, N.If):
            s.cond = CondChoice(cond=s.cond, comp=comp_of[s.node_id],
                                line=s.cond.line)
            s.then_body = _instrument_stmts(s.then_body, comp_of)
            s.else_body = _instrument_stmts(s.else_body, comp_of)
            out.append(s)
        elif isinstance(s, N.While):
            s.cond = LoopGuard(cond=s.cond, comp=comp_of[s.node_id],
                               line=s.cond.line)
            s.body = _instrument_stmts(s.body, comp_of)
            out.append(s)
        else:
            assert isinstance(s, N.For), type(s).__name__
            s.init = [ItemChoice(item=i, comp=comp_of[i.node_id],
                                 line=i.line, node_id=i.node_id)
                      for i in s.init]
            if s.cond is not None:
                s.cond = LoopGuard(cond=s.cond, comp=comp_of[s.node_id],
                                   line=s.cond.line)
            s.body = _instrument_stmts(s.body, comp_of)
            s.update = [ItemChoice(item=i, comp=comp_of[i.node_id],
                                   line=i.line, node_id=i.node_id)
                        for i in s.update]
            out.append(s)
    return out


def instrument(u: UnrolledAst, unwind: int,
               vector_cap: int = 4096) -> InstrumentedAst:
    """Apply the four relaxation rules to every scope of the unrolled
    program. Scope bodies are rewritten in place (they are per-test copies
    already); cloned nodes find their component through the preserved
    original node_id."""
    if unwind < 1:
        raise ValueError("unwind must be >= 1")
    table = build_table(u.source, unwind, vector_cap)
    comp_of = {c.node_id: c for c in table}
    mult = _call_multiplicities(u.source, unwind)
    live = {name for name, m in mult.items() if m >= 1}
    for scope in u.scopes:
        scope.body = _instrument_stmts(scope.body, comp_of)
        for fn in scope.helpers:
            original = _original_name(fn.name, scope)
            if original in live:
                fn.body = _instrument_stmts(fn.body, comp_of)
    return InstrumentedAst(unrolled=u, scopes=u.scopes, table=table,
                           unwind=unwind)


def _original_name(renamed: str, scope: Scope) -> str:
    suffix = f"_{scope.index}"
    if renamed.endswith(suffix):
        return renamed[: -len(suffix)]
    return renamed


# --------------------------------------------------------------------------
# Refinement: sub-expression granularity with nondeterministic fallbacks
# --------------------------------------------------------------------------


def chain_operands(expr: N.Expr) -> tuple:
    """Operands of the top-level same-operator ``&&``/``||`` chain of a
    condition, left to right; a non-chain condition is its own single
    operand. Returns (operands, op) where op is None for single operands."""
    if not isinstance(expr, N.Binary) or expr.op not in ("&&", "||"):
        return [expr], None
    op = expr.op
    operands: list[N.Expr] = []

    def flatten(e: N.Expr) -> None:
        if isinstance(e, N.Binary) and e.op == op:
            flatten(e.left)
            flatten(e.right)
        else:
            operands.append(e)

    flatten(expr)
    return operands, op


def _refined_roles(slot: _Slot) -> list:
    if slot.kind in (IF_CONDITION, LOOP_CONDITION):
        n = len(chain_operands(slot.cond)[0])
        if n == 1:
            return ["cond"]
        return [f"operand{i + 1}" for i in range(n)]
    if slot.kind == OUTPUT_STMT:
        return ["skip", "value"]
    if slot.kind == INPUT_STMT:
        return ["read"]
    node = slot.node
    if isinstance(node, N.Assign):
        return ["rhs"]
    if isinstance(node, N.Return):
        # A wrong return can be one that should not have run, or one
        # returning the wrong value.
        return ["skip", "value"] if node.value is not None else ["skip"]
    return ["skip"]  # CallStmt: nothing to make nondeterministic


def _split_count(slot: _Slot) -> int:
    """How many refined components a diagnosed node produces."""
    return len(_refined_roles(slot))


def _refine_stmts(stmts: Sequence[N.Stmt], comps_of: dict) -> list:
    """Rewrite one scope at refinement granularity. Nodes present in
    comps_of are diagnosed: they split into their refined components.
    Everything else is emitted bare and always executes."""

    def refine_cond(s: N.Stmt, cond: N.Expr) -> N.Expr:
        comps = comps_of.get(s.node_id)
        if comps is None:
            return cond
        operands, op = chain_operands(cond)
        assert len(operands) == len(comps)
        wrapped = [NondetChoice(expr=e, comp=c, is_bool=True, line=e.line)
                   for e, c in zip(operands, comps)]
        result: N.Expr = wrapped[0]
        for w in wrapped[1:]:
            result = N.Binary(op=op, left=result, right=w, line=cond.line)
        return result

    out: list[N.Stmt] = []
    for s in stmts:
        if isinstance(s, (N.VarDecl, ScopeExit)):
            out.append(s)
        elif isinstance(s, N.Return):
            comps = comps_of.get(s.node_id)
            if comps is not None:
                if len(comps) == 2 and s.value is not None:
                    skip, value = comps
                    s.value = NondetChoice(expr=s.value, comp=value,
                                           is_bool=False, line=s.line)
                else:
                    (skip,) = comps
                s = Guarded(stmt=s, comp=skip, line=s.line,
                            node_id=s.node_id)
            out.append(s)
        elif isinstance(s, N.Block):
            s.body = _refine_stmts(s.body, comps_of)
            out.append(s)
        elif isinstance(s, N.Assign):
            comps = comps_of.get(s.node_id)
            if comps is not None:
                (c,) = comps
                s.value = NondetChoice(expr=s.value, comp=c, is_bool=False,
                                       line=s.value.line)
            out.append(s)
        elif isinstance(s, N.ReadStmt):
            comps = comps_of.get(s.node_id)
            if comps is not None:
                (c,) = comps
                s = RefinedRead(target=s, comp=c, line=s.line,
                                node_id=s.node_id)
            out.append(s)
        elif isinstance(s, N.PrintStmt):
            comps = comps_of.get(s.node_id)
            if comps is not None:
                skip, value = comps
                s.value = NondetChoice(expr=s.value, comp=value,
                                       is_bool=False, line=s.value.line)
                s = Guarded(stmt=s, comp=skip, line=s.line,
                            node_id=s.node_id)
            out.append(s)
        elif isinstance(s, N.CallStmt):
            comps = comps_of.get(s.node_id)
            if comps is not None:
                (c,) = comps
                s = Guarded(stmt=s, comp=c, line=s.line, node_id=s.node_id)
            out.append(s)
        elif isinstance(s, N.If):
            s.cond = refine_cond(s, s.cond)
            s.then_body = _refine_stmts(s.then_body, comps_of)
            s.else_body = _refine_stmts(s.else_body, comps_of)
            out.append(s)
        elif isinstance(s, N.While):
            s.cond = refine_cond(s, s.cond)
            s.body = _refine_stmts(s.body, comps_of)
            out.append(s)
        else:
            assert isinstance(s, N.For), type(s).__name__
            s.init = _refine_stmts(s.init, comps_of)
            if s.cond is not None:
                s.cond = refine_cond(s, s.cond)
            s.body = _refine_stmts(s.body, comps_of)
            s.update = _refine_stmts(s.update, comps_of)
            out.append(s)
    return out


def refine_instrument(ast: N.Program, failing, diagnosis, unwind: int,
                      vector_cap: int = 4096,
                      io_multiplier: int = 100) -> InstrumentedAst:
    """Rebuild the unrolled program at sub-expression granularity.

    ``diagnosis`` names components of the plain table (an object with a
    ``components`` attribute, or an iterable of component ids). Diagnosed
    nodes split per :func:`_refined_roles`; the rest run unconditionally.
    Refined weights are the parent node's weight scaled by lcm(splits) /
    split so they remain positive integers; ``table.scale`` records the
    lcm for cost comparisons against the unrefined run.
    """
    from ..encode.weights import compute_weights

    base = build_table(ast, unwind, vector_cap)
    compute_weights(base, ast, io_multiplier)
    ids = getattr(diagnosis, "components", diagnosis)
    diagnosed_nodes = {base[i].node_id for i in ids}

    slots = _plan_slots(ast, unwind, vector_cap)
    chosen = [s for s in slots if s.node.node_id in diagnosed_nodes]
    scale = math.lcm(1, *(_split_count(s) for s in chosen))

    comps: list[Component] = []
    node_comps: dict[int, list] = {}
    next_id = 1
    for slot in chosen:
        parent = base.component_for(slot.node.node_id)
        roles = _refined_roles(slot)
        split = len(roles)
        created = []
        for role in roles:
            comps.append(Component(
                component_id=len(comps),
                node_id=slot.node.node_id,
                line=slot.line,
                kind=slot.kind,
                healthy_var=next_id,
                indexed=bool(slot.los_path),
                los_path=slot.los_path,
                vector_size=slot.mult,
                weight=parent.weight * scale // split,
                role=role,
                split=split,
            ))
            created.append(comps[-1])
            next_id += 1
        node_comps[slot.node.node_id] = created

    u = unroll(ast, failing)
    mult = _call_multiplicities(ast, unwind)
    live = {name for name, m in mult.items() if m >= 1}
    for scope in u.scopes:
        scope.body = _refine_stmts(scope.body, node_comps)
        for fn in scope.helpers:
            if _original_name(fn.name, scope) in live:
                fn.body = _refine_stmts(fn.body, node_comps)
    table = ComponentTable(components=comps, scale=scale, refined=True)
    return InstrumentedAst(unrolled=u, scopes=u.scopes, table=table,
                           unwind=unwind, refined=True)
