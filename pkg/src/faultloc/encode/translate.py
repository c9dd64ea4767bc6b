"""Symbolic translation of an instrumented program into SSA form.

One pass walks every scope of the instrumented unrolling and threads a
guard term through the statements, turning assignments into
``x := ite(guard, new, old)`` definitions. Relaxation wrappers become
the corresponding term shapes:

* ``Guarded``/``ItemChoice`` execute under ``healthy ∨ choice`` with a
  fresh choice symbol per dynamic occurrence, so a relaxed component is
  free to act or stand down independently at each instance (scalar
  occurrences degenerate to the single printed ``_rv`` bit; the fresh
  per-instance symbols are the iteration-indexed vectors of the printed
  form);
* if-conditions become ``ite(healthy, cond, ev)`` with a fresh ``ev``
  per dynamic occurrence;
* loop conditions become ``¬(healthy ∨ choice) ∨ cond`` at each check,
  so relaxation can only extend a loop, never cut it short;
* refinement wrappers substitute fresh nondet symbols for values.

Loops unwind exactly ``unwind`` times; each loop then contributes a
hard assumption that its (relaxed) condition is false at the boundary
check, when still reachable. Helper calls are inlined per call site
with a fresh local frame (helpers cannot touch scope state, so only the
returned term escapes). Reads consume per-scope concrete inputs through
a symbolic cursor (past-the-end reads yield 0); prints append to a
bounded cell buffer with a sticky overflow bit. The per-scope
acceptance term ``ok`` states the buffer holds exactly the expected
sequence; with ``assert_outputs`` these become hard assertions (the
diagnosis encoding), without, the formula is a pure trace semantics
whose models decode to concrete runs.

Uninitialized variables are unconstrained fresh symbols here, while the
concrete interpreter reads them as 0; programs that read storage before
writing it can therefore decode differently than they run.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..execution import wrap
from ..frontend import nodes as N
from ..transform.instrument import (
    CondChoice,
    Guarded,
    InstrumentedAst,
    ItemChoice,
    LoopGuard,
    NondetChoice,
    RefinedRead,
)
from ..transform.unroll import ScopeExit
from . import ssa as S
from .ssa import BOOL, INT, Const, Sym, Term

OUTPUT_SLACK = 4


@dataclass
class _Frame:
    """Mutable per-function-instance state (main scope or inlined call)."""

    env: dict = field(default_factory=dict)
    arrays: dict = field(default_factory=dict)
    alive: Term = S.TRUE
    ret: Term = S.FALSE  # helpers only; replaced at frame creation


class _Translator:
    def __init__(self, inst: InstrumentedAst, width: int,
                 assert_outputs: bool):
        self.inst = inst
        self.width = width
        self.assert_outputs = assert_outputs
        self.defs: list = []
        self.assumes: list = []
        self.outputs: list = []
        self.frees: dict = {"ev": [], "choice": [], "nondet": [], "uninit": []}
        self.healthy = {c.component_id: c.rv_name for c in inst.table}
        self._serial = 0
        self._scope_tag = ""

    # -- naming ------------------------------------------------------------

    def _next(self) -> int:
        self._serial += 1
        return self._serial

    def bind(self, hint: str, term: Term) -> Term:
        """Name an intermediate term; constants and symbols pass through."""
        if not isinstance(term, S.App):
            return term
        name = f"{hint}@{self._next()}"
        self.defs.append((name, term))
        return Sym(name, term.sort)

    def fresh(self, kind: str, hint: str, sort: str) -> Sym:
        sym = Sym(f"{hint}.{self._next()}", sort)
        self.frees[kind].append(sym.name)
        return sym

    # -- relaxation symbols --------------------------------------------------

    def _healthy(self, comp) -> Sym:
        return Sym(comp.rv_name, BOOL)

    def _entry(self, comp) -> Term:
        """healthy ∨ fresh-choice: acts normally unless relaxed AND the
        per-occurrence choice stands down."""
        choice = self.fresh("choice", f"_ch{comp.healthy_var}{self._scope_tag}",
                            BOOL)
        return S.or_(self._healthy(comp), choice)

    def _ev(self, comp) -> Sym:
        return self.fresh("ev", f"{comp.ev_name}{self._scope_tag}", BOOL)

    def _nondet(self, comp, is_bool: bool) -> Term:
        sym = self.fresh("nondet", f"_nd{comp.healthy_var}{self._scope_tag}",
                         BOOL if is_bool else INT)
        return S.b2i(sym) if is_bool else sym

    def _uninit(self, hint: str) -> Sym:
        sym = Sym(f"{hint}?{self._next()}", INT)
        self.frees["uninit"].append(sym.name)
        return sym

    # -- expressions ---------------------------------------------------------

    def expr(self, e, g: Term, fr: _Frame) -> Term:
        """Integer-sorted value of ``e``; pure, so ``g`` only scopes the
        unwinding assumptions of loops inside called helpers."""
        w = self.width
        if isinstance(e, NondetChoice):
            val = self._nondet(e.comp, e.is_bool)
            return S.ite(self._healthy(e.comp), self.expr(e.expr, g, fr), val)
        if isinstance(e, N.IntLit):
            return S.const_int(e.value, w)
        if isinstance(e, N.BoolLit):
            return Const(1 if e.value else 0, INT)
        if isinstance(e, N.VarRef):
            if e.name not in fr.env:
                fr.env[e.name] = self._uninit(e.name)
            return fr.env[e.name]
        if isinstance(e, N.ArrayRef):
            idx = self.expr(e.index, g, fr)
            cells = fr.arrays.get(e.name, [])
            out: Term = Const(0, INT)
            for k in range(len(cells) - 1, -1, -1):
                out = S.ite(S.eq(idx, Const(k, INT)), cells[k], out)
            return self.bind(f"{e.name}-at", out)
        if isinstance(e, N.Unary):
            v = self.expr(e.operand, g, fr)
            if e.op == "-":
                return S.neg(v)
            return S.b2i(S.not_(S.i2b(v)))
        if isinstance(e, N.Binary):
            a = self.expr(e.left, g, fr)
            b = self.expr(e.right, g, fr)
            table = {
                "+": S.add, "-": S.sub, "*": S.mul, "/": S.div, "%": S.mod,
                "<": S.lt, "<=": S.le, ">": S.gt, ">=": S.ge,
                "==": S.eq, "!=": S.ne,
            }
            if e.op in ("&&", "||"):
                gate = S.and_ if e.op == "&&" else S.or_
                return S.b2i(gate(S.i2b(a), S.i2b(b)))
            out = table[e.op](a, b)
            return S.b2i(out) if out.sort == BOOL else out
        if isinstance(e, N.Call):
            args = [self.expr(a, g, fr) for a in e.args]
            return self.call(e.name, args, g)
        raise TypeError(f"cannot translate {type(e).__name__}")

    def cond(self, e, g: Term, fr: _Frame) -> Term:
        """Boolean value of an if-condition, applying its relaxation."""
        if isinstance(e, CondChoice):
            c = S.i2b(self.expr(e.cond, g, fr))
            return S.ite(self._healthy(e.comp), c, self._ev(e.comp))
        return S.i2b(self.expr(e, g, fr))

    def loop_check(self, e, g: Term, fr: _Frame) -> Term:
        """Boolean loop-continuation check, applying its relaxation."""
        if e is None:
            return S.TRUE
        if isinstance(e, LoopGuard):
            c = S.i2b(self.expr(e.cond, g, fr))
            return S.or_(S.not_(self._entry(e.comp)), c)
        return S.i2b(self.expr(e, g, fr))

    # -- helper calls ----------------------------------------------------------

    def call(self, name: str, args: list, g: Term) -> Term:
        fn = self._helpers[name]
        fr = _Frame()
        fr.ret = self._uninit(f"ret!{name}")
        for p, a in zip(fn.params, args):
            fr.env[p.name] = a
        self.stmts(fn.body, g, fr)
        return fr.ret

    # -- statements --------------------------------------------------------------

    def stmts(self, body: list, g: Term, fr: _Frame) -> None:
        for st in body:
            self.stmt(st, g, fr)

    def stmt(self, st, g: Term, fr: _Frame) -> None:
        ge = S.and_(g, fr.alive)
        if isinstance(st, Guarded):
            self.stmt(st.stmt, S.and_(ge, self._entry(st.comp)), fr)
        elif isinstance(st, ItemChoice):
            self.stmt(st.item, S.and_(ge, self._entry(st.comp)), fr)
        elif isinstance(st, RefinedRead):
            self.refined_read(st, ge, fr)
        elif isinstance(st, N.VarDecl):
            if st.size is None:
                fr.env[st.name] = self._uninit(st.name)
            else:
                fr.arrays[st.name] = [self._uninit(f"{st.name}[{k}]")
                                      for k in range(st.size)]
        elif isinstance(st, N.Assign):
            self.store(st.target, self.expr(st.value, ge, fr), ge, fr)
        elif isinstance(st, N.ReadStmt):
            self.store(st.target, self.read_value(), ge, fr)
            self.advance_cursor(ge)
        elif isinstance(st, N.PrintStmt):
            self.print_value(self.expr(st.value, ge, fr), ge)
        elif isinstance(st, N.CallStmt):
            self.expr(st.call, ge, fr)
        elif isinstance(st, N.If):
            c = self.bind("c", self.cond(st.cond, ge, fr))
            self.stmts(st.then_body, S.and_(ge, c), fr)
            self.stmts(st.else_body, S.and_(ge, S.not_(c)), fr)
        elif isinstance(st, N.While):
            self.loop(st.cond, st.body, [], g, fr)
        elif isinstance(st, N.For):
            self.stmts(st.init, g, fr)
            self.loop(st.cond, st.body, st.update, g, fr)
        elif isinstance(st, N.Block):
            self.stmts(st.body, g, fr)
        elif isinstance(st, ScopeExit):
            fr.alive = self.bind("alive", S.and_(fr.alive, S.not_(ge)))
        elif isinstance(st, N.Return):
            value = (Const(0, INT) if st.value is None
                     else self.expr(st.value, ge, fr))
            fr.ret = self.bind("ret", S.ite(ge, value, fr.ret))
            fr.alive = self.bind("alive", S.and_(fr.alive, S.not_(ge)))
        else:
            raise TypeError(f"cannot translate {type(st).__name__}")

    def loop(self, cond, body, update, g: Term, fr: _Frame) -> None:
        cont = S.and_(g, fr.alive)
        for _ in range(self.inst.unwind):
            check = S.and_(cont, fr.alive)
            c = self.bind("lc", self.loop_check(cond, check, fr))
            entered = self.bind("g", S.and_(check, c))
            self.stmts(body, entered, fr)
            self.stmts(update, entered, fr)
            cont = entered
        boundary = S.and_(cont, fr.alive)
        c = self.loop_check(cond, boundary, fr)
        self.assumes.append(S.not_(S.and_(boundary, c)))

    # -- stores, reads, prints ------------------------------------------------------

    def store(self, target, value: Term, g: Term, fr: _Frame) -> None:
        if isinstance(target, N.VarRef):
            old = fr.env.get(target.name)
            if old is None:
                old = self._uninit(target.name)
            fr.env[target.name] = self.bind(
                target.name, S.ite(g, value, old))
            return
        idx = self.expr(target.index, g, fr)
        cells = fr.arrays.get(target.name, [])
        for k in range(len(cells)):
            hit = S.and_(g, S.eq(idx, Const(k, INT)))
            cells[k] = self.bind(f"{target.name}[{k}]",
                                 S.ite(hit, value, cells[k]))

    def read_value(self) -> Term:
        out: Term = Const(0, INT)
        for k in range(len(self._inputs) - 1, -1, -1):
            out = S.ite(S.eq(self._cursor, Const(k, INT)),
                        S.const_int(self._inputs[k], self.width), out)
        return self.bind("in", out)

    def advance_cursor(self, g: Term) -> None:
        self._cursor = self.bind(
            "cur", S.ite(g, S.add(self._cursor, Const(1, INT)), self._cursor))

    def refined_read(self, st: RefinedRead, ge: Term, fr: _Frame) -> None:
        active = self._entry(st.comp)
        value = S.ite(active, self.read_value(), self._nondet(st.comp, False))
        self.store(st.target.target, value, ge, fr)
        self._cursor = self.bind(
            "cur", S.ite(S.and_(ge, active),
                         S.add(self._cursor, Const(1, INT)), self._cursor))

    def print_value(self, value: Term, g: Term) -> None:
        cap = len(self._cells)
        for k in range(cap):
            hit = S.and_(g, S.eq(self._olen, Const(k, INT)))
            self._cells[k] = self.bind(f"out{k}",
                                       S.ite(hit, value, self._cells[k]))
        self._ovf = self.bind(
            "ovf", S.or_(self._ovf, S.and_(g, S.ge(self._olen,
                                                   Const(cap, INT)))))
        self._olen = self.bind(
            "olen", S.ite(g, S.add(self._olen, Const(1, INT)), self._olen))

    # -- scopes ------------------------------------------------------------------------

    def scope(self, scope, inputs: tuple, expected: tuple) -> None:
        self._scope_tag = f"_{scope.index}"
        self._helpers = {fn.name: fn for fn in scope.helpers}
        self._inputs = inputs
        self._cursor: Term = Const(0, INT)
        self._cells = [Const(0, INT)] * (len(expected) + OUTPUT_SLACK)
        self._olen: Term = Const(0, INT)
        self._ovf: Term = S.FALSE

        fr = _Frame()
        self.stmts(scope.body, S.TRUE, fr)

        want = [S.eq(self._olen, Const(len(expected), INT))]
        for k, v in enumerate(expected):
            want.append(S.eq(self._cells[k], S.const_int(v, self.width)))
        want.append(S.not_(self._ovf))
        ok = self.bind(f"ok!{scope.test_id}", S.and_(*want))
        self.outputs.append(S.ScopeOutputs(
            test_id=scope.test_id,
            expected=tuple(wrap(v, self.width) for v in expected),
            length=self._olen,
            cells=tuple(self._cells),
            overflow=self._ovf,
            ok=ok,
        ))

    def run(self) -> S.SsaProgram:
        u = self.inst.unrolled
        for scope, inputs, expected in zip(self.inst.scopes, u.inputs,
                                           u.expected):
            self.scope(scope, tuple(inputs), tuple(expected))
        asserts = [o.ok for o in self.outputs] if self.assert_outputs else []
        return S.SsaProgram(
            width=self.width,
            defs=self.defs,
            healthy=self.healthy,
            assumes=self.assumes,
            asserts=asserts,
            outputs=self.outputs,
            frees=self.frees,
        )


def ssa_translate(p: InstrumentedAst, unwind: int, width: int, *,
                  assert_outputs: bool = True) -> S.SsaProgram:
    """Lower an instrumented unrolling to SSA definitions.

    ``unwind`` must match the factor the instrumentation was built with
    (vector sizes depend on it). With ``assert_outputs`` the resulting
    program demands every scope reproduce its expected output; without
    it the output terms stay observable but unconstrained, which is the
    trace-decoding mode.
    """
    if unwind != p.unwind:
        raise ValueError(
            f"unwind {unwind} does not match instrumentation ({p.unwind})")
    if width not in (8, 16, 32):
        raise ValueError(f"unsupported width {width}")
    return _Translator(p, width, assert_outputs).run()
