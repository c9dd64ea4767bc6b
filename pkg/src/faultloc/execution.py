"""Concrete MiniC interpreter.

Semantics (shared bit-for-bit with the symbolic encoder):

- every scalar is a W-bit two's-complement integer (bool included:
  nonzero is truthy, comparisons and logic produce 0/1);
- arithmetic wraps at W bits; division/modulo truncate toward zero as in
  C99, and division or modulo by zero yields 0; INT_MIN / -1 wraps;
- ``&&``/``||`` evaluate both operands (helpers are pure, so this is
  indistinguishable from C short-circuiting);
- reads past the end of the test input yield 0; out-of-bounds array
  reads yield 0 and out-of-bounds writes are dropped;
- declared-but-unassigned variables read as 0;
- a helper function that falls off its end returns 0.

Execution budgets come from :class:`faultloc.config.Limits`. A run that
exceeds the per-loop-entry iteration cap or the total step cap stops
early with status ``StepLimitExceeded`` and whatever output it produced
so far; such tests are failing but cannot be encoded within the unwind
bound, so the diagnosis layer excludes them with a warning. A run that
ever reads past the end of its input completes (the read yields 0) but
finishes with status ``RuntimeFault`` and fault ``InputUnderrun``,
which also fails the test.
"""

from __future__ import annotations

from dataclasses import dataclass

from .config import Limits
from .frontend import nodes as n
from .frontend.suite import TestSuite


def wrap(value: int, width: int) -> int:
    """Two's-complement wraparound to a signed W-bit value."""
    half = 1 << (width - 1)
    return ((value + half) & ((1 << width) - 1)) - half


def c_div(a: int, b: int, width: int) -> int:
    if b == 0:
        return 0
    q = abs(a) // abs(b)
    if (a < 0) != (b < 0):
        q = -q
    return wrap(q, width)


def c_mod(a: int, b: int, width: int) -> int:
    if b == 0:
        return 0
    r = abs(a) % abs(b)
    if a < 0:
        r = -r
    return wrap(r, width)


COMPLETED = "Completed"
STEP_LIMIT = "StepLimitExceeded"
RUNTIME_FAULT = "RuntimeFault"
INPUT_UNDERRUN = "InputUnderrun"


@dataclass(frozen=True)
class ExecResult:
    status: str  # Completed | StepLimitExceeded | RuntimeFault
    fault: str | None  # InputUnderrun when status == RuntimeFault
    outputs: tuple[int, ...]
    steps: int
    reads: int  # input values consumed (reads past the end not counted)

    @property
    def completed(self) -> bool:
        return self.status == COMPLETED


class _Limit(Exception):
    pass


class _Return(Exception):
    def __init__(self, value: int):
        self.value = value


class _Interp:
    def __init__(self, program: n.Program, inputs: tuple[int, ...],
                 limits: Limits, width: int):
        self.program = program
        self.inputs = inputs
        self.limits = limits
        self.width = width
        self.cursor = 0
        self.underrun = False
        self.outputs: list[int] = []
        self.steps = 0

    def tick(self):
        self.steps += 1
        if self.steps > self.limits.max_total_steps:
            raise _Limit()

    def run(self) -> None:
        self.call(self.program.main, [])

    def call(self, fn: n.FunctionDef, args: list[int]) -> int:
        env: dict[str, int] = {p.name: a for p, a in zip(fn.params, args)}
        arrays: dict[str, list[int]] = {}
        try:
            self.body(fn.body, env, arrays)
        except _Return as r:
            return r.value
        return 0

    def body(self, body: list[n.Stmt], env, arrays) -> None:
        for s in body:
            self.stmt(s, env, arrays)

    def stmt(self, s: n.Stmt, env, arrays) -> None:
        self.tick()
        w = self.width
        if isinstance(s, n.VarDecl):
            if s.size is not None:
                arrays[s.name] = [0] * s.size
            else:
                env[s.name] = 0
        elif isinstance(s, n.Assign):
            self.store(s.target, self.expr(s.value, env, arrays), env, arrays)
        elif isinstance(s, n.ReadStmt):
            if self.cursor < len(self.inputs):
                value = wrap(self.inputs[self.cursor], w)
                self.cursor += 1
            else:
                value = 0
                self.underrun = True
            self.store(s.target, value, env, arrays)
        elif isinstance(s, n.PrintStmt):
            self.outputs.append(self.expr(s.value, env, arrays))
        elif isinstance(s, n.CallStmt):
            self.expr(s.call, env, arrays)
        elif isinstance(s, n.If):
            if self.expr(s.cond, env, arrays) != 0:
                self.body(s.then_body, env, arrays)
            else:
                self.body(s.else_body, env, arrays)
        elif isinstance(s, n.While):
            iters = 0
            while self.expr(s.cond, env, arrays) != 0:
                iters += 1
                if iters > self.limits.max_loop_iterations:
                    raise _Limit()
                self.body(s.body, env, arrays)
        elif isinstance(s, n.For):
            for item in s.init:
                self.stmt(item, env, arrays)
            iters = 0
            while s.cond is None or self.expr(s.cond, env, arrays) != 0:
                iters += 1
                if iters > self.limits.max_loop_iterations:
                    raise _Limit()
                self.body(s.body, env, arrays)
                for item in s.update:
                    self.stmt(item, env, arrays)
        elif isinstance(s, n.Block):
            self.body(s.body, env, arrays)
        elif isinstance(s, n.Return):
            value = 0 if s.value is None else self.expr(s.value, env, arrays)
            raise _Return(value)
        else:
            raise TypeError(f"cannot execute {type(s).__name__}")

    def store(self, target: n.LValue, value: int, env, arrays) -> None:
        if isinstance(target, n.VarRef):
            env[target.name] = value
        else:
            idx = self.expr(target.index, env, arrays)
            cells = arrays[target.name]
            if 0 <= idx < len(cells):
                cells[idx] = value

    def expr(self, e: n.Expr, env, arrays) -> int:
        self.tick()
        w = self.width
        if isinstance(e, n.IntLit):
            return wrap(e.value, w)
        if isinstance(e, n.BoolLit):
            return 1 if e.value else 0
        if isinstance(e, n.VarRef):
            return env.get(e.name, 0)
        if isinstance(e, n.ArrayRef):
            idx = self.expr(e.index, env, arrays)
            cells = arrays[e.name]
            return cells[idx] if 0 <= idx < len(cells) else 0
        if isinstance(e, n.Unary):
            v = self.expr(e.operand, env, arrays)
            return wrap(-v, w) if e.op == "-" else (1 if v == 0 else 0)
        if isinstance(e, n.Binary):
            a = self.expr(e.left, env, arrays)
            b = self.expr(e.right, env, arrays)
            op = e.op
            if op == "+":
                return wrap(a + b, w)
            if op == "-":
                return wrap(a - b, w)
            if op == "*":
                return wrap(a * b, w)
            if op == "/":
                return c_div(a, b, w)
            if op == "%":
                return c_mod(a, b, w)
            if op == "<":
                return 1 if a < b else 0
            if op == "<=":
                return 1 if a <= b else 0
            if op == ">":
                return 1 if a > b else 0
            if op == ">=":
                return 1 if a >= b else 0
            if op == "==":
                return 1 if a == b else 0
            if op == "!=":
                return 1 if a != b else 0
            if op == "&&":
                return 1 if (a != 0 and b != 0) else 0
            if op == "||":
                return 1 if (a != 0 or b != 0) else 0
            raise TypeError(f"unknown operator {op}")
        if isinstance(e, n.Call):
            fn = self.program.function(e.name)
            args = [self.expr(a, env, arrays) for a in e.args]
            return self.call(fn, args)
        raise TypeError(f"cannot evaluate {type(e).__name__}")


def run_concrete(program: n.Program, inputs: tuple[int, ...] | list[int],
                 limits: Limits | None = None, width: int = 16) -> ExecResult:
    """Execute the program on one input vector."""
    interp = _Interp(program, tuple(inputs), limits or Limits(), width)
    exceeded = False
    try:
        interp.run()
    except _Limit:
        exceeded = True
    if exceeded:
        status, fault = STEP_LIMIT, None
    elif interp.underrun:
        status, fault = RUNTIME_FAULT, INPUT_UNDERRUN
    else:
        status, fault = COMPLETED, None
    return ExecResult(
        status=status,
        fault=fault,
        outputs=tuple(interp.outputs),
        steps=interp.steps,
        reads=interp.cursor,
    )


def classify_tests(program: n.Program, suite: TestSuite,
                   limits: Limits | None = None, width: int = 16,
                   ) -> tuple[list[str], list[str]]:
    """Split suite test ids into (passing, failing) by concrete replay.

    A test passes iff the run completed (no limit hit, no input
    underrun) and printed exactly the expected integer sequence
    (expected values compared W-bit wrapped).
    """
    limits = limits or Limits()
    passing: list[str] = []
    failing: list[str] = []
    for t in suite.tests:
        r = run_concrete(program, t.inputs, limits, width)
        want = tuple(wrap(v, width) for v in t.expected)
        if r.completed and r.outputs == want:
            passing.append(t.test_id)
        else:
            failing.append(t.test_id)
    return passing, failing
