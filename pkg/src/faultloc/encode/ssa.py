"""Sorted terms over W-bit integers and booleans, and the SSA program.

The translator lowers an instrumented program to a flat list of
*definitions*: ``name := term``, each name defined exactly once, each
term referring only to earlier names, free symbols (healthy variables,
``_ev`` choices, nondet values, uninitialized reads) and literals.
``run_defs`` evaluates that list under a binding of the free symbols
with the same W-bit semantics as the concrete interpreter, which gives
the bit-blaster an independent ground-truth oracle.

Int constants are stored already normalized to the signed W-bit range;
the constructors below fold only width-independent identities.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional

from ..execution import c_div, c_mod, wrap

INT = "int"
BOOL = "bool"

_ARITH = frozenset({"add", "sub", "mul", "div", "mod"})
_CMP = frozenset({"lt", "le", "gt", "ge", "eq", "ne"})
_GATES = frozenset({"and", "or"})


class Term:
    """Marker base; every term is a Const, Sym, or App."""

    __slots__ = ()


@dataclass(frozen=True)
class Const(Term):
    value: int
    sort: str = INT


@dataclass(frozen=True)
class Sym(Term):
    name: str
    sort: str = INT


@dataclass(frozen=True)
class App(Term):
    op: str
    args: tuple
    sort: str = INT


TRUE = Const(1, BOOL)
FALSE = Const(0, BOOL)


def const_int(value: int, width: int) -> Const:
    return Const(wrap(value, width), INT)


def bool_const(value: bool) -> Const:
    return TRUE if value else FALSE


def _app(op: str, args: tuple, sort: str) -> App:
    return App(op, args, sort)


def _binary(op: str, a: Term, b: Term) -> App:
    assert a.sort == INT and b.sort == INT, op
    return _app(op, (a, b), INT)


def add(a: Term, b: Term) -> Term:
    if isinstance(b, Const) and b.value == 0:
        return a
    if isinstance(a, Const) and a.value == 0:
        return b
    return _binary("add", a, b)


def sub(a: Term, b: Term) -> Term:
    if isinstance(b, Const) and b.value == 0:
        return a
    return _binary("sub", a, b)


def mul(a: Term, b: Term) -> Term:
    return _binary("mul", a, b)


def div(a: Term, b: Term) -> Term:
    return _binary("div", a, b)


def mod(a: Term, b: Term) -> Term:
    return _binary("mod", a, b)


def neg(a: Term) -> Term:
    assert a.sort == INT
    return _app("neg", (a,), INT)


def _compare(op: str, a: Term, b: Term) -> Term:
    assert a.sort == INT and b.sort == INT, op
    if isinstance(a, Const) and isinstance(b, Const):
        table = {
            "lt": a.value < b.value,
            "le": a.value <= b.value,
            "gt": a.value > b.value,
            "ge": a.value >= b.value,
            "eq": a.value == b.value,
            "ne": a.value != b.value,
        }
        return bool_const(table[op])
    if op in ("eq", "le", "ge") and a == b:
        return TRUE
    if op in ("ne", "lt", "gt") and a == b:
        return FALSE
    return _app(op, (a, b), BOOL)


def lt(a: Term, b: Term) -> Term:
    return _compare("lt", a, b)


def le(a: Term, b: Term) -> Term:
    return _compare("le", a, b)


def gt(a: Term, b: Term) -> Term:
    return _compare("gt", a, b)


def ge(a: Term, b: Term) -> Term:
    return _compare("ge", a, b)


def eq(a: Term, b: Term) -> Term:
    return _compare("eq", a, b)


def ne(a: Term, b: Term) -> Term:
    return _compare("ne", a, b)


def not_(a: Term) -> Term:
    assert a.sort == BOOL
    if isinstance(a, Const):
        return bool_const(a.value == 0)
    if isinstance(a, App) and a.op == "not":
        return a.args[0]
    return _app("not", (a,), BOOL)


def and_(*args: Term) -> Term:
    kept = []
    for a in args:
        assert a.sort == BOOL
        if isinstance(a, Const):
            if a.value == 0:
                return FALSE
            continue
        kept.append(a)
    if not kept:
        return TRUE
    if len(kept) == 1:
        return kept[0]
    return _app("and", tuple(kept), BOOL)


def or_(*args: Term) -> Term:
    kept = []
    for a in args:
        assert a.sort == BOOL
        if isinstance(a, Const):
            if a.value != 0:
                return TRUE
            continue
        kept.append(a)
    if not kept:
        return FALSE
    if len(kept) == 1:
        return kept[0]
    return _app("or", tuple(kept), BOOL)


def ite(c: Term, a: Term, b: Term) -> Term:
    assert c.sort == BOOL and a.sort == b.sort
    if isinstance(c, Const):
        return a if c.value != 0 else b
    if a == b:
        return a
    if a.sort == BOOL:
        if a == TRUE and b == FALSE:
            return c
        if a == FALSE and b == TRUE:
            return not_(c)
        if b == FALSE:
            return and_(c, a)
        if a == TRUE:
            return or_(c, b)
    return _app("ite", (c, a, b), a.sort)


def b2i(a: Term) -> Term:
    assert a.sort == BOOL
    if isinstance(a, Const):
        return Const(a.value, INT)
    return _app("b2i", (a,), INT)


def i2b(a: Term) -> Term:
    assert a.sort == INT
    if isinstance(a, Const):
        return bool_const(a.value != 0)
    if isinstance(a, App) and a.op == "b2i":
        return a.args[0]
    return _app("i2b", (a,), BOOL)


@dataclass(frozen=True)
class ScopeOutputs:
    """Decode/assertion handles for a single test scope.

    ``length`` is the number of values emitted (int term); ``cells`` has
    ``len(expected) + 4`` slots; ``overflow`` is sticky and trips when a
    print lands past the last slot; ``ok`` is the acceptance term: the
    run printed exactly the expected sequence without overflow.
    """

    test_id: str
    expected: tuple
    length: Term
    cells: tuple
    overflow: Term
    ok: Term


@dataclass
class SsaProgram:
    """Definitions plus the hard/soft interface of one encoding.

    ``healthy`` maps component_id to the name of its (free) healthy
    symbol. ``assumes`` holds the loop unwinding assumptions, always
    asserted hard; ``asserts`` holds the output acceptance conjunction
    (left empty when the encoding is built for trace decoding instead of
    diagnosis). Free symbols other than healthy variables are recorded
    in ``frees`` by kind for inspection.
    """

    width: int
    defs: list
    healthy: dict
    assumes: list
    asserts: list
    outputs: list
    frees: dict

    def healthy_sym(self, component_id: int) -> Sym:
        return Sym(self.healthy[component_id], BOOL)


def eval_term(t: Term, env: Mapping, width: int) -> int:
    """Evaluate under ``env``; unbound symbols read as 0 / false."""
    if isinstance(t, Const):
        return t.value
    if isinstance(t, Sym):
        return env.get(t.name, 0)
    assert isinstance(t, App)
    op = t.op
    if op == "ite":
        c = eval_term(t.args[0], env, width)
        return eval_term(t.args[1 if c else 2], env, width)
    if op == "and":
        return 1 if all(eval_term(a, env, width) for a in t.args) else 0
    if op == "or":
        return 1 if any(eval_term(a, env, width) for a in t.args) else 0
    vals = [eval_term(a, env, width) for a in t.args]
    if op == "add":
        return wrap(vals[0] + vals[1], width)
    if op == "sub":
        return wrap(vals[0] - vals[1], width)
    if op == "mul":
        return wrap(vals[0] * vals[1], width)
    if op == "div":
        return c_div(vals[0], vals[1], width)
    if op == "mod":
        return c_mod(vals[0], vals[1], width)
    if op == "neg":
        return wrap(-vals[0], width)
    if op == "not":
        return 0 if vals[0] else 1
    if op == "b2i":
        return vals[0]
    if op == "i2b":
        return 1 if vals[0] != 0 else 0
    table = {
        "lt": vals[0] < vals[1],
        "le": vals[0] <= vals[1],
        "gt": vals[0] > vals[1],
        "ge": vals[0] >= vals[1],
        "eq": vals[0] == vals[1],
        "ne": vals[0] != vals[1],
    }
    return 1 if table[op] else 0


def run_defs(ssa: SsaProgram, inputs: Optional[Mapping] = None) -> dict:
    """Evaluate every definition in order; returns the full environment.

    ``inputs`` binds free symbols (healthy vars default to unbound = 0,
    so callers normally pass all-healthy bindings explicitly).
    """
    env = dict(inputs or {})
    for name, t in ssa.defs:
        env[name] = eval_term(t, env, ssa.width)
    return env


def free_syms(t: Term, acc: Optional[set] = None) -> set:
    if acc is None:
        acc = set()
    if isinstance(t, Sym):
        acc.add(t.name)
    elif isinstance(t, App):
        for a in t.args:
            free_syms(a, acc)
    return acc
