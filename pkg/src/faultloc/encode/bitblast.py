"""Bit-blasting SSA terms into CNF via the Tseitin transformation.

Booleans become single literals; ints become W literals, LSB first.
Variable 1 is the constant TRUE (asserted as a unit), so constant bits
are the literals +1/-1 and every gate can fold them away uniformly.
Structurally equal gates are cached and emitted once.

Circuits: ripple-carry adder (wraparound by dropping the carry-out),
shift-and-add multiplier, restoring divider over unsigned magnitudes
with sign fixup afterwards (truncation toward zero; /0 and %0 produce
0, matching the interpreter), subtraction-based signed comparisons,
per-bit multiplexers for ite.

The SSA assertion terms land as hard unit clauses; the unwinding
assumptions always do. ``var_map`` records the literal(s) of every
definition and free symbol, so models decode back to term values with
``term_value``.
"""

from __future__ import annotations

from ..execution import wrap
from . import ssa as S
from .formulas import CnfFormula

_T = 1  # literal of the constant-TRUE variable


class _Blaster:
    def __init__(self, width: int):
        self.width = width
        self.num_vars = 1
        self.clauses: list = [(_T,)]
        self.memo: dict = {}
        self.gates: dict = {}
        self.var_map: dict = {}

    def new_var(self) -> int:
        self.num_vars += 1
        return self.num_vars

    def add(self, *lits: int) -> None:
        self.clauses.append(tuple(lits))

    # -- gates ----------------------------------------------------------

    def AND(self, lits) -> int:
        kept = []
        for l in lits:
            if l == _T:
                continue
            if l == -_T:
                return -_T
            kept.append(l)
        uniq = sorted(set(kept))
        for l in uniq:
            if -l in kept:
                return -_T
        if not uniq:
            return _T
        if len(uniq) == 1:
            return uniq[0]
        key = ("and", tuple(uniq))
        if key not in self.gates:
            z = self.new_var()
            for l in uniq:
                self.add(-z, l)
            self.add(z, *(-l for l in uniq))
            self.gates[key] = z
        return self.gates[key]

    def OR(self, lits) -> int:
        return -self.AND([-l for l in lits])

    def XOR(self, a: int, b: int) -> int:
        if a == _T:
            return -b
        if a == -_T:
            return b
        if b == _T:
            return -a
        if b == -_T:
            return a
        if a == b:
            return -_T
        if a == -b:
            return _T
        if abs(b) < abs(a) or (abs(b) == abs(a) and b < a):
            a, b = b, a
        key = ("xor", a, b)
        if key not in self.gates:
            z = self.new_var()
            self.add(-z, a, b)
            self.add(-z, -a, -b)
            self.add(z, -a, b)
            self.add(z, a, -b)
            self.gates[key] = z
        return self.gates[key]

    def MUX(self, c: int, a: int, b: int) -> int:
        """ite(c, a, b) on single literals."""
        if c == _T:
            return a
        if c == -_T:
            return b
        if a == b:
            return a
        if a == -b:
            return self.XOR(c, b)
        if b == -_T:
            return self.AND([c, a])
        if b == _T:
            return self.OR([-c, a])
        if a == -_T:
            return self.AND([-c, b])
        if a == _T:
            return self.OR([c, b])
        key = ("mux", c, a, b)
        if key not in self.gates:
            z = self.new_var()
            self.add(-z, -c, a)
            self.add(-z, c, b)
            self.add(z, -c, -a)
            self.add(z, c, -b)
            self.add(-z, a, b)
            self.add(z, -a, -b)
            self.gates[key] = z
        return self.gates[key]

    def full_add(self, a: int, b: int, c: int) -> tuple:
        s = self.XOR(self.XOR(a, b), c)
        carry = self.OR([self.AND([a, b]), self.AND([a, c]),
                         self.AND([b, c])])
        return s, carry

    # -- word-level circuits ------------------------------------------------

    def ripple(self, a, b, carry: int) -> tuple:
        out = []
        for x, y in zip(a, b):
            s, carry = self.full_add(x, y, carry)
            out.append(s)
        return out, carry

    def add_w(self, a, b):
        return self.ripple(a, b, -_T)[0]

    def sub_w(self, a, b):
        return self.ripple(a, [-y for y in b], _T)[0]

    def neg_w(self, a):
        zero = [-_T] * len(a)
        return self.sub_w(zero, a)

    def mul_w(self, a, b):
        w = self.width
        acc = [-_T] * w
        for i in range(w):
            shifted = [-_T] * i + a[: w - i]
            masked = [self.AND([b[i], x]) for x in shifted]
            acc = self.add_w(acc, masked)
        return acc

    def abs_w(self, a):
        """Unsigned magnitude; the minimum value maps to itself, which
        reads as 2^(W-1) unsigned — exactly its true magnitude."""
        return [self.MUX(a[-1], n, x) for n, x in zip(self.neg_w(a), a)]

    def udivmod(self, a, b) -> tuple:
        """Unsigned restoring division; b == 0 gives quotient/remainder 0
        at the signed wrapper level (handled there)."""
        w = self.width
        ext_b = b + [-_T]  # W+1 bits
        rem = [-_T] * (w + 1)
        quo = [-_T] * w
        for i in range(w - 1, -1, -1):
            rem = [a[i]] + rem[:w]
            diff, carry = self.ripple(rem, [-y for y in ext_b], _T)
            fits = carry  # no borrow means rem >= b
            rem = [self.MUX(fits, d, r) for d, r in zip(diff, rem)]
            quo[i] = fits
        return quo, rem[:w]

    def divmod_w(self, a, b) -> tuple:
        zero = [-_T] * self.width
        q_mag, r_mag = self.udivmod(self.abs_w(a), self.abs_w(b))
        sq = self.XOR(a[-1], b[-1])
        q = [self.MUX(sq, n, x) for n, x in zip(self.neg_w(q_mag), q_mag)]
        r = [self.MUX(a[-1], n, x) for n, x in zip(self.neg_w(r_mag), r_mag)]
        b_zero = self.AND([-y for y in b])
        q = [self.MUX(b_zero, z, x) for z, x in zip(zero, q)]
        r = [self.MUX(b_zero, z, x) for z, x in zip(zero, r)]
        return q, r

    def eq_w(self, a, b) -> int:
        return self.AND([-self.XOR(x, y) for x, y in zip(a, b)])

    def lt_w(self, a, b) -> int:
        diff = self.sub_w(a, b)
        return self.MUX(self.XOR(a[-1], b[-1]), a[-1], diff[-1])

    # -- terms ------------------------------------------------------------------

    def const_bits(self, value: int):
        u = value & ((1 << self.width) - 1)
        return [(_T if (u >> i) & 1 else -_T) for i in range(self.width)]

    def blast(self, t: S.Term):
        hit = self.memo.get(t)
        if hit is not None:
            return hit
        out = self._blast(t)
        self.memo[t] = out
        return out

    def _blast(self, t: S.Term):
        if isinstance(t, S.Const):
            if t.sort == S.BOOL:
                return _T if t.value else -_T
            return self.const_bits(t.value)
        if isinstance(t, S.Sym):
            if t.sort == S.BOOL:
                out = self.new_var()
            else:
                out = [self.new_var() for _ in range(self.width)]
            self.var_map[t.name] = out
            return out
        assert isinstance(t, S.App)
        op = t.op
        if op in ("and", "or", "not"):
            lits = [self.blast(a) for a in t.args]
            if op == "and":
                return self.AND(lits)
            if op == "or":
                return self.OR(lits)
            return -lits[0]
        if op == "ite":
            c = self.blast(t.args[0])
            a = self.blast(t.args[1])
            b = self.blast(t.args[2])
            if t.sort == S.BOOL:
                return self.MUX(c, a, b)
            return [self.MUX(c, x, y) for x, y in zip(a, b)]
        if op == "b2i":
            return [self.blast(t.args[0])] + [-_T] * (self.width - 1)
        if op == "i2b":
            return self.OR(self.blast(t.args[0]))
        a = self.blast(t.args[0])
        if op == "neg":
            return self.neg_w(a)
        b = self.blast(t.args[1])
        if op == "add":
            return self.add_w(a, b)
        if op == "sub":
            return self.sub_w(a, b)
        if op == "mul":
            return self.mul_w(a, b)
        if op == "div":
            return self.divmod_w(a, b)[0]
        if op == "mod":
            return self.divmod_w(a, b)[1]
        if op == "eq":
            return self.eq_w(a, b)
        if op == "ne":
            return -self.eq_w(a, b)
        if op == "lt":
            return self.lt_w(a, b)
        if op == "gt":
            return self.lt_w(b, a)
        if op == "le":
            return -self.lt_w(b, a)
        if op == "ge":
            return -self.lt_w(a, b)
        raise TypeError(f"cannot blast op {op}")

    def assert_lit(self, lit: int) -> None:
        if lit == _T:
            return
        self.add(lit)  # lit == -1 yields the contradictory unit (-1)


def bitblast(s: S.SsaProgram, width: int) -> CnfFormula:
    """CNF of an SSA program; hard assertions and assumptions included.

    ``var_map`` maps every definition/free-symbol name to its literal
    (bool) or LSB-first literal tuple (int); healthy variables always
    get an entry even when no definition mentions them.
    """
    assert width == s.width, "width must match the translation"
    bl = _Blaster(width)
    for name, term in s.defs:
        out = bl.blast(term)
        bl.memo[S.Sym(name, term.sort)] = out
        bl.var_map[name] = tuple(out) if isinstance(out, list) else out
    for name in s.healthy.values():
        bl.blast(S.Sym(name, S.BOOL))
    for t in s.assumes:
        bl.assert_lit(bl.blast(t))
    for t in s.asserts:
        bl.assert_lit(bl.blast(t))
    var_map = {k: (tuple(v) if isinstance(v, list) else v)
               for k, v in bl.var_map.items()}
    cnf = CnfFormula(bl.num_vars, bl.clauses, var_map)
    cnf.check()
    return cnf


def lit_true(model, lit: int) -> bool:
    """Truth of a DIMACS literal in an int8 model array (+1 = true)."""
    positive = model[abs(lit)] == 1
    return positive if lit > 0 else not positive


def term_value(t: S.Term, cnf: CnfFormula, model, width: int) -> int:
    """Signed value of a Const/Sym observable under a model."""
    if isinstance(t, S.Const):
        return t.value
    assert isinstance(t, S.Sym), "only named observables decode"
    entry = cnf.var_map[t.name]
    if t.sort == S.BOOL:
        return 1 if lit_true(model, entry) else 0
    raw = 0
    for i, lit in enumerate(entry):
        if lit_true(model, lit):
            raw |= 1 << i
    return wrap(raw, width)
