"""Pretty-printer for MiniC programs.

The contract backing the tests: for any checked program,
``shape(parse_program(print_program(p))) == shape(p)``. Parentheses are
emitted only where precedence or associativity demands them, so printing
is canonical (printing twice is a fixpoint).

The Printer class dispatches through overridable methods so the
instrumentation layer can print its extended node types by subclassing.
"""

from __future__ import annotations

from . import nodes as n

_PREC = {
    "||": 1, "&&": 2,
    "==": 3, "!=": 3,
    "<": 4, "<=": 4, ">": 4, ">=": 4,
    "+": 5, "-": 5,
    "*": 6, "/": 6, "%": 6,
}
_UNARY_PREC = 7
_PRIMARY = 8


class Printer:
    indent_unit = "    "

    def __init__(self):
        self.lines: list[str] = []
        self.depth = 0

    # -- emit helpers ------------------------------------------------------

    def emit(self, text: str):
        self.lines.append(self.indent_unit * self.depth + text)

    def program(self, p: n.Program) -> str:
        for i, fn in enumerate(p.functions):
            if i:
                self.emit("")
            self.function(fn)
        return "\n".join(self.lines) + "\n"

    def function(self, fn: n.FunctionDef):
        params = ", ".join(f"{p.type_name} {p.name}" for p in fn.params)
        self.emit(f"{fn.return_type} {fn.name}({params}) {{")
        self.depth += 1
        self.body(fn.body)
        self.depth -= 1
        self.emit("}")

    def body(self, body: list[n.Stmt]):
        for s in body:
            self.stmt(s)

    def braced(self, body: list[n.Stmt]):
        self.depth += 1
        self.body(body)
        self.depth -= 1

    # -- statements ----------------------------------------------------------

    def stmt(self, s: n.Stmt):
        if isinstance(s, n.VarDecl):
            if s.size is not None:
                self.emit(f"{s.type_name} {s.name}[{s.size}];")
            else:
                self.emit(f"{s.type_name} {s.name};")
        elif isinstance(s, n.Assign):
            self.emit(f"{self.expr(s.target)} = {self.expr(s.value)};")
        elif isinstance(s, n.ReadStmt):
            self.emit(f'scanf("%d", &{self.expr(s.target)});')
        elif isinstance(s, n.PrintStmt):
            self.emit(f'printf("%d\\n", {self.expr(s.value)});')
        elif isinstance(s, n.CallStmt):
            self.emit(f"{self.expr(s.call)};")
        elif isinstance(s, n.If):
            self.emit(f"if ({self.expr(s.cond)}) {{")
            self.braced(s.then_body)
            if s.else_body:
                self.emit("} else {")
                self.braced(s.else_body)
            self.emit("}")
        elif isinstance(s, n.While):
            self.emit(f"while ({self.expr(s.cond)}) {{")
            self.braced(s.body)
            self.emit("}")
        elif isinstance(s, n.For):
            init = ", ".join(self.inline_item(i) for i in s.init)
            cond = self.expr(s.cond) if s.cond is not None else ""
            update = ", ".join(self.inline_item(u) for u in s.update)
            self.emit(f"for ({init}; {cond}; {update}) {{")
            self.braced(s.body)
            self.emit("}")
        elif isinstance(s, n.Block):
            self.emit("{")
            self.braced(s.body)
            self.emit("}")
        elif isinstance(s, n.Return):
            if s.value is None:
                self.emit("return;")
            else:
                self.emit(f"return {self.expr(s.value)};")
        else:
            self.extra_stmt(s)

    def inline_item(self, s: n.Stmt) -> str:
        """A for-header comma-list item, no trailing semicolon."""
        if isinstance(s, n.Assign):
            return f"{self.expr(s.target)} = {self.expr(s.value)}"
        if isinstance(s, n.CallStmt):
            return self.expr(s.call)
        return self.extra_inline_item(s)

    def extra_stmt(self, s: n.Stmt):
        raise TypeError(f"cannot print {type(s).__name__}")

    def extra_inline_item(self, s: n.Stmt) -> str:
        raise TypeError(f"cannot print {type(s).__name__}")

    # -- expressions ---------------------------------------------------------

    def expr(self, e: n.Expr, parent_prec: int = 0, right: bool = False) -> str:
        prec = self.expr_prec(e)
        text = self.expr_text(e, prec)
        if prec < parent_prec or (prec == parent_prec and right and prec < _UNARY_PREC):
            return f"({text})"
        return text

    def expr_prec(self, e: n.Expr) -> int:
        if isinstance(e, n.Binary):
            return _PREC[e.op]
        if isinstance(e, n.Unary):
            return _UNARY_PREC
        return _PRIMARY

    def expr_text(self, e: n.Expr, prec: int) -> str:
        if isinstance(e, n.IntLit):
            return str(e.value)
        if isinstance(e, n.BoolLit):
            return "true" if e.value else "false"
        if isinstance(e, n.VarRef):
            return e.name
        if isinstance(e, n.ArrayRef):
            return f"{e.name}[{self.expr(e.index)}]"
        if isinstance(e, n.Unary):
            inner = self.expr(e.operand)
            if self.expr_prec(e.operand) < _PRIMARY:
                inner = f"({inner})"
            return f"{e.op}{inner}"
        if isinstance(e, n.Binary):
            left = self.expr(e.left, prec, right=False)
            op_text = e.op
            right_txt = self.expr(e.right, prec, right=True)
            return f"{left} {op_text} {right_txt}"
        if isinstance(e, n.Call):
            args = ", ".join(self.expr(a) for a in e.args)
            return f"{e.name}({args})"
        return self.extra_expr(e, prec)

    def extra_expr(self, e: n.Expr, prec: int) -> str:
        raise TypeError(f"cannot print {type(e).__name__}")


def print_program(p: n.Program) -> str:
    """Canonical source text of a program."""
    return Printer().program(p)
