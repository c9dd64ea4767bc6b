"""Lexer and recursive-descent parser for MiniC.

`parse_program` is the single entry point: it lexes, parses, desugars
(scanf/printf conversions, declaration initializers, ++/--), runs the
static checks in :mod:`faultloc.frontend.semantics`, and assigns node
ids. Parse failures raise :class:`ParseError` with the offending token's
position; constructs outside the subset raise :class:`SemanticError`
naming the construct.
"""

from __future__ import annotations

import copy
from dataclasses import dataclass

from ..errors import ParseError, SemanticError
from . import nodes as n
from .semantics import check_program

KEYWORDS = {
    "int", "bool", "void", "if", "else", "while", "for", "return",
    "true", "false", "scanf", "printf",
}

# Recognized so we can reject them by name instead of with a confusing
# generic parse error.
UNSUPPORTED_KEYWORDS = {
    "break", "continue", "do", "switch", "case", "default", "goto",
    "char", "float", "double", "struct", "union", "enum", "typedef",
    "unsigned", "signed", "long", "short", "static", "const", "sizeof",
}

PUNCT2 = ("&&", "||", "==", "!=", "<=", ">=", "++", "--")
PUNCT1 = "+-*/%<>=!(){}[];,&"


@dataclass
class Token:
    kind: str  # 'int' | 'id' | 'kw' | 'str' | 'punct' | 'eof'
    text: str
    line: int
    col: int


def tokenize(src: str) -> list[Token]:
    toks: list[Token] = []
    i, line, col = 0, 1, 1
    length = len(src)

    def err(msg: str, ln: int, cl: int):
        raise ParseError(msg, ln, cl)

    while i < length:
        c = src[i]
        if c == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if c in " \t\r":
            i += 1
            col += 1
            continue
        if src.startswith("//", i):
            while i < length and src[i] != "\n":
                i += 1
            continue
        if src.startswith("/*", i):
            end = src.find("*/", i + 2)
            if end < 0:
                err("unterminated comment", line, col)
            skipped = src[i:end + 2]
            nl = skipped.count("\n")
            if nl:
                line += nl
                col = len(skipped) - skipped.rfind("\n")
            else:
                col += len(skipped)
            i = end + 2
            continue
        if c == '"':
            j = i + 1
            buf = []
            while j < length and src[j] != '"':
                if src[j] == "\n":
                    err("unterminated string literal", line, col)
                if src[j] == "\\" and j + 1 < length:
                    esc = src[j + 1]
                    buf.append({"n": "\n", "t": "\t", "\\": "\\", '"': '"'}.get(esc))
                    if buf[-1] is None:
                        err(f"unsupported escape '\\{esc}'", line, col)
                    j += 2
                else:
                    buf.append(src[j])
                    j += 1
            if j >= length:
                err("unterminated string literal", line, col)
            toks.append(Token("str", "".join(buf), line, col))
            col += j + 1 - i
            i = j + 1
            continue
        if c.isdigit():
            j = i
            while j < length and src[j].isdigit():
                j += 1
            if j < length and (src[j].isalpha() or src[j] == "_" or src[j] == "."):
                err(f"malformed number near '{src[i:j + 1]}'", line, col)
            toks.append(Token("int", src[i:j], line, col))
            col += j - i
            i = j
            continue
        if c.isalpha() or c == "_":
            j = i
            while j < length and (src[j].isalnum() or src[j] == "_"):
                j += 1
            word = src[i:j]
            if word in UNSUPPORTED_KEYWORDS:
                raise SemanticError(f"'{word}' is not supported", line)
            kind = "kw" if word in KEYWORDS else "id"
            toks.append(Token(kind, word, line, col))
            col += j - i
            i = j
            continue
        if src[i:i + 2] in PUNCT2:
            toks.append(Token("punct", src[i:i + 2], line, col))
            i += 2
            col += 2
            continue
        if c in PUNCT1:
            toks.append(Token("punct", c, line, col))
            i += 1
            col += 1
            continue
        err(f"unexpected character {c!r}", line, col)
    toks.append(Token("eof", "", line, col))
    return toks


# Binary operator precedence, loosest first.
_PREC_LEVELS = [
    ("||",),
    ("&&",),
    ("==", "!="),
    ("<", "<=", ">", ">="),
    ("+", "-"),
    ("*", "/", "%"),
]


class Parser:
    def __init__(self, toks: list[Token]):
        self.toks = toks
        self.pos = 0

    # -- token plumbing ----------------------------------------------------

    @property
    def cur(self) -> Token:
        return self.toks[self.pos]

    def advance(self) -> Token:
        t = self.cur
        self.pos += 1
        return t

    def at(self, kind: str, text: str | None = None) -> bool:
        t = self.cur
        return t.kind == kind and (text is None or t.text == text)

    def accept(self, kind: str, text: str | None = None) -> Token | None:
        if self.at(kind, text):
            return self.advance()
        return None

    def expect(self, kind: str, text: str | None = None) -> Token:
        if self.at(kind, text):
            return self.advance()
        t = self.cur
        want = text if text is not None else kind
        got = t.text if t.text else t.kind
        raise ParseError(f"expected {want!r}, got {got!r}", t.line, t.col)

    def fail(self, msg: str):
        t = self.cur
        raise ParseError(msg, t.line, t.col)

    # -- grammar -----------------------------------------------------------

    def program(self) -> n.Program:
        funcs = []
        while not self.at("eof"):
            funcs.append(self.function())
        if not funcs:
            self.fail("empty program")
        return n.Program(funcs, line=1, col=1)

    def function(self) -> n.FunctionDef:
        t = self.cur
        if not (self.at("kw", "int") or self.at("kw", "bool") or self.at("kw", "void")):
            self.fail(f"expected a function definition, got {t.text!r}")
        ret = self.advance().text
        name = self.expect("id").text
        self.expect("punct", "(")
        params: list[n.Param] = []
        if self.at("kw", "void") and self.toks[self.pos + 1].text == ")":
            self.advance()  # int main(void)
        elif not self.at("punct", ")"):
            while True:
                pt = self.cur
                if not (pt.kind == "kw" and pt.text in ("int", "bool")):
                    self.fail("expected parameter type 'int' or 'bool'")
                self.advance()
                pname = self.expect("id")
                if self.at("punct", "["):
                    raise SemanticError("array parameters are not supported", pname.line)
                params.append(n.Param(pt.text, pname.text, line=pt.line, col=pt.col))
                if not self.accept("punct", ","):
                    break
        self.expect("punct", ")")
        body = self.braced_body()
        return n.FunctionDef(ret, name, params, body, line=t.line, col=t.col)

    def braced_body(self) -> list[n.Stmt]:
        self.expect("punct", "{")
        out: list[n.Stmt] = []
        while not self.at("punct", "}"):
            if self.at("eof"):
                self.fail("unexpected end of input inside a block")
            out.extend(self.statement())
        self.expect("punct", "}")
        return out

    def body(self) -> list[n.Stmt]:
        """Body of a control statement: braced list, or a single statement."""
        if self.at("punct", "{"):
            return self.braced_body()
        return list(self.statement())

    def statement(self) -> list[n.Stmt]:
        """Parse one source statement; desugaring may yield several nodes."""
        t = self.cur
        if t.kind == "kw" and t.text in ("int", "bool"):
            return self.declaration()
        if self.at("punct", "{"):
            inner = self.braced_body()
            return [n.Block(inner, line=t.line, col=t.col)]
        if self.at("kw", "if"):
            return [self.if_stmt()]
        if self.at("kw", "while"):
            return [self.while_stmt()]
        if self.at("kw", "for"):
            return [self.for_stmt()]
        if self.at("kw", "return"):
            self.advance()
            val = None if self.at("punct", ";") else self.expr()
            self.expect("punct", ";")
            return [n.Return(val, line=t.line, col=t.col)]
        if self.at("kw", "scanf"):
            out = self.scanf_stmt()
            self.expect("punct", ";")
            return out
        if self.at("kw", "printf"):
            out = self.printf_stmt()
            self.expect("punct", ";")
            return out
        if self.at("punct", ";"):
            self.fail("empty statement is not supported")
        stmt = self.expr_item()
        self.expect("punct", ";")
        return [stmt]

    def declaration(self) -> list[n.Stmt]:
        ty = self.advance()
        out: list[n.Stmt] = []
        while True:
            name = self.expect("id")
            size = None
            if self.accept("punct", "["):
                size_tok = self.expect("int")
                size = int(size_tok.text)
                if size < 1:
                    raise SemanticError("array size must be >= 1", size_tok.line)
                self.expect("punct", "]")
                if ty.text != "int":
                    raise SemanticError("only int arrays are supported", name.line)
            out.append(n.VarDecl(ty.text, name.text, size, line=name.line, col=name.col))
            if self.accept("punct", "="):
                if size is not None:
                    raise SemanticError("array initializers are not supported", name.line)
                value = self.expr()
                target = n.VarRef(name.text, line=name.line, col=name.col)
                out.append(n.Assign(target, value, line=name.line, col=name.col))
            if not self.accept("punct", ","):
                break
        self.expect("punct", ";")
        return out

    def if_stmt(self) -> n.If:
        t = self.expect("kw", "if")
        self.expect("punct", "(")
        cond = self.expr()
        self.expect("punct", ")")
        then_body = self.body()
        else_body: list[n.Stmt] = []
        if self.accept("kw", "else"):
            if self.at("kw", "if"):
                else_body = [self.if_stmt()]
            else:
                else_body = self.body()
        return n.If(cond, then_body, else_body, line=t.line, col=t.col)

    def while_stmt(self) -> n.While:
        t = self.expect("kw", "while")
        self.expect("punct", "(")
        cond = self.expr()
        self.expect("punct", ")")
        return n.While(cond, self.body(), line=t.line, col=t.col)

    def for_stmt(self) -> n.For:
        t = self.expect("kw", "for")
        self.expect("punct", "(")
        init = [] if self.at("punct", ";") else self.expr_items()
        self.expect("punct", ";")
        cond = None if self.at("punct", ";") else self.expr()
        self.expect("punct", ";")
        update = [] if self.at("punct", ")") else self.expr_items()
        self.expect("punct", ")")
        return n.For(init, cond, update, self.body(), line=t.line, col=t.col)

    def expr_items(self) -> list[n.Stmt]:
        items = [self.expr_item()]
        while self.accept("punct", ","):
            items.append(self.expr_item())
        return items

    def expr_item(self) -> n.Stmt:
        """One comma-list item: assignment, ++/--, or a call."""
        t = self.cur
        if t.kind == "kw" and t.text in ("scanf", "printf"):
            raise SemanticError(f"{t.text} is not allowed here", t.line)
        if t.kind != "id":
            self.fail(f"expected a statement, got {t.text or t.kind!r}")
        if self.toks[self.pos + 1].text == "(":
            call = self.call_expr()
            return n.CallStmt(call, line=t.line, col=t.col)
        target = self.lvalue()
        op = self.cur
        if self.accept("punct", "="):
            return n.Assign(target, self.expr(), line=t.line, col=t.col)
        if self.accept("punct", "++") or self.accept("punct", "--"):
            one = n.IntLit(1, line=op.line, col=op.col)
            base = _clone_lvalue(target)
            arith = n.Binary("+" if op.text == "++" else "-", base, one,
                             line=op.line, col=op.col)
            return n.Assign(target, arith, line=t.line, col=t.col)
        self.fail("expected '=', '++', or '--'")

    def lvalue(self) -> n.LValue:
        name = self.expect("id")
        if self.accept("punct", "["):
            idx = self.expr()
            self.expect("punct", "]")
            return n.ArrayRef(name.text, idx, line=name.line, col=name.col)
        return n.VarRef(name.text, line=name.line, col=name.col)

    def scanf_stmt(self) -> list[n.Stmt]:
        t = self.expect("kw", "scanf")
        self.expect("punct", "(")
        fmt_tok = self.expect("str")
        conversions = _count_conversions(fmt_tok, "scanf")
        out: list[n.Stmt] = []
        for _ in range(conversions):
            if not self.at("punct", ","):
                raise SemanticError(
                    "scanf argument count does not match its format", t.line)
            self.advance()
            amp = self.expect("punct", "&")
            target = self.lvalue()
            out.append(n.ReadStmt(target, line=amp.line, col=amp.col))
        if not self.at("punct", ")"):
            raise SemanticError("scanf argument count does not match its format",
                                t.line)
        self.expect("punct", ")")
        if not out:
            raise SemanticError("scanf format has no %d conversions", t.line)
        return out

    def printf_stmt(self) -> list[n.Stmt]:
        t = self.expect("kw", "printf")
        self.expect("punct", "(")
        fmt_tok = self.expect("str")
        conversions = _count_conversions(fmt_tok, "printf")
        out: list[n.Stmt] = []
        for _ in range(conversions):
            if not self.at("punct", ","):
                raise SemanticError(
                    "printf argument count does not match its format", t.line)
            self.advance()
            value = self.expr()
            out.append(n.PrintStmt(value, line=t.line, col=t.col))
        if not self.at("punct", ")"):
            raise SemanticError("printf argument count does not match its format",
                                t.line)
        self.expect("punct", ")")
        return out  # a pure-text printf desugars to nothing

    # -- expressions ---------------------------------------------------------

    def expr(self) -> n.Expr:
        return self._binary(0)

    def _binary(self, level: int) -> n.Expr:
        if level == len(_PREC_LEVELS):
            return self.unary()
        left = self._binary(level + 1)
        ops = _PREC_LEVELS[level]
        while self.cur.kind == "punct" and self.cur.text in ops:
            op = self.advance()
            right = self._binary(level + 1)
            left = n.Binary(op.text, left, right, line=op.line, col=op.col)
        return left

    def unary(self) -> n.Expr:
        t = self.cur
        if self.accept("punct", "-"):
            return n.Unary("-", self.unary(), line=t.line, col=t.col)
        if self.accept("punct", "!"):
            return n.Unary("!", self.unary(), line=t.line, col=t.col)
        if self.accept("punct", "+"):
            return self.unary()
        return self.primary()

    def primary(self) -> n.Expr:
        t = self.cur
        if t.kind == "int":
            self.advance()
            return n.IntLit(int(t.text), line=t.line, col=t.col)
        if self.at("kw", "true") or self.at("kw", "false"):
            self.advance()
            return n.BoolLit(t.text == "true", line=t.line, col=t.col)
        if self.accept("punct", "("):
            e = self.expr()
            self.expect("punct", ")")
            return e
        if t.kind == "kw" and t.text in ("scanf", "printf"):
            raise SemanticError(f"{t.text} cannot be used in an expression", t.line)
        if t.kind == "id":
            if self.toks[self.pos + 1].text == "(":
                return self.call_expr()
            return self.lvalue()
        if t.text in ("++", "--"):
            raise SemanticError("prefix ++/-- is not supported", t.line)
        self.fail(f"expected an expression, got {t.text or t.kind!r}")

    def call_expr(self) -> n.Call:
        name = self.expect("id")
        self.expect("punct", "(")
        args: list[n.Expr] = []
        if not self.at("punct", ")"):
            while True:
                args.append(self.expr())
                if not self.accept("punct", ","):
                    break
        self.expect("punct", ")")
        return n.Call(name.text, args, line=name.line, col=name.col)


def _clone_lvalue(lv: n.LValue) -> n.LValue:
    # x++ duplicates the lvalue into the RHS; the copy must be deep so the
    # tree stays a tree (node ids are per occurrence).
    return copy.deepcopy(lv)


def _count_conversions(tok: Token, which: str) -> int:
    """Count %d conversions; reject any other conversion kind."""
    fmt = tok.text
    count = 0
    i = 0
    while i < len(fmt):
        if fmt[i] == "%":
            if i + 1 < len(fmt) and fmt[i + 1] == "d":
                count += 1
                i += 2
                continue
            if i + 1 < len(fmt) and fmt[i + 1] == "%":
                i += 2
                continue
            spec = fmt[i:i + 2] if i + 1 < len(fmt) else "%"
            raise SemanticError(
                f"{which} conversion {spec!r} is not supported (only %d)", tok.line)
        i += 1
    return count


def parse_program(src: str) -> n.Program:
    """Parse MiniC source into a checked Program with node ids assigned."""
    parser = Parser(tokenize(src))
    program = parser.program()
    check_program(program)
    n.assign_node_ids(program)
    return program
