"""Abstract syntax for MiniC, the bounded C subset this package analyzes.

MiniC covers: ``int``/``bool`` scalars, fixed-size int arrays (local to a
function body), helper functions with scalar value parameters and no
recursion, ``if``/``else``, ``while``, ``for``, ``return``, assignment,
``scanf``/``printf`` restricted to ``%d`` conversions, and the usual int
expressions (``+ - * / %``, comparisons, ``&& || !``, unary minus).

The parser performs a few desugarings, so downstream passes never see the
sugared forms:

- a ``scanf``/``printf`` call with k conversions becomes k consecutive
  :class:`ReadStmt`/:class:`PrintStmt` nodes (one per conversion);
- ``int x = e;`` becomes ``int x;`` followed by ``x = e;`` (the assignment
  is a relaxable statement, the declaration is not);
- comma declarations split into one :class:`VarDecl` per declarator;
- ``x++`` / ``x--`` become ``x = x + 1`` / ``x = x - 1``.

Every node carries a stable ``node_id`` assigned by
:func:`assign_node_ids` in source order (pre-order over the function
list, starting at 1). Ids survive unrolling and instrumentation, which
is what lets diagnoses point back at source nodes. ``line``/``col`` are
1-based source positions; desugared nodes inherit the position of the
construct they came from.

:func:`shape` gives structural equality modulo ``node_id``/``line``/``col``,
which is the contract the printer round-trip test checks.
"""

from __future__ import annotations

from dataclasses import dataclass, field, fields
from typing import Iterator, Optional, Union

# --------------------------------------------------------------------------
# Base
# --------------------------------------------------------------------------


@dataclass
class Node:
    line: int = field(default=0, kw_only=True)
    col: int = field(default=0, kw_only=True)
    node_id: int = field(default=0, kw_only=True)


class Expr(Node):
    """Marker base for expression nodes."""


class Stmt(Node):
    """Marker base for statement nodes."""


# --------------------------------------------------------------------------
# Expressions
# --------------------------------------------------------------------------


@dataclass
class IntLit(Expr):
    value: int


@dataclass
class BoolLit(Expr):
    value: bool


@dataclass
class VarRef(Expr):
    name: str


@dataclass
class ArrayRef(Expr):
    name: str
    index: Expr


@dataclass
class Unary(Expr):
    """op in {'-', '!'}; unary '+' is dropped at parse time."""

    op: str
    operand: Expr


@dataclass
class Binary(Expr):
    """op in {'+','-','*','/','%','<','<=','>','>=','==','!=','&&','||'}."""

    op: str
    left: Expr
    right: Expr


@dataclass
class Call(Expr):
    """Call to a user-defined helper function. scanf/printf never appear
    here; they are desugared into ReadStmt/PrintStmt."""

    name: str
    args: list[Expr]


# --------------------------------------------------------------------------
# Statements
# --------------------------------------------------------------------------

LValue = Union[VarRef, ArrayRef]


@dataclass
class VarDecl(Stmt):
    """Declaration only; initializers are desugared into a following Assign.
    size is None for scalars, the fixed cell count for arrays."""

    type_name: str  # 'int' | 'bool'
    name: str
    size: Optional[int] = None


@dataclass
class Assign(Stmt):
    target: LValue
    value: Expr


@dataclass
class ReadStmt(Stmt):
    """One %d conversion of a scanf: consumes the next test input into
    target."""

    target: LValue


@dataclass
class PrintStmt(Stmt):
    """One %d conversion of a printf: appends the value to the output
    sequence."""

    value: Expr


@dataclass
class CallStmt(Stmt):
    call: Call


@dataclass
class If(Stmt):
    cond: Expr
    then_body: list[Stmt]
    else_body: list[Stmt] = field(default_factory=list)


@dataclass
class While(Stmt):
    cond: Expr
    body: list[Stmt]


@dataclass
class For(Stmt):
    """init/update hold Assign or CallStmt items (the comma-list slots).
    cond is None for `for (;;)`-style headers with an empty condition."""

    init: list[Stmt]
    cond: Optional[Expr]
    update: list[Stmt]
    body: list[Stmt]


@dataclass
class Block(Stmt):
    """A brace-grouped statement list. Grouping only: MiniC forbids
    shadowing, so blocks do not open scopes."""

    body: list[Stmt]


@dataclass
class Return(Stmt):
    value: Optional[Expr] = None


# --------------------------------------------------------------------------
# Top level
# --------------------------------------------------------------------------


@dataclass
class Param(Node):
    type_name: str  # 'int' | 'bool'
    name: str


@dataclass
class FunctionDef(Node):
    return_type: str  # 'int' | 'bool' | 'void'
    name: str
    params: list[Param]
    body: list[Stmt]


@dataclass
class Program(Node):
    """functions[0..]; exactly one is named main. main comes wherever the
    source put it; lookup is by name."""

    functions: list[FunctionDef]

    def function(self, name: str) -> FunctionDef:
        for f in self.functions:
            if f.name == name:
                return f
        raise KeyError(name)

    @property
    def main(self) -> FunctionDef:
        return self.function("main")


# --------------------------------------------------------------------------
# Traversal and identity
# --------------------------------------------------------------------------


def children(node: Node) -> Iterator[Node]:
    """Yield direct child nodes in source order (field order)."""
    for f in fields(node):
        if f.name in ("line", "col", "node_id"):
            continue
        v = getattr(node, f.name)
        if isinstance(v, Node):
            yield v
        elif isinstance(v, list):
            for item in v:
                if isinstance(item, Node):
                    yield item


def walk(node: Node) -> Iterator[Node]:
    """Pre-order traversal including node itself."""
    yield node
    for c in children(node):
        yield from walk(c)


def assign_node_ids(program: Program) -> int:
    """Assign pre-order ids starting at 1 over the function list.

    The Program node itself keeps id 0 (it is a container, not a source
    construct). Returns the number of ids assigned.
    """
    n = 0
    for fn in program.functions:
        for node in walk(fn):
            n += 1
            node.node_id = n
    program.node_id = 0
    return n


def shape(node: Node) -> tuple:
    """Structure of a node as nested tuples, ignoring ids and positions.

    Two parses are the same program iff their shapes are equal; the
    printer round-trip invariant is stated in terms of this.
    """
    parts: list[object] = [type(node).__name__]
    for f in fields(node):
        if f.name in ("line", "col", "node_id"):
            continue
        v = getattr(node, f.name)
        if isinstance(v, Node):
            parts.append(shape(v))
        elif isinstance(v, list):
            parts.append(tuple(shape(item) if isinstance(item, Node) else item for item in v))
        else:
            parts.append(v)
    return tuple(parts)


def node_index(program: Program) -> dict[int, Node]:
    """node_id -> node for every id-bearing node."""
    out: dict[int, Node] = {}
    for fn in program.functions:
        for node in walk(fn):
            if node.node_id:
                out[node.node_id] = node
    return out
