"""Static checks that close the MiniC subset.

Rules enforced here (all raise SemanticError):

- exactly one ``int main()`` taking no parameters;
- function names unique, variables declared before use, no shadowing
  (a name is declared at most once per function, parameters included),
  variable names may not collide with function names;
- arrays are local, indexed with expressions, never used bare, never
  initialized at declaration, never parameters;
- calls hit a defined function with matching arity; the call graph is
  acyclic (no recursion); void functions never appear in expressions;
  value returns match the declared return type (void vs non-void);
- scanf/printf shapes were already normalized by the parser.
"""

from __future__ import annotations

from ..errors import SemanticError
from . import nodes as n


def check_program(program: n.Program) -> None:
    names = [f.name for f in program.functions]
    dupes = {x for x in names if names.count(x) > 1}
    if dupes:
        raise SemanticError(f"duplicate function definition: {sorted(dupes)[0]}")
    mains = [f for f in program.functions if f.name == "main"]
    if not mains:
        raise SemanticError("no main function")
    main = mains[0]
    if main.return_type != "int" or main.params:
        raise SemanticError("main must be declared as 'int main()'", main.line)
    fn_map = {f.name: f for f in program.functions}
    for fn in program.functions:
        _check_function(fn, fn_map)
    _check_no_recursion(program, fn_map)


class _Scope:
    """Single flat scope per function (shadowing is forbidden)."""

    def __init__(self, fn: n.FunctionDef, fn_names: set[str]):
        self.fn = fn
        self.fn_names = fn_names
        self.kinds: dict[str, str] = {}  # name -> 'scalar' | 'array'

    def declare(self, name: str, kind: str, line: int):
        if name in self.kinds:
            raise SemanticError(
                f"redeclaration of '{name}' (shadowing is not supported)", line)
        if name in self.fn_names:
            raise SemanticError(
                f"variable '{name}' collides with a function name", line)
        self.kinds[name] = kind

    def use(self, name: str, kind: str, line: int):
        declared = self.kinds.get(name)
        if declared is None:
            raise SemanticError(f"use of undeclared variable '{name}'", line)
        if declared != kind:
            what = "an array" if declared == "array" else "a scalar"
            raise SemanticError(f"'{name}' is {what}", line)


def _check_function(fn: n.FunctionDef, fn_map: dict[str, n.FunctionDef]) -> None:
    scope = _Scope(fn, set(fn_map))
    seen_params = set()
    for p in fn.params:
        if p.name in seen_params:
            raise SemanticError(f"duplicate parameter '{p.name}'", fn.line)
        seen_params.add(p.name)
        scope.declare(p.name, "scalar", p.line)
    _check_body(fn.body, scope, fn_map)


def _check_body(body: list[n.Stmt], scope: _Scope, fn_map) -> None:
    for s in body:
        _check_stmt(s, scope, fn_map)


def _check_stmt(s: n.Stmt, scope: _Scope, fn_map) -> None:
    if isinstance(s, n.VarDecl):
        scope.declare(s.name, "array" if s.size is not None else "scalar", s.line)
    elif isinstance(s, n.Assign):
        _check_lvalue(s.target, scope, fn_map)
        _check_expr(s.value, scope, fn_map)
    elif isinstance(s, n.ReadStmt):
        if scope.fn.name != "main":
            raise SemanticError("scanf outside main is not supported", s.line)
        _check_lvalue(s.target, scope, fn_map)
    elif isinstance(s, n.PrintStmt):
        if scope.fn.name != "main":
            raise SemanticError("printf outside main is not supported", s.line)
        _check_expr(s.value, scope, fn_map)
    elif isinstance(s, n.CallStmt):
        _check_call(s.call, scope, fn_map, as_stmt=True)
    elif isinstance(s, n.If):
        _check_expr(s.cond, scope, fn_map)
        _check_body(s.then_body, scope, fn_map)
        _check_body(s.else_body, scope, fn_map)
    elif isinstance(s, n.While):
        _check_expr(s.cond, scope, fn_map)
        _check_body(s.body, scope, fn_map)
    elif isinstance(s, n.For):
        for item in s.init:
            _check_stmt(item, scope, fn_map)
        if s.cond is not None:
            _check_expr(s.cond, scope, fn_map)
        for item in s.update:
            _check_stmt(item, scope, fn_map)
        _check_body(s.body, scope, fn_map)
    elif isinstance(s, n.Block):
        _check_body(s.body, scope, fn_map)
    elif isinstance(s, n.Return):
        if scope.fn.return_type == "void":
            if s.value is not None:
                raise SemanticError(
                    f"void function '{scope.fn.name}' returns a value", s.line)
        else:
            if s.value is None:
                raise SemanticError(
                    f"non-void function '{scope.fn.name}' returns no value", s.line)
            _check_expr(s.value, scope, fn_map)
    else:
        raise SemanticError(f"unsupported statement {type(s).__name__}", s.line)


def _check_lvalue(lv: n.LValue, scope: _Scope, fn_map) -> None:
    if isinstance(lv, n.VarRef):
        scope.use(lv.name, "scalar", lv.line)
    else:
        scope.use(lv.name, "array", lv.line)
        _check_expr(lv.index, scope, fn_map)


def _check_expr(e: n.Expr, scope: _Scope, fn_map) -> None:
    if isinstance(e, (n.IntLit, n.BoolLit)):
        return
    if isinstance(e, n.VarRef):
        scope.use(e.name, "scalar", e.line)
    elif isinstance(e, n.ArrayRef):
        scope.use(e.name, "array", e.line)
        _check_expr(e.index, scope, fn_map)
    elif isinstance(e, n.Unary):
        _check_expr(e.operand, scope, fn_map)
    elif isinstance(e, n.Binary):
        _check_expr(e.left, scope, fn_map)
        _check_expr(e.right, scope, fn_map)
    elif isinstance(e, n.Call):
        _check_call(e, scope, fn_map, as_stmt=False)
    else:
        raise SemanticError(f"unsupported expression {type(e).__name__}", e.line)


def _check_call(call: n.Call, scope: _Scope, fn_map, as_stmt: bool) -> None:
    fn = fn_map.get(call.name)
    if fn is None:
        raise SemanticError(f"call to undefined function '{call.name}'", call.line)
    if len(call.args) != len(fn.params):
        raise SemanticError(
            f"'{call.name}' takes {len(fn.params)} argument(s), got {len(call.args)}",
            call.line)
    if not as_stmt and fn.return_type == "void":
        raise SemanticError(
            f"void function '{call.name}' used in an expression", call.line)
    for a in call.args:
        _check_expr(a, scope, fn_map)


def _check_no_recursion(program: n.Program, fn_map) -> None:
    callees: dict[str, set[str]] = {}
    for fn in program.functions:
        calls = set()
        for node in n.walk(fn):
            if isinstance(node, n.Call):
                calls.add(node.name)
        callees[fn.name] = calls

    state: dict[str, int] = {}  # 0 visiting, 1 done

    def visit(name: str, chain: list[str]):
        if state.get(name) == 1:
            return
        if state.get(name) == 0:
            cycle = " -> ".join(chain[chain.index(name):] + [name])
            raise SemanticError(f"recursion is not supported ({cycle})")
        state[name] = 0
        for callee in sorted(callees.get(name, ())):
            visit(callee, chain + [name])
        state[name] = 1

    for fn in program.functions:
        visit(fn.name, [])
