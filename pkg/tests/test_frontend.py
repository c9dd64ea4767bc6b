"""Parser, static checks, printer, and suite-loader tests."""

import pytest
from hypothesis import given, settings

from faultloc.errors import FormatError, IoError, ParseError, SemanticError
from faultloc.frontend import nodes as n
from faultloc.frontend import parse_program, print_program, load_test_suite, shape, walk

from gen_programs import minic_programs


def parse_main(body_src: str) -> n.FunctionDef:
    return parse_program("int main() {\n" + body_src + "\nreturn 0;\n}").main


# -- parsing basics ----------------------------------------------------------


def test_parse_simple_program():
    p = parse_program("""
        int main() {
            int x;
            scanf("%d", &x);
            if (x > 0) {
                printf("%d\\n", x + 1);
            }
            return 0;
        }
    """)
    assert [f.name for f in p.functions] == ["main"]
    body = p.main.body
    assert isinstance(body[0], n.VarDecl) and body[0].name == "x"
    assert isinstance(body[1], n.ReadStmt)
    assert isinstance(body[2], n.If)
    cond = body[2].cond
    assert isinstance(cond, n.Binary) and cond.op == ">"
    assert isinstance(body[2].then_body[0], n.PrintStmt)
    assert isinstance(body[3], n.Return)


def test_scanf_desugars_per_conversion():
    main = parse_main('int a; int b; int c; scanf("%d %d %d", &a, &b, &c);')
    reads = [s for s in main.body if isinstance(s, n.ReadStmt)]
    assert [r.target.name for r in reads] == ["a", "b", "c"]


def test_printf_desugars_per_conversion():
    main = parse_main('int a; printf("%d %d\\n", a, a + 1);')
    prints = [s for s in main.body if isinstance(s, n.PrintStmt)]
    assert len(prints) == 2
    assert isinstance(prints[1].value, n.Binary)


def test_decl_initializer_desugars_to_assignment():
    main = parse_main("int x = 5;")
    decl, assign = main.body[0], main.body[1]
    assert isinstance(decl, n.VarDecl) and decl.size is None
    assert isinstance(assign, n.Assign)
    assert assign.target.name == "x" and assign.value.value == 5


def test_comma_declaration_splits():
    main = parse_main("int a, b = 2, c;")
    kinds = [type(s).__name__ for s in main.body[:4]]
    assert kinds == ["VarDecl", "VarDecl", "Assign", "VarDecl"]


def test_incdec_desugar():
    main = parse_main("int i; i++; i--;")
    plus, minus = main.body[1], main.body[2]
    assert isinstance(plus, n.Assign) and plus.value.op == "+"
    assert isinstance(minus, n.Assign) and minus.value.op == "-"
    assert plus.value.left.name == "i" and plus.value.right.value == 1


def test_for_header_lists():
    main = parse_main("int i; int j; for (i = 0, j = 9; i < j; i++, j--) { j = j; }")
    loop = main.body[2]
    assert isinstance(loop, n.For)
    assert len(loop.init) == 2 and len(loop.update) == 2
    assert isinstance(loop.cond, n.Binary)


def test_dangling_else_binds_inner():
    main = parse_main("int x; if (x > 0) if (x > 1) x = 1; else x = 2;")
    outer = main.body[1]
    assert outer.else_body == []
    inner = outer.then_body[0]
    assert isinstance(inner, n.If) and len(inner.else_body) == 1


def test_precedence_and_unary():
    main = parse_main("int a; int b; a = -a + b * 2 % 3 - (a - b);")
    v = main.body[2].value
    # ((-a) + ((b * 2) % 3)) - (a - b)
    assert v.op == "-" and v.left.op == "+" and v.right.op == "-"
    assert isinstance(v.left.left, n.Unary)
    assert v.left.right.op == "%" and v.left.right.left.op == "*"


def test_logic_precedence():
    main = parse_main("int a; int b; if (a < 1 && b < 2 || !(a == b)) { a = 1; }")
    cond = main.body[2].cond
    assert cond.op == "||" and cond.left.op == "&&"
    assert isinstance(cond.right, n.Unary) and cond.right.op == "!"


def test_node_ids_are_preorder_contiguous():
    p = parse_program("""
        int twice(int k) { return k + k; }
        int main() { int x; scanf("%d", &x); printf("%d\\n", twice(x)); return 0; }
    """)
    ids = [node.node_id for fn in p.functions for node in walk(fn)]
    assert ids == list(range(1, len(ids) + 1))


def test_parse_error_has_position():
    with pytest.raises(ParseError) as exc:
        parse_program("int main() {\n  int x\n  return 0;\n}")
    assert exc.value.line == 3
    assert "expected" in exc.value.message


@pytest.mark.parametrize("src", [
    "int main() { return 0 }",
    "int main() { x = ; }",
    "int main() { if x { } }",
    "int main() { int 3x; }",
    "int main(",
])
def test_parse_errors(src):
    with pytest.raises(ParseError):
        parse_program(src)


# -- static checks -----------------------------------------------------------


@pytest.mark.parametrize("src,needle", [
    ("int main() { break; }", "break"),
    ("int main() { float x; return 0; }", "float"),
    ("int main() { int x; int x; return 0; }", "redeclaration"),
    ("int main() { int x; if (x) { int x; } return 0; }", "redeclaration"),
    ("int main() { y = 1; return 0; }", "undeclared"),
    ("int main() { int a[3]; a = 1; return 0; }", "array"),
    ("int main() { int x; x[0] = 1; return 0; }", "scalar"),
    ("int f(int a[]) { return 0; } int main() { return 0; }", "array parameter"),
    ("int main() { g(); return 0; }", "undefined function"),
    ("int f(int x) { return x; } int main() { f(); return 0; }", "argument"),
    ("int f(int x) { return f(x); } int main() { return 0; }", "recursion"),
    ("int f(int x) { return g(x); } int g(int x) { return f(x); } "
     "int main() { return 0; }", "recursion"),
    ("void f() { return 1; } int main() { return 0; }", "returns a value"),
    ("int f() { return; } int main() { return 0; }", "returns no value"),
    ("void f() { } int main() { int x; x = f(); return 0; }", "void"),
    ("int main(int argc) { return 0; }", "main"),
    ("void main() { }", "main"),
    ("int f() { return 0; }", "no main"),
    ("int main() { int f; int x; return 0; } int f() { return 1; }", "collides"),
    ('int f() { int x; scanf("%d", &x); return x; } int main() { return 0; }',
     "scanf outside main"),
    ('int f() { printf("%d\\n", 1); return 0; } int main() { return 0; }',
     "printf outside main"),
    ('int main() { printf("%s\\n", 1); return 0; }', "%d"),
    ('int main() { int x; scanf("%d %d", &x); return 0; }', "argument count"),
    ('int main() { int x; x = scanf; return 0; }', "scanf"),
    ("int main() { bool b[2]; return 0; }", "int arrays"),
    ("int main() { int a[0]; return 0; }", "size"),
])
def test_semantic_errors(src, needle):
    with pytest.raises(SemanticError) as exc:
        parse_program(src)
    assert needle in str(exc.value)


def test_bool_type_and_literals():
    main = parse_main("bool b; b = true; b = 1 < 2 && false;")
    assert main.body[0].type_name == "bool"
    assert isinstance(main.body[1].value, n.BoolLit)


# -- printer round trip --------------------------------------------------------


ROUND_TRIP_SOURCES = [
    """int main() {
        int f;
        int s;
        int t;
        int m;
        scanf("%d %d %d", &f, &s, &t);
        m = f;
        if (s > m) { m = s; }
        if (t > m) { m = t; }
        printf("%d\\n", m);
        return 0;
    }""",
    """int helper(int a, bool b) {
        if (b) { return -a; }
        return a;
    }
    int main() {
        int x;
        scanf("%d", &x);
        printf("%d\\n", helper(x, x < 0));
        return 0;
    }""",
    """int main() {
        int i;
        int s;
        int a[5];
        s = 0;
        for (i = 0; i < 5; i++) {
            scanf("%d", &a[i]);
        }
        while (i > 0) {
            i--;
            s = s + a[i] * (i % 2 == 0);
        }
        printf("%d\\n", s - -1);
        return 0;
    }""",
]


@pytest.mark.parametrize("src", ROUND_TRIP_SOURCES)
def test_round_trip_fixed(src):
    p = parse_program(src)
    text = print_program(p)
    assert shape(parse_program(text)) == shape(p)
    # printing is canonical: a second print is a fixpoint
    assert print_program(parse_program(text)) == text


@settings(max_examples=60, deadline=None)
@given(minic_programs())
def test_round_trip_random(program):
    text = print_program(program)
    assert shape(parse_program(text)) == shape(program)


# -- suite loader ---------------------------------------------------------------


def write_suite(tmp_path, cases):
    for name, content in cases.items():
        (tmp_path / name).write_text(content)
    return tmp_path


def test_load_suite(tmp_path):
    write_suite(tmp_path, {
        "t1.in": "1 2 3\n", "t1.out": "3\n",
        "t2.in": "6\n2 1", "t2.out": "6\n",
        "t10.in": "", "t10.out": "-4 7\n",
    })
    suite = load_test_suite(tmp_path)
    assert [t.test_id for t in suite.tests] == ["t1", "t2", "t10"]
    assert suite.tests[0].inputs == (1, 2, 3)
    assert suite.tests[1].inputs == (6, 2, 1)
    assert suite.tests[2].inputs == ()
    assert suite.tests[2].expected == (-4, 7)


def test_missing_dir_is_io_error(tmp_path):
    with pytest.raises(IoError):
        load_test_suite(tmp_path / "nope")


def test_unpaired_file_is_format_error(tmp_path):
    write_suite(tmp_path, {"t1.in": "1", "t1.out": "1", "t2.in": "2"})
    with pytest.raises(FormatError):
        load_test_suite(tmp_path)


def test_empty_directory_is_empty_suite(tmp_path):
    write_suite(tmp_path, {"readme.txt": "hi"})
    assert len(load_test_suite(tmp_path)) == 0


def test_bad_token_is_format_error(tmp_path):
    write_suite(tmp_path, {"t1.in": "1 two", "t1.out": "1"})
    with pytest.raises(FormatError):
        load_test_suite(tmp_path)
