"""MiniC frontend: AST, parser, static checks, printer, test suites."""

from .nodes import (
    ArrayRef, Assign, Binary, Block, BoolLit, Call, CallStmt, Expr, For,
    FunctionDef, If, IntLit, Node, Param, PrintStmt, Program, ReadStmt,
    Return, Stmt, Unary, VarDecl, VarRef, While,
    assign_node_ids, children, node_index, shape, walk,
)
from .parser import parse_program, tokenize
from .printer import Printer, print_program
from .suite import TestCase, TestSuite, load_test_suite

__all__ = [
    "ArrayRef", "Assign", "Binary", "Block", "BoolLit", "Call", "CallStmt",
    "Expr", "For", "FunctionDef", "If", "IntLit", "Node", "Param",
    "PrintStmt", "Program", "ReadStmt", "Return", "Stmt", "Unary",
    "VarDecl", "VarRef", "While",
    "assign_node_ids", "children", "node_index", "shape", "walk",
    "parse_program", "tokenize", "Printer", "print_program",
    "TestCase", "TestSuite", "load_test_suite",
]
