"""DIMACS CNF / WCNF reading and writing.

CNF: `p cnf VARS CLAUSES` header, then zero-terminated literal runs.
WCNF: the classic weighted header `p wcnf VARS CLAUSES TOP`; every
clause line starts with its weight, and weight >= TOP marks it hard.
Comment lines start with `c`. Readers reject literals outside the
declared variable range and clause-count mismatches.
"""

from __future__ import annotations

from typing import TextIO

from ..errors import FormatError
from ..encode.formulas import CnfFormula, Wcnf


def _tokens(fp: TextIO):
    for raw in fp:
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        yield from line.split()


def _int(tok: str) -> int:
    try:
        return int(tok)
    except ValueError:
        raise FormatError(f"bad DIMACS token {tok!r}") from None


def write_cnf(cnf: CnfFormula, fp: TextIO) -> None:
    fp.write(f"p cnf {cnf.num_vars} {len(cnf.clauses)}\n")
    for cl in cnf.clauses:
        fp.write(" ".join(str(l) for l in cl) + " 0\n")


def read_cnf(fp: TextIO) -> CnfFormula:
    toks = _tokens(fp)
    head = list(next(toks, None) for _ in range(4))
    if head[:2] != ["p", "cnf"] or None in head:
        raise FormatError("missing DIMACS header 'p cnf VARS CLAUSES'")
    num_vars, num_clauses = _int(head[2]), _int(head[3])
    clauses = []
    cur: list[int] = []
    for tok in toks:
        lit = _int(tok)
        if lit == 0:
            if not cur:
                raise FormatError("empty clause in CNF input")
            clauses.append(tuple(cur))
            cur = []
        else:
            if abs(lit) > num_vars:
                raise FormatError(f"literal {lit} exceeds declared {num_vars} vars")
            cur.append(lit)
    if cur:
        raise FormatError("unterminated clause at end of CNF input")
    if len(clauses) != num_clauses:
        raise FormatError(
            f"header declares {num_clauses} clauses, found {len(clauses)}")
    return CnfFormula(num_vars=num_vars, clauses=clauses)


def write_wcnf(w: Wcnf, fp: TextIO) -> None:
    top = w.top
    fp.write(f"p wcnf {w.num_vars} {len(w.hard) + len(w.soft)} {top}\n")
    for cl in w.hard:
        fp.write(f"{top} " + " ".join(str(l) for l in cl) + " 0\n")
    for cl, wt in w.soft:
        fp.write(f"{wt} " + " ".join(str(l) for l in cl) + " 0\n")


def read_wcnf(fp: TextIO) -> Wcnf:
    toks = _tokens(fp)
    head = list(next(toks, None) for _ in range(5))
    if head[:2] != ["p", "wcnf"] or None in head:
        raise FormatError("missing DIMACS header 'p wcnf VARS CLAUSES TOP'")
    num_vars, num_clauses, top = _int(head[2]), _int(head[3]), _int(head[4])
    if top < 1:
        raise FormatError("WCNF top weight must be positive")
    hard = []
    soft = []
    cur: list[int] = []
    weight = None
    for tok in toks:
        val = _int(tok)
        if weight is None:
            if val < 1:
                raise FormatError(f"clause weight must be positive, got {val}")
            weight = val
            continue
        if val == 0:
            if not cur:
                raise FormatError("empty clause in WCNF input")
            if weight >= top:
                hard.append(tuple(cur))
            else:
                soft.append((tuple(cur), weight))
            cur = []
            weight = None
        else:
            if abs(val) > num_vars:
                raise FormatError(f"literal {val} exceeds declared {num_vars} vars")
            cur.append(val)
    if cur or weight is not None:
        raise FormatError("unterminated clause at end of WCNF input")
    if len(hard) + len(soft) != num_clauses:
        raise FormatError(
            f"header declares {num_clauses} clauses, found {len(hard) + len(soft)}")
    return Wcnf(num_vars=num_vars, hard=hard, soft=soft)
