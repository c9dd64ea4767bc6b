"""Brute-force oracles for the solver test suites.

Everything here works by full truth-table enumeration with numpy, with
no code shared with the CDCL solver or the MaxSAT layer: rows are the
2^n assignments, a variable's column is a bit slice of the row index.
Small n only, by design.
"""

from __future__ import annotations

from itertools import combinations

import numpy as np


def _lit_cols(num_vars: int, lit: int, rows: np.ndarray) -> np.ndarray:
    v = abs(lit)
    col = (rows >> (v - 1)) & 1
    return col == 1 if lit > 0 else col == 0


def _clause_mask(num_vars: int, clause, rows: np.ndarray) -> np.ndarray:
    out = np.zeros(len(rows), dtype=bool)
    for lit in clause:
        out |= _lit_cols(num_vars, lit, rows)
    return out


def tt_models(num_vars: int, clauses, assumptions=()) -> np.ndarray:
    """Boolean mask over all 2^num_vars assignments satisfying clauses
    and unit assumptions."""
    rows = np.arange(1 << num_vars, dtype=np.int64)
    ok = np.ones(len(rows), dtype=bool)
    for cl in clauses:
        ok &= _clause_mask(num_vars, cl, rows)
    for lit in assumptions:
        ok &= _lit_cols(num_vars, lit, rows)
    return ok


def tt_satisfiable(num_vars: int, clauses, assumptions=()) -> bool:
    return bool(tt_models(num_vars, clauses, assumptions).any())


def tt_maxsat(num_vars: int, hard, soft):
    """(optimum cost, set of optimum falsified-index frozensets), or
    (None, None) when the hard clauses are unsatisfiable."""
    rows = np.arange(1 << num_vars, dtype=np.int64)
    feasible = np.ones(len(rows), dtype=bool)
    for cl in hard:
        feasible &= _clause_mask(num_vars, cl, rows)
    if not feasible.any():
        return None, None
    cost = np.zeros(len(rows), dtype=np.int64)
    soft_sat = []
    for cl, w in soft:
        mask = _clause_mask(num_vars, cl, rows)
        soft_sat.append(mask)
        cost += np.where(mask, 0, w)
    best = int(cost[feasible].min())
    optima = set()
    for r in np.nonzero(feasible & (cost == best))[0]:
        optima.add(frozenset(
            i for i, mask in enumerate(soft_sat) if not mask[r]))
    return best, optima


def tt_mcses(num_vars: int, hard, soft):
    """All minimal correction subsets as {(frozenset, cost)}.

    F is an MCS iff hard plus the softs outside F is satisfiable while
    putting back any single member of F is not.
    """
    rows = np.arange(1 << num_vars, dtype=np.int64)
    hard_mask = np.ones(len(rows), dtype=bool)
    for cl in hard:
        hard_mask &= _clause_mask(num_vars, cl, rows)
    soft_sat = [_clause_mask(num_vars, cl, rows) for cl, _ in soft]
    out = set()
    n = len(soft)
    for k in range(1, n + 1):
        for combo in combinations(range(n), k):
            removed = set(combo)
            mask = hard_mask.copy()
            for i in range(n):
                if i not in removed:
                    mask &= soft_sat[i]
            if not mask.any():
                continue
            if any((mask & soft_sat[c]).any() for c in removed):
                continue
            cost = sum(soft[i][1] for i in removed)
            out.add((frozenset(removed), cost))
    return out


def random_3cnf(rng, num_vars: int, ratio: float = 3.0):
    """Random 3-CNF at the given clause/variable ratio."""
    m = max(1, round(ratio * num_vars))
    clauses = []
    for _ in range(m):
        vs = rng.sample(range(1, num_vars + 1), k=min(3, num_vars))
        clauses.append(tuple(v if rng.random() < 0.5 else -v for v in vs))
    return clauses


def random_wcnf_parts(rng, num_vars: int, num_hard: int, num_soft: int,
                      max_weight: int = 9):
    hard = []
    for _ in range(num_hard):
        k = rng.randint(1, 3)
        vs = rng.sample(range(1, num_vars + 1), k=min(k, num_vars))
        hard.append(tuple(v if rng.random() < 0.5 else -v for v in vs))
    soft = []
    for _ in range(num_soft):
        k = rng.randint(1, 2)
        vs = rng.sample(range(1, num_vars + 1), k=min(k, num_vars))
        cl = tuple(v if rng.random() < 0.5 else -v for v in vs)
        soft.append((cl, rng.randint(1, max_weight)))
    return hard, soft
