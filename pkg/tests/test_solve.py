"""SAT solver, MaxSAT, enumerators, and DIMACS: differential tests
against the truth-table oracles plus pinned contract cases."""

import io
import json
import os
import random
import subprocess
import sys

import pytest

from faultloc.encode.formulas import CnfFormula, Wcnf
from faultloc.errors import FormatError, HardUnsatError, ResourceError
from faultloc.solve import (SatSolver, enumerate_mcses,
                            enumerate_optimal_solutions, maxsat_optimum,
                            read_cnf, read_wcnf, sat_solve, write_cnf,
                            write_wcnf)

from oracles import (random_3cnf, random_wcnf_parts, tt_maxsat, tt_mcses,
                     tt_satisfiable)


def cnf(num_vars, clauses):
    return CnfFormula(num_vars=num_vars, clauses=[tuple(c) for c in clauses])


def model_satisfies(model, clauses):
    def holds(lit):
        t = model[abs(lit)] == 1
        return t if lit > 0 else not t

    return all(any(holds(l) for l in cl) for cl in clauses)


# --- plain SAT ---------------------------------------------------------


def test_sat_basic():
    res = sat_solve(cnf(2, [(1, 2), (-1,)]))
    assert res.status == "sat"
    assert not res.true(1) and res.true(2)


def test_unsat_basic():
    res = sat_solve(cnf(1, [(1,), (-1,)]))
    assert res.status == "unsat"
    assert res.core == frozenset()


def test_empty_formula_and_free_vars():
    res = sat_solve(cnf(3, []))
    assert res.status == "sat"  # every var decided somehow
    res = sat_solve(cnf(3, [(2,)]))
    assert res.status == "sat" and res.true(2)


def test_tautology_and_duplicates_ignored():
    s = SatSolver()
    s.add_clause((1, -1))  # dropped entirely
    s.add_clause((2, 2, 2))
    res = s.solve()
    assert res.status == "sat" and res.true(2)


def test_random_3cnf_vs_truth_table():
    rng = random.Random(1001)
    for trial in range(100):
        n = rng.randint(5, 20)
        clauses = random_3cnf(rng, n, ratio=3.0)
        expect = tt_satisfiable(n, clauses)
        res = sat_solve(cnf(n, clauses))
        assert (res.status == "sat") == expect, f"trial {trial} (n={n})"
        if res.status == "sat":
            assert model_satisfies(res.model, clauses)


def test_assumptions_vs_truth_table_and_core():
    rng = random.Random(2002)
    for trial in range(80):
        n = rng.randint(4, 14)
        clauses = random_3cnf(rng, n, ratio=2.5)
        k = rng.randint(1, min(5, n))
        avars = rng.sample(range(1, n + 1), k=k)
        assumps = tuple(v if rng.random() < 0.5 else -v for v in avars)
        expect = tt_satisfiable(n, clauses, assumps)
        res = sat_solve(cnf(n, clauses), assumptions=assumps)
        assert (res.status == "sat") == expect, f"trial {trial}"
        if res.status == "sat":
            assert model_satisfies(res.model, clauses)
            assert all(res.holds(a) for a in assumps)
        else:
            assert res.core <= set(assumps)
            # the reported core itself suffices for unsatisfiability
            assert not tt_satisfiable(n, clauses, tuple(res.core))


def test_core_is_subset_pinned():
    # x1 -> x2, x2 -> -x3; assuming x1, x3, x4: {x1, x3} already conflicts
    clauses = [(-1, 2), (-2, -3)]
    res = sat_solve(cnf(4, clauses), assumptions=(1, 3, 4))
    assert res.status == "unsat"
    assert res.core <= {1, 3, 4}
    assert not tt_satisfiable(4, clauses, tuple(res.core))


def test_incremental_add_between_solves():
    s = SatSolver()
    s.add_clause((1, 2))
    assert s.solve().status == "sat"
    s.add_clause((-1,))
    res = s.solve()
    assert res.status == "sat" and res.true(2)
    s.add_clause((-2,))
    assert s.solve().status == "unsat"
    assert not s.ok
    # once unsatisfiable, it stays that way
    assert s.solve().status == "unsat"


def test_incremental_assumption_reuse():
    s = SatSolver()
    s.add_clause((-1, 2))
    s.add_clause((-2, 3))
    assert s.solve(assumptions=(1,)).status == "sat"
    assert s.solve(assumptions=(1, -3)).status == "unsat"
    assert s.solve(assumptions=(1,)).status == "sat"  # still usable after


def _pigeonhole(pigeons, holes):
    def var(i, j):
        return (i - 1) * holes + j

    clauses = [tuple(var(i, j) for j in range(1, holes + 1))
               for i in range(1, pigeons + 1)]
    for j in range(1, holes + 1):
        for i1 in range(1, pigeons + 1):
            for i2 in range(i1 + 1, pigeons + 1):
                clauses.append((-var(i1, j), -var(i2, j)))
    return cnf(pigeons * holes, clauses)


def test_pigeonhole_unsat():
    assert sat_solve(_pigeonhole(6, 5)).status == "unsat"


def test_conflict_budget():
    f = _pigeonhole(7, 6)
    s = SatSolver()
    s.add_clauses(f.clauses)
    res = s.solve(conflict_budget=3)
    assert res.status == "budget"
    assert res.stats["conflicts"] <= 3
    with pytest.raises(ResourceError):
        sat_solve(f, conflict_budget=3)
    # budget exhaustion leaves the solver reusable
    assert s.solve().status == "unsat"


def test_seeded_randomization_still_correct():
    rng = random.Random(3003)
    for trial in range(20):
        n = rng.randint(5, 12)
        clauses = random_3cnf(rng, n)
        expect = tt_satisfiable(n, clauses)
        for seed in (0, 7, 12345):
            res = sat_solve(cnf(n, clauses), seed=seed)
            assert (res.status == "sat") == expect


def test_determinism_same_seed():
    rng = random.Random(4004)
    clauses = random_3cnf(rng, 14, ratio=3.2)
    runs = []
    for _ in range(2):
        res = sat_solve(cnf(14, clauses), seed=5)
        runs.append((res.status, None if res.model is None
                     else res.model.tobytes(), res.stats["conflicts"]))
    assert runs[0] == runs[1]


def test_stats_present():
    res = sat_solve(cnf(2, [(1, 2)]))
    for key in ("conflicts", "decisions", "propagations", "restarts", "jit"):
        assert key in res.stats


# --- MaxSAT ------------------------------------------------------------


def wcnf(num_vars, hard, soft):
    return Wcnf(num_vars=num_vars, hard=[tuple(c) for c in hard],
                soft=[(tuple(c), w) for c, w in soft])


def test_maxsat_weights_force_choice():
    sol = maxsat_optimum(wcnf(2, [(1, 2)], [((-1,), 1), ((-2,), 2)]))
    assert sol.cost == 1
    assert sol.falsified == {0}


def test_maxsat_all_satisfiable():
    sol = maxsat_optimum(wcnf(2, [(1,)], [((1,), 3), ((2, -1), 1)]))
    assert sol.cost == 0 and sol.falsified == frozenset()


def test_maxsat_no_softs():
    sol = maxsat_optimum(wcnf(2, [(1, 2), (-1,)], []))
    assert sol.cost == 0


def test_maxsat_hard_unsat():
    with pytest.raises(HardUnsatError):
        maxsat_optimum(wcnf(1, [(1,), (-1,)], [((1,), 1)]))


def test_maxsat_contradictory_units():
    sol = maxsat_optimum(wcnf(1, [], [((1,), 2), ((-1,), 3)]))
    assert sol.cost == 2 and sol.falsified == {0}


def test_maxsat_random_vs_exhaustive():
    rng = random.Random(5005)
    for trial in range(50):
        n = rng.randint(3, 18)
        hard, soft = random_wcnf_parts(rng, n, rng.randint(0, 6),
                                       rng.randint(1, 12))
        best, _ = tt_maxsat(n, hard, soft)
        w = wcnf(n, hard, soft)
        if best is None:
            with pytest.raises(HardUnsatError):
                maxsat_optimum(w)
        else:
            sol = maxsat_optimum(w)
            assert sol.cost == best, f"trial {trial}"


def test_enumerate_optimal_pinned():
    w = wcnf(2, [(1, 2)], [((-1,), 1), ((-2,), 1)])
    sets = enumerate_optimal_solutions(w, 1)
    assert sorted(sets, key=sorted) == [frozenset({0}), frozenset({1})]
    w = wcnf(2, [(1, 2)], [((-1,), 1), ((-2,), 2)])
    assert enumerate_optimal_solutions(w, 1) == [frozenset({0})]


def test_enumerate_optimal_cost_zero():
    w = wcnf(1, [], [((1,), 1)])
    assert enumerate_optimal_solutions(w, 0) == [frozenset()]


def test_enumerate_optimal_random_vs_exhaustive():
    rng = random.Random(6006)
    for trial in range(40):
        n = rng.randint(3, 12)
        hard, soft = random_wcnf_parts(rng, n, rng.randint(0, 5),
                                       rng.randint(1, 8))
        best, optima = tt_maxsat(n, hard, soft)
        if best is None or best == 0:
            continue
        got = enumerate_optimal_solutions(wcnf(n, hard, soft), best)
        assert set(got) == optima, f"trial {trial}"
        assert len(got) == len(set(got))


def test_enumerate_mcses_pinned():
    w = wcnf(2, [(1, 2)], [((-1,), 1), ((-2,), 1)])
    out = enumerate_mcses(w)
    assert {(f, c) for f, c in out} == {(frozenset({0}), 1),
                                        (frozenset({1}), 1)}


def test_enumerate_mcses_satisfiable_softs():
    w = wcnf(2, [(1,)], [((1,), 1), ((2,), 4)])
    assert enumerate_mcses(w) == []


def test_enumerate_mcses_limit():
    w = wcnf(3, [(1, 2, 3)], [((-1,), 1), ((-2,), 1), ((-3,), 1)])
    out = enumerate_mcses(w, limit=2)
    assert len(out) == 2


def test_enumerate_mcses_random_vs_exhaustive():
    rng = random.Random(7007)
    for trial in range(35):
        n = rng.randint(3, 10)
        hard, soft = random_wcnf_parts(rng, n, rng.randint(0, 4),
                                       rng.randint(1, 7))
        if tt_maxsat(n, hard, soft)[0] is None:
            continue
        expect = tt_mcses(n, hard, soft)
        got = enumerate_mcses(wcnf(n, hard, soft))
        assert {(f, c) for f, c in got} == expect, f"trial {trial}"
        costs = [c for _, c in got]
        assert costs == sorted(costs)


def test_maxsat_determinism():
    rng = random.Random(8008)
    hard, soft = random_wcnf_parts(rng, 12, 4, 9)
    w = wcnf(12, hard, soft)
    a = maxsat_optimum(w)
    b = maxsat_optimum(w)
    assert a.cost == b.cost and a.falsified == b.falsified
    assert a.model.tobytes() == b.model.tobytes()


# --- DIMACS ------------------------------------------------------------


def test_cnf_round_trip():
    f = cnf(4, [(1, -2), (3, 4, -1), (2,)])
    buf = io.StringIO()
    write_cnf(f, buf)
    g = read_cnf(io.StringIO(buf.getvalue()))
    assert g.num_vars == 4 and g.clauses == f.clauses


def test_wcnf_round_trip():
    w = wcnf(3, [(1, 2)], [((-1,), 1), ((-2, 3), 5)])
    buf = io.StringIO()
    write_wcnf(w, buf)
    g = read_wcnf(io.StringIO(buf.getvalue()))
    assert g.num_vars == 3 and g.hard == w.hard and g.soft == w.soft


def test_dimacs_comments_and_layout():
    text = "c a comment\n\np cnf 2 2\n1 -2 0\nc mid\n2 0\n"
    f = read_cnf(io.StringIO(text))
    assert f.clauses == [(1, -2), (2,)]


@pytest.mark.parametrize("text", [
    "p cnf 2\n1 0\n",                 # short header
    "1 -2 0\n",                        # no header
    "p cnf 2 1\n1 -3 0\n",            # var out of range
    "p cnf 2 2\n1 0\n",               # count mismatch
    "p cnf 2 1\n1 -2\n",              # unterminated
    "p cnf 2 1\nx y 0\n",             # junk token
    "p cnf 2 1\n0\n",                 # empty clause
])
def test_cnf_errors(text):
    with pytest.raises(FormatError):
        read_cnf(io.StringIO(text))


@pytest.mark.parametrize("text", [
    "p wcnf 2 1\n3 1 0\n",            # header missing top
    "p wcnf 2 1 5\n0 1 0\n",          # zero weight
    "p wcnf 2 1 5\n3 1\n",            # unterminated
    "p wcnf 2 2 5\n3 1 0\n",          # count mismatch
])
def test_wcnf_errors(text):
    with pytest.raises(FormatError):
        read_wcnf(io.StringIO(text))


def test_wcnf_hard_soft_split_by_top():
    text = "p wcnf 2 3 10\n10 1 2 0\n11 -1 -2 0\n4 1 0\n"
    w = read_wcnf(io.StringIO(text))
    assert w.hard == [(1, 2), (-1, -2)]
    assert w.soft == [((1,), 4)]


# --- numba / pure-python agreement --------------------------------------

_MODE_SCRIPT = r"""
import json, random, sys
from faultloc.solve import SatSolver, maxsat_optimum, JIT_ENABLED
from faultloc.encode.formulas import Wcnf
import faultloc.solve.kernels  # noqa: F401  (forces mode selection)

rng = random.Random(99)
out = []
for trial in range(12):
    n = rng.randint(6, 14)
    s = SatSolver(seed=trial)
    for _ in range(3 * n):
        vs = rng.sample(range(1, n + 1), k=3)
        s.add_clause(tuple(v if rng.random() < 0.5 else -v for v in vs))
    res = s.solve()
    row = [res.status, res.stats["conflicts"], res.stats["decisions"]]
    if res.model is not None:
        row.append(res.model.tobytes().hex())
    out.append(row)
hard = [(1, 2, 3), (-1, -2)]
soft = [((-1,), 2), ((-2,), 1), ((-3,), 3), ((1, 2), 2)]
sol = maxsat_optimum(Wcnf(num_vars=3, hard=hard, soft=soft))
out.append([sol.cost, sorted(sol.falsified)])
print(json.dumps({"jit": JIT_ENABLED, "out": out}))
"""


def _run_mode(disable: bool) -> dict:
    env = dict(os.environ)
    env.pop("FAULTLOC_DISABLE_NUMBA", None)
    if disable:
        env["FAULTLOC_DISABLE_NUMBA"] = "1"
    proc = subprocess.run([sys.executable, "-c", _MODE_SCRIPT], env=env,
                          capture_output=True, text=True, timeout=600)
    assert proc.returncode == 0, proc.stderr
    return json.loads(proc.stdout)


def test_pure_python_mode_matches_jit_mode():
    pure = _run_mode(disable=True)
    assert pure["jit"] is False
    jit = _run_mode(disable=False)
    # if numba is unavailable both runs are pure; the comparison still holds
    assert pure["out"] == jit["out"]
