"""Weighted partial MaxSAT on top of the incremental SAT solver.

maxsat_optimum is core-guided with weight stratification: soft clauses
enter as assumption selectors in descending weight strata; every UNSAT
core pays the smallest weight it contains, lowers the core's selectors
by that amount, and adds counting outputs over the core (a totalizer)
as new softs so that falsifying j core members costs j times the paid
weight. The sum of payments is the exact optimum, and the final model
witnesses it; both facts are asserted on every call.

The enumerators re-run maxsat_optimum on a copy of the instance,
blocking each reported falsified set F with the hard clause that is the
disjunction of all literals of F's soft clauses (some soft in F must be
satisfied), which excludes F and its supersets. Every MCS emitted by
enumerate_mcses is re-verified against the definition first: the hard
clauses plus all softs outside F are satisfiable, and adding back any
single member of F makes that unsatisfiable.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from ..errors import HardUnsatError, ResourceError
from ..encode.formulas import Wcnf
from .solver import SatSolver

# (falsified soft-index set, cost) entries in non-decreasing cost order
McsList = list[tuple[frozenset, int]]


@dataclass
class OptimumSolution:
    cost: int
    model: np.ndarray  # int8 indexed by var, +1 true
    falsified: frozenset  # soft indices falsified by the model


def _lit_holds(model: np.ndarray, lit: int) -> bool:
    t = model[abs(lit)] == 1
    return t if lit > 0 else not t


def _falsified_softs(w: Wcnf, model: np.ndarray) -> frozenset:
    return frozenset(
        i for i, (cl, _) in enumerate(w.soft)
        if not any(_lit_holds(model, l) for l in cl))


def _totalizer_outputs(solver: SatSolver, inputs: Sequence[int]) -> list[int]:
    """Count literals: output j (1-based) is forced true when more than j
    inputs are true. Only that direction is clausified; assuming the
    negation of output j therefore caps the count below j."""
    nodes = [[l] for l in inputs]
    while len(nodes) > 1:
        merged = []
        for i in range(0, len(nodes) - 1, 2):
            left, right = nodes[i], nodes[i + 1]
            out = [solver.new_var() for _ in range(len(left) + len(right))]
            for a in range(len(left) + 1):
                for b in range(len(right) + 1):
                    if a + b == 0:
                        continue
                    cl = []
                    if a:
                        cl.append(-left[a - 1])
                    if b:
                        cl.append(-right[b - 1])
                    cl.append(out[a + b - 1])
                    solver.add_clause(cl)
            merged.append(out)
        if len(nodes) % 2:
            merged.append(nodes[-1])
        nodes = merged
    return nodes[0]


def maxsat_optimum(w: Wcnf, seed: int = 0,
                   conflict_budget: int = 0) -> OptimumSolution:
    """Exact minimum over total weight of falsified soft clauses.

    Raises HardUnsatError when the hard clauses alone are inconsistent
    and ResourceError when a conflict budget (per SAT call) runs out.
    """
    w.check()
    solver = SatSolver(seed=seed)
    solver.ensure_vars(w.num_vars)
    for cl in w.hard:
        solver.add_clause(cl)

    # one selector literal per soft; unit softs select themselves
    selectors: list[int] = []
    for cl, _ in w.soft:
        if len(cl) == 1:
            selectors.append(cl[0])
        else:
            r = solver.new_var()
            solver.add_clause(tuple(cl) + (-r,))
            selectors.append(r)

    def solve(assumps):
        res = solver.solve(assumps, conflict_budget=conflict_budget)
        if res.status == "budget":
            raise ResourceError(
                f"conflict budget {conflict_budget} exhausted in MaxSAT")
        return res

    active: dict[int, int] = {}  # selector literal -> remaining weight
    cost = 0
    model = None
    for stratum in sorted({wt for _, wt in w.soft}, reverse=True):
        for (_, wt), s in zip(w.soft, selectors):
            if wt == stratum:
                active[s] = active.get(s, 0) + wt
        while True:
            res = solve(tuple(active.keys()))
            if res.status == "sat":
                model = res.model
                break
            core = [s for s in active if s in res.core]
            if not core:
                raise HardUnsatError("hard clauses are unsatisfiable")
            wmin = min(active[s] for s in core)
            cost += wmin
            for s in core:
                active[s] -= wmin
                if active[s] == 0:
                    del active[s]
            if len(core) == 1:
                solver.add_clause((-core[0],))
            else:
                outs = _totalizer_outputs(solver, [-s for s in core])
                # one falsified member is paid for; each further one
                # will cost wmin again through these new softs
                for o in outs[1:]:
                    active[-o] = active.get(-o, 0) + wmin
    if model is None:  # no soft clauses at all
        res = solve(())
        if res.status != "sat":
            raise HardUnsatError("hard clauses are unsatisfiable")
        model = res.model

    falsified = _falsified_softs(w, model)
    witness = sum(w.soft[i][1] for i in falsified)
    assert witness == cost, (
        f"optimum self-check failed: paid {cost}, model falsifies {witness}")
    for cl in w.hard:
        assert any(_lit_holds(model, l) for l in cl), "model violates hard clause"
    return OptimumSolution(cost=cost, model=model, falsified=falsified)


def _blocking_clause(w: Wcnf, falsified: frozenset) -> tuple:
    # some soft in the set must be satisfied: disjoin all their literals
    seen = set()
    out = []
    for i in sorted(falsified):
        for lit in w.soft[i][0]:
            if lit not in seen:
                seen.add(lit)
                out.append(lit)
    return tuple(out)


def enumerate_optimal_solutions(w: Wcnf, optimum: int, seed: int = 0,
                                conflict_budget: int = 0) -> list[frozenset]:
    """All distinct falsified-soft sets of cost exactly `optimum`.

    Each found set is blocked with a hard clause and the instance is
    re-solved; enumeration stops when the cost rises past the optimum
    or the blocked instance loses its hard part.
    """
    if optimum == 0:
        return [frozenset()]
    out: list[frozenset] = []
    cur = w.copy()
    while True:
        try:
            sol = maxsat_optimum(cur, seed=seed, conflict_budget=conflict_budget)
        except HardUnsatError:
            break
        if sol.cost > optimum:
            break
        assert sol.cost == optimum, "enumeration found a better optimum"
        out.append(sol.falsified)
        cur.hard.append(_blocking_clause(w, sol.falsified))
    return out


class _McsVerifier:
    """Checks the correction-subset definition with one persistent solver.

    Soft clause i is extended with a fresh relaxer a_i; assuming -a_i
    enforces the soft, leaving a_i free disables it. A set F is verified
    by solving with all softs outside F enforced, then re-solving with
    each single member of F enforced on top (which must be UNSAT)."""

    def __init__(self, w: Wcnf, seed: int = 0):
        self._solver = SatSolver(seed=seed)
        self._solver.ensure_vars(w.num_vars)
        for cl in w.hard:
            self._solver.add_clause(cl)
        self._relaxers = []
        for cl, _ in w.soft:
            a = self._solver.new_var()
            self._solver.add_clause(tuple(cl) + (a,))
            self._relaxers.append(a)

    def assert_mcs(self, falsified: frozenset) -> None:
        base = [-a for i, a in enumerate(self._relaxers) if i not in falsified]
        res = self._solver.solve(base)
        assert res.status == "sat", "removing the set does not restore SAT"
        for c in sorted(falsified):
            res = self._solver.solve(base + [-self._relaxers[c]])
            assert res.status == "unsat", (
                f"set is not minimal: soft {c} can be kept")


def enumerate_mcses(w: Wcnf, limit: int = 0, seed: int = 0,
                    conflict_budget: int = 0) -> McsList:
    """Minimal correction subsets in non-decreasing cost order.

    limit 0 means exhaustive. Satisfiable soft sets need no correction
    and yield an empty list. Every emitted set passes the definition
    check (see _McsVerifier) before emission.
    """
    out: McsList = []
    cur = w.copy()
    verifier = _McsVerifier(w, seed=seed)
    last_cost = 0
    while limit <= 0 or len(out) < limit:
        try:
            sol = maxsat_optimum(cur, seed=seed, conflict_budget=conflict_budget)
        except HardUnsatError:
            break
        if sol.cost == 0:
            break
        assert sol.cost >= last_cost, "cost order violated"
        last_cost = sol.cost
        verifier.assert_mcs(sol.falsified)
        out.append((sol.falsified, sol.cost))
        cur.hard.append(_blocking_clause(w, sol.falsified))
    return out
