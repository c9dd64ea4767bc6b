"""Incremental SAT interface over the flat-array CDCL kernels.

SatSolver owns every numpy array the kernels operate on and is the only
place they are allocated or grown. Clauses accumulate across solves
(learned clauses included, they are never discarded), assumptions are
decided below all search decisions, and a failed solve reports the
subset of assumptions the conflict analysis reached. Each solve
re-propagates the whole trail from scratch (qhead 0) so clauses added
since the last call take effect at level 0.

Determinism: for a fixed sequence of add_clause/solve calls and a fixed
seed, results are bit-identical whether or not numba is active.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from ..errors import ResourceError
from . import kernels as K

_MASK63 = (1 << 63) - 1


def _code(lit: int) -> int:
    v = lit if lit > 0 else -lit
    return 2 * v + (1 if lit < 0 else 0)


def _ext(code: int) -> int:
    v = code >> 1
    return -v if code & 1 else v


@dataclass
class SatResult:
    status: str  # "sat" | "unsat" | "budget"
    model: Optional[np.ndarray] = None  # int8 indexed by var: +1 true, -1 false
    core: Optional[frozenset] = None  # failed assumptions (external literals)
    stats: dict = field(default_factory=dict)

    def true(self, var: int) -> bool:
        """Truth of a variable in the model; unassigned decodes as false."""
        return self.model is not None and self.model[var] == 1

    def holds(self, lit: int) -> bool:
        v = lit if lit > 0 else -lit
        return self.true(v) if lit > 0 else not self.true(v)


class SatSolver:
    def __init__(self, seed: int = 0):
        self._nv = 0
        self._ok = True
        self._pending_units: list[int] = []
        self._unattached = 0  # clauses appended to db but not yet watched
        self._attached_end = 0
        self._db = np.zeros(1024, dtype=np.int64)
        self._state = np.zeros(K.STATE_LEN, dtype=np.int64)
        self._fstate = np.full(K.FSTATE_LEN, 1.0, dtype=np.float64)
        if seed:
            self._state[K.S_RNG] = (seed & _MASK63) or 88172645463325252
        self._assigns = np.zeros(1, dtype=np.int8)
        self._polarity = np.zeros(1, dtype=np.int8)
        self._seen = np.zeros(1, dtype=np.int8)
        self._level = np.zeros(1, dtype=np.int64)
        self._reason = np.full(1, -1, dtype=np.int64)
        self._activity = np.zeros(1, dtype=np.float64)
        self._heap = np.zeros(1, dtype=np.int64)
        self._heap_pos = np.full(1, -1, dtype=np.int64)
        self._trail = np.zeros(1, dtype=np.int64)
        self._trail_lim = np.zeros(2, dtype=np.int64)
        self._learnt = np.zeros(2, dtype=np.int64)
        self._watch_head = np.full(4, -1, dtype=np.int64)
        self._wn_next = np.zeros(256, dtype=np.int64)
        self._wn_clause = np.zeros(256, dtype=np.int64)
        self._wn_blocker = np.zeros(256, dtype=np.int64)

    @property
    def num_vars(self) -> int:
        return self._nv

    @property
    def ok(self) -> bool:
        """False once the clause set is unsatisfiable without assumptions."""
        return self._ok

    def ensure_vars(self, n: int) -> None:
        if n <= self._nv:
            return

        def grow(arr, size, fill):
            out = np.full(size, fill, dtype=arr.dtype)
            out[: len(arr)] = arr
            return out

        m = n + 1
        self._assigns = grow(self._assigns, m, 0)
        self._polarity = grow(self._polarity, m, 0)
        self._seen = grow(self._seen, m, 0)
        self._level = grow(self._level, m, 0)
        self._reason = grow(self._reason, m, -1)
        self._activity = grow(self._activity, m, 0.0)
        self._heap = grow(self._heap, m, 0)
        self._heap_pos = grow(self._heap_pos, m, -1)
        self._trail = grow(self._trail, m, 0)
        self._learnt = grow(self._learnt, m + 1, 0)
        self._watch_head = grow(self._watch_head, 2 * m, -1)
        self._nv = n

    def new_var(self) -> int:
        self.ensure_vars(self._nv + 1)
        return self._nv

    def add_clause(self, lits: Iterable[int]) -> None:
        if not self._ok:
            return
        out: list[int] = []
        pos: set[int] = set()
        for lit in lits:
            if lit == 0:
                raise ValueError("literal 0 is not allowed")
            if -lit in pos:
                return  # tautology
            if lit not in pos:
                pos.add(lit)
                out.append(lit)
        if not out:
            self._ok = False
            return
        self.ensure_vars(max(abs(l) for l in out))
        if len(out) == 1:
            self._pending_units.append(out[0])
            return
        k = len(out)
        dl = int(self._state[K.S_DB])
        if dl + k + 1 > len(self._db):
            cap = max(2 * len(self._db), dl + k + 1 + 64)
            db = np.zeros(cap, dtype=np.int64)
            db[:dl] = self._db[:dl]
            self._db = db
        self._db[dl] = k
        for i, lit in enumerate(out):
            self._db[dl + 1 + i] = _code(lit)
        self._state[K.S_DB] = dl + k + 1
        self._unattached += 1

    def add_clauses(self, clauses: Iterable[Sequence[int]]) -> None:
        for cl in clauses:
            self.add_clause(cl)

    def _grow_wn(self, need: int) -> None:
        if need <= len(self._wn_next):
            return
        cap = max(2 * len(self._wn_next), need + 64)

        def grow(arr):
            out = np.zeros(cap, dtype=np.int64)
            out[: len(arr)] = arr
            return out

        self._wn_next = grow(self._wn_next)
        self._wn_clause = grow(self._wn_clause)
        self._wn_blocker = grow(self._wn_blocker)

    def solve(self, assumptions: Sequence[int] = (),
              conflict_budget: int = 0) -> SatResult:
        """Search under the given assumption literals.

        conflict_budget 0 means unlimited; a positive budget bounds the
        conflicts spent in this call and yields status "budget" when hit.
        """
        for lit in assumptions:
            if lit == 0:
                raise ValueError("literal 0 is not allowed")
            self.ensure_vars(abs(lit))
        c0 = int(self._state[K.S_CONFLICTS])
        if self._ok:
            self._grow_wn(int(self._state[K.S_WN]) + 2 * self._unattached)
            K._attach_range(self._db, self._attached_end,
                            int(self._state[K.S_DB]), self._watch_head,
                            self._wn_next, self._wn_clause, self._wn_blocker,
                            self._state)
            self._attached_end = int(self._state[K.S_DB])
            self._unattached = 0
            for lit in self._pending_units:
                code = _code(lit)
                val = K._lit_value(self._assigns, code)
                if val == -1:
                    self._ok = False
                    break
                if val == 0:
                    K._enqueue(code, -1, self._assigns, self._level,
                               self._reason, self._trail, self._state)
            self._pending_units.clear()
        if not self._ok:
            return SatResult("unsat", core=frozenset(), stats=self._stats(c0))

        nv = self._nv
        acodes = np.array([_code(l) for l in assumptions], dtype=np.int64)
        need_lim = nv + len(acodes) + 2
        if len(self._trail_lim) < need_lim:
            lim = np.zeros(need_lim, dtype=np.int64)
            lim[: len(self._trail_lim)] = self._trail_lim
            self._trail_lim = lim
        core_buf = np.zeros(len(acodes) + 1, dtype=np.int64)
        self._state[K.S_QHEAD] = 0
        K._refill_heap(self._assigns, self._heap, self._heap_pos,
                       self._activity, self._state, nv)
        budget = conflict_budget if conflict_budget > 0 else -1
        while True:
            left = budget
            if budget >= 0:
                left = max(0, budget - (int(self._state[K.S_CONFLICTS]) - c0))
            st = K._search(self._db, self._assigns, self._level, self._reason,
                           self._trail, self._trail_lim, self._polarity,
                           self._seen, self._learnt, core_buf, self._heap,
                           self._heap_pos, self._activity, self._watch_head,
                           self._wn_next, self._wn_clause, self._wn_blocker,
                           acodes, left, nv, self._state, self._fstate)
            if st == K.GROW_DB:
                cap = max(2 * len(self._db),
                          int(self._state[K.S_DB]) + nv + 64)
                db = np.zeros(cap, dtype=np.int64)
                db[: int(self._state[K.S_DB])] = self._db[: int(self._state[K.S_DB])]
                self._db = db
                continue
            if st == K.GROW_WATCH:
                self._grow_wn(len(self._wn_next) + 2)
                continue
            break
        self._attached_end = int(self._state[K.S_DB])
        if st == K.SAT:
            model = self._assigns.copy()
            K._cancel_until(0, self._assigns, self._level, self._reason,
                            self._trail, self._trail_lim, self._polarity,
                            self._heap, self._heap_pos, self._activity,
                            self._state)
            return SatResult("sat", model=model, stats=self._stats(c0))
        if st == K.BUDGET:
            return SatResult("budget", stats=self._stats(c0))
        n = int(self._state[K.S_CORELEN])
        core = frozenset(_ext(int(c)) for c in core_buf[:n])
        if not core:
            self._ok = False  # conflict at level 0: unsatisfiable outright
        return SatResult("unsat", core=core, stats=self._stats(c0))

    def _stats(self, c0: int) -> dict:
        s = self._state
        return {
            "conflicts": int(s[K.S_CONFLICTS]) - c0,
            "conflicts_total": int(s[K.S_CONFLICTS]),
            "decisions": int(s[K.S_DECISIONS]),
            "propagations": int(s[K.S_PROPS]),
            "restarts": int(s[K.S_RESTARTS]),
            "jit": K.JIT_ENABLED,
        }


def sat_solve(cnf, assumptions: Sequence[int] = (), seed: int = 0,
              conflict_budget: int = 0) -> SatResult:
    """One-shot solve of a CnfFormula; raises ResourceError on budget."""
    solver = SatSolver(seed=seed)
    solver.ensure_vars(cnf.num_vars)
    solver.add_clauses(cnf.clauses)
    res = solver.solve(assumptions, conflict_budget=conflict_budget)
    if res.status == "budget":
        raise ResourceError(
            f"solver stopped after {res.stats['conflicts']} conflicts "
            f"(budget {conflict_budget})")
    return res
