"""One encoded multi-observation instance, built once, queried many times.

Wraps the whole encode pipeline (unroll → instrument → weights → SSA →
CNF → Wcnf) and keeps a solver pre-loaded with the hard clauses, so
consistency queries under different healthy-variable assumptions reuse
learned clauses instead of re-encoding.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Optional

from ..config import Config
from ..encode import (CnfFormula, SsaProgram, Wcnf, bitblast, build_wcnf,
                      compute_weights, ssa_translate, term_value)
from ..errors import ResourceError
from ..solve import SatSolver
from ..transform import InstrumentedAst, instrument, refine_instrument, unroll
from .report import Diagnosis, make_diagnosis


@dataclass
class Instance:
    inst: InstrumentedAst
    ssa: SsaProgram
    cnf: CnfFormula
    wcnf: Wcnf
    solver: SatSolver
    encode_time: float = 0.0
    solves: int = 0
    stats: dict = field(default_factory=dict)

    @property
    def table(self):
        return self.inst.table

    @classmethod
    def build(cls, ast, failing, opts: Config,
              diagnosis: Optional[Diagnosis] = None,
              assert_outputs: bool = True) -> "Instance":
        """Encode ``ast`` against the failing tests; ``diagnosis``
        switches to the refined (sub-expression) instrumentation."""
        t0 = time.perf_counter()
        if diagnosis is None:
            inst = instrument(unroll(ast, failing), opts.unwind,
                              vector_cap=opts.vector_cap)
            compute_weights(inst.table, ast, opts.io_multiplier)
        else:
            inst = refine_instrument(ast, failing, diagnosis, opts.unwind,
                                     vector_cap=opts.vector_cap,
                                     io_multiplier=opts.io_multiplier)
        ssa = ssa_translate(inst, opts.unwind, opts.width,
                            assert_outputs=assert_outputs)
        cnf = bitblast(ssa, opts.width)
        wcnf = build_wcnf(cnf, inst.table)
        solver = SatSolver(seed=opts.seed)
        solver.ensure_vars(cnf.num_vars)
        solver.add_clauses(cnf.clauses)
        return cls(inst, ssa, cnf, wcnf, solver,
                   encode_time=time.perf_counter() - t0)

    # -- healthy-variable plumbing ------------------------------------------

    def healthy_var(self, component_id: int) -> int:
        return self.cnf.var_map[self.table[component_id].rv_name]

    def assumptions(self, relaxed) -> list:
        """Fix h(c) false for c in ``relaxed``, true for every other."""
        off = set(relaxed)
        out = []
        for c in self.table:
            v = self.healthy_var(c.component_id)
            out.append(-v if c.component_id in off else v)
        return out

    def solve_relaxing(self, relaxed, conflict_budget: int = 0):
        self.solves += 1
        res = self.solver.solve(self.assumptions(relaxed),
                                conflict_budget=conflict_budget)
        self.stats = res.stats
        return res

    def validate(self, relaxed, conflict_budget: int = 0) -> bool:
        """Consistency of the full multi-observation formula with exactly
        ``relaxed`` unhealthy and every other component healthy."""
        res = self.solve_relaxing(relaxed, conflict_budget)
        if res.status == "budget":
            raise ResourceError("validation stopped on conflict budget")
        return res.status == "sat"

    def diagnosis(self, component_ids) -> Diagnosis:
        return make_diagnosis(self.table, component_ids)

    def components_of(self, falsified_soft_indices) -> frozenset:
        sc = self.wcnf.soft_components
        return frozenset(sc[i] for i in falsified_soft_indices)

    # -- trace decoding -------------------------------------------------------

    def decode_outputs(self, model, scope_index: int) -> tuple:
        """Printed sequence of one scope under a model (trace mode)."""
        out = self.ssa.outputs[scope_index]
        n = term_value(out.length, self.cnf, model, self.ssa.width)
        return tuple(term_value(out.cells[k], self.cnf, model,
                                self.ssa.width) for k in range(n))

    def solver_stats(self) -> dict:
        return {
            "vars": self.cnf.num_vars,
            "hard_clauses": len(self.wcnf.hard),
            "soft_clauses": len(self.wcnf.soft),
            "validation_solves": self.solves,
            "conflicts": int(self.stats.get("conflicts_total", 0)),
            "decisions": int(self.stats.get("decisions", 0)),
            "propagations": int(self.stats.get("propagations", 0)),
        }
