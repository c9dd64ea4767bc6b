"""Shared test setup: warm the solver kernels once per session so
timed tests measure search, not JIT compilation."""

import pytest


@pytest.fixture(scope="session", autouse=True)
def _warm_solver_kernels():
    from faultloc.encode.formulas import Wcnf
    from faultloc.solve import maxsat_optimum, sat_solve
    from faultloc.encode.formulas import CnfFormula

    sat_solve(CnfFormula(num_vars=2, clauses=[(1, 2), (-1,)]),
              assumptions=(2,))
    maxsat_optimum(Wcnf(num_vars=2, hard=[(1, 2)],
                        soft=[((-1,), 1), ((-2,), 2)]))
    yield
