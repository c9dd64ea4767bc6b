"""Weighted-CNF assembly: hard trace formula plus healthy-var softs."""

from __future__ import annotations

from ..errors import MissingVarError
from ..transform.instrument import ComponentTable
from .formulas import CnfFormula, Wcnf


def build_wcnf(cnf: CnfFormula, wc: ComponentTable) -> Wcnf:
    """One positive unit soft per component, weighted; hard = ``cnf``.

    The soft clause of component i is ``(+v,)`` where v is the CNF
    variable of its healthy symbol; falsifying it relaxes the component.
    """
    soft = []
    ids = []
    for comp in wc:
        var = cnf.var_map.get(comp.rv_name)
        if not isinstance(var, int):
            raise MissingVarError(
                f"component {comp.component_id} ({comp.rv_name}) has no "
                f"CNF variable")
        assert comp.weight >= 1, "weights must be computed first"
        soft.append(((var,), comp.weight))
        ids.append(comp.component_id)
    w = Wcnf(cnf.num_vars, list(cnf.clauses), soft, tuple(ids), cnf.var_map)
    w.check()
    return w
