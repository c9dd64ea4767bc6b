"""Diagnosis results and their machine-readable form.

A Diagnosis is a set of components whose joint relaxation makes every
observation consistent; per-component lines, kinds, roles, and weights
are carried in parallel arrays aligned with the sorted component ids,
so reports stay self-contained. Costs are integers in the component
table's weight units; refined tables scale weights by ``scale`` to keep
them integral, so comparable per-node costs are ``cost / scale``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from ..transform.instrument import ComponentTable


@dataclass(frozen=True)
class Diagnosis:
    components: tuple  # sorted component ids
    lines: tuple  # sorted distinct source lines
    cost: int
    component_lines: tuple = ()  # line per component, aligned
    kinds: tuple = ()
    roles: tuple = ()
    weights: tuple = ()

    def as_json(self) -> dict:
        return {
            "components": [
                {
                    "id": cid,
                    "line": self.component_lines[i],
                    "kind": self.kinds[i],
                    "role": self.roles[i],
                    "weight": self.weights[i],
                }
                for i, cid in enumerate(self.components)
            ],
            "lines": list(self.lines),
            "cost": self.cost,
        }


def make_diagnosis(table: ComponentTable, component_ids) -> Diagnosis:
    ids = tuple(sorted(component_ids))
    comps = [table[c] for c in ids]
    return Diagnosis(
        components=ids,
        lines=tuple(sorted({c.line for c in comps})),
        cost=sum(c.weight for c in comps),
        component_lines=tuple(c.line for c in comps),
        kinds=tuple(c.kind for c in comps),
        roles=tuple(c.role for c in comps),
        weights=tuple(c.weight for c in comps),
    )


@dataclass
class DiagnosisReport:
    strategy: str
    diagnoses: list
    optimum_cost: Optional[int] = None
    scale: int = 1
    per_test_counts: dict = field(default_factory=dict)
    unique_aggregated_count: Optional[int] = None
    wall_time: float = 0.0
    solver_stats: dict = field(default_factory=dict)

    def as_json(self, stable: bool = False) -> dict:
        return {
            "strategy": self.strategy,
            "diagnoses": [d.as_json() for d in self.diagnoses],
            "optimum_cost": self.optimum_cost,
            "scale": self.scale,
            "per_test_counts": {k: self.per_test_counts[k]
                                for k in sorted(self.per_test_counts)},
            "unique_aggregated_count": self.unique_aggregated_count,
            "wall_time": 0.0 if stable else round(self.wall_time, 6),
            "solver_stats": {k: self.solver_stats[k]
                             for k in sorted(self.solver_stats)},
        }
