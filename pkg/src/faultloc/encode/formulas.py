"""CNF / weighted-CNF containers shared by the encoder and the solvers.

Literals are DIMACS-style nonzero ints: +v / -v for variable v in
1..num_vars. Clauses are tuples of literals. A Wcnf splits clauses into
hard (must hold) and soft (each with a positive integer weight); for
instances built by the encoder every soft clause is a positive unit on a
component's healthy variable, and ``soft_components[i]`` names the
component behind soft i.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

Clause = tuple[int, ...]


@dataclass
class CnfFormula:
    num_vars: int
    clauses: list[Clause]
    # encoder bookkeeping: component id -> CNF var of its healthy literal,
    # plus decode tables for outputs/assertions (see encode.wcnf)
    var_map: dict = field(default_factory=dict)

    def check(self) -> None:
        for cl in self.clauses:
            assert cl, "empty clause at construction"
            for lit in cl:
                v = abs(lit)
                assert lit != 0 and v <= self.num_vars, f"literal {lit} out of range"


@dataclass
class Wcnf:
    num_vars: int
    hard: list[Clause]
    soft: list[tuple[Clause, int]]  # (clause, weight), weight >= 1
    soft_components: Optional[tuple[int, ...]] = None  # soft index -> component id
    var_map: dict = field(default_factory=dict)

    def check(self) -> None:
        for cl in self.hard:
            assert cl, "empty hard clause"
        for cl, w in self.soft:
            assert cl and w >= 1
        if self.soft_components is not None:
            assert len(self.soft_components) == len(self.soft)

    def copy(self) -> "Wcnf":
        return Wcnf(self.num_vars, list(self.hard), list(self.soft),
                    self.soft_components, self.var_map)

    @property
    def top(self) -> int:
        """DIMACS top weight: 1 + sum of soft weights."""
        return 1 + sum(w for _, w in self.soft)
