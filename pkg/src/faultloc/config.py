"""Run configuration shared by the CLI and the library entry points."""

from __future__ import annotations

from dataclasses import dataclass, field, fields

STRATEGIES = ("cfaults", "bugassist", "sniper", "all")
WIDTHS = (8, 16, 32)


@dataclass
class Limits:
    """Concrete-execution budgets. Exceeding either marks the run as
    resource-limited rather than looping forever on a buggy program."""

    max_loop_iterations: int = 100_000
    max_total_steps: int = 1_000_000


@dataclass
class Config:
    """All knobs for one localization run.

    Invariants are checked eagerly: numeric budgets are positive (or zero
    where zero means "unlimited"), width is one of the supported bit
    widths, strategy is a known name.
    """

    program_path: str | None = None
    tests_dir: str | None = None
    output_path: str | None = None
    strategy: str = "cfaults"
    refine: bool = False
    unwind: int = 8
    width: int = 16
    io_multiplier: int = 100
    mcs_limit: int = 0  # baselines: max MCSes enumerated per test; 0 = unlimited
    product_cap: int = 1_000_000  # sniper: cap on aggregated union count
    emit_wcnf: bool = False  # dump the instance next to the report as .wcnf
    conflict_budget: int = 0  # CDCL conflicts per solve; 0 = unlimited
    seed: int = 0
    bf_cap: int = 16  # brute force refuses programs with more components
    vector_cap: int = 4096  # per-loop relaxation vector budget (unwind**depth)
    unwind_assert: bool = False  # turn unwinding assumptions into assertions
    stable_output: bool = False  # zero timing fields for byte-stable reports
    limits: Limits = field(default_factory=Limits)

    def __post_init__(self) -> None:
        if self.strategy not in STRATEGIES:
            raise ValueError(f"unknown strategy {self.strategy!r}")
        if self.width not in WIDTHS:
            raise ValueError(f"width must be one of {WIDTHS}, got {self.width}")
        for name in ("unwind", "io_multiplier", "product_cap", "bf_cap", "vector_cap"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")
        for name in ("mcs_limit", "conflict_budget", "seed"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")
        if self.limits.max_loop_iterations < 1 or self.limits.max_total_steps < 1:
            raise ValueError("execution limits must be >= 1")

    def replace(self, **kw) -> "Config":
        vals = {f.name: getattr(self, f.name) for f in fields(self)}
        vals.update(kw)
        return Config(**vals)
