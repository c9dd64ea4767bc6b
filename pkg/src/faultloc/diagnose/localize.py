"""Localization strategies, consistency checking, and the ground-truth
enumeration used to audit them.

All strategies share the same front half: concrete classification
splits the suite, and only failing tests are encoded (an all-passing
program yields an empty report). The joint strategy encodes every
failing observation into one weighted instance and reads minimum-cost
relaxation sets off the optimum; the two baselines enumerate minimal
correction sets per failing test and combine them afterwards — by
frequency ranking (validated against the joint formula) or by unions
over one correction set per test.
"""

from __future__ import annotations

import itertools
import time

from ..config import Config
from ..errors import (CapTooLarge, HardUnsatError, NoConsistentDiagnosis,
                      ResourceError)
from ..execution import classify_tests
from ..frontend.suite import TestSuite
from ..solve import enumerate_mcses, enumerate_optimal_solutions, maxsat_optimum
from .instance import Instance
from .report import Diagnosis, DiagnosisReport, make_diagnosis

__all__ = [
    "brute_force_diagnoses",
    "failing_tests",
    "localize_bugassist",
    "localize_cfaults",
    "localize_sniper",
    "validate_diagnosis",
]


def failing_tests(ast, suite: TestSuite, opts: Config) -> list:
    _, failing = classify_tests(ast, suite, opts.limits, opts.width)
    return [suite.by_id(tid) for tid in failing]


def _empty_report(strategy: str, t0: float) -> DiagnosisReport:
    return DiagnosisReport(strategy=strategy, diagnoses=[], optimum_cost=0,
                           wall_time=time.perf_counter() - t0)


def _staged(stage: str, exc: Exception) -> Exception:
    return type(exc)(f"{stage}: {exc}")


def localize_cfaults(ast, suite: TestSuite, opts: Config) -> DiagnosisReport:
    """Joint minimum-cost diagnoses over all failing observations; with
    ``opts.refine`` the first diagnosis is split into sub-expression
    components and the encode/solve stages run again at that
    granularity."""
    t0 = time.perf_counter()
    strategy = "cfaults-refined" if opts.refine else "cfaults"
    failing = failing_tests(ast, suite, opts)
    if not failing:
        return _empty_report(strategy, t0)

    inst = Instance.build(ast, failing, opts)
    diagnoses, cost = _optimal_diagnoses(inst, opts)
    scale = 1
    if opts.refine and diagnoses:
        inst = Instance.build(ast, failing, opts, diagnosis=diagnoses[0])
        diagnoses, cost = _optimal_diagnoses(inst, opts)
        scale = inst.table.scale
    return DiagnosisReport(
        strategy=strategy,
        diagnoses=diagnoses,
        optimum_cost=cost,
        scale=scale,
        wall_time=time.perf_counter() - t0,
        solver_stats=inst.solver_stats(),
    )


def _optimal_diagnoses(inst: Instance, opts: Config):
    """All distinct optimum-cost relaxation sets of one instance, each
    re-validated against the hard formula, in lexicographic order."""
    try:
        sol = maxsat_optimum(inst.wcnf, seed=opts.seed,
                             conflict_budget=opts.conflict_budget)
        if sol.cost == 0:
            return [], 0
        falsified = enumerate_optimal_solutions(
            inst.wcnf, sol.cost, seed=opts.seed,
            conflict_budget=opts.conflict_budget)
    except (HardUnsatError, ResourceError) as e:
        raise _staged("optimum search", e) from e
    diagnoses = []
    for f in falsified:
        ids = inst.components_of(f)
        assert inst.validate(ids, opts.conflict_budget), \
            "optimal relaxation set failed re-validation"
        diagnoses.append(inst.diagnosis(ids))
    diagnoses.sort(key=lambda d: d.components)
    return diagnoses, sol.cost


def _per_test_mcses(ast, failing, opts: Config):
    """Minimal correction sets (as component-id frozensets) per failing
    test, each enumerated on a single-observation instance."""
    per = {}
    for t in failing:
        one = Instance.build(ast, [t], opts)
        try:
            found = enumerate_mcses(one.wcnf, limit=opts.mcs_limit,
                                    seed=opts.seed,
                                    conflict_budget=opts.conflict_budget)
        except ResourceError as e:
            raise _staged(f"correction sets of {t.test_id}", e) from e
        if not found:
            raise HardUnsatError(
                f"test {t.test_id}: no relaxation reconciles the "
                f"observation (is unwind large enough?)")
        per[t.test_id] = [one.components_of(f) for f, _ in found]
    return per


def localize_bugassist(ast, suite: TestSuite, opts: Config) -> DiagnosisReport:
    """Frequency-ranked per-test correction sets; the first candidate
    consistent with all observations wins (ties: smaller cost, then
    lexicographic component order)."""
    t0 = time.perf_counter()
    failing = failing_tests(ast, suite, opts)
    if not failing:
        return _empty_report("bugassist", t0)

    per = _per_test_mcses(ast, failing, opts)
    full = Instance.build(ast, failing, opts)
    weight = {c.component_id: c.weight for c in full.table}

    score: dict = {}
    for sets in per.values():
        for ids in set(sets):
            score[ids] = score.get(ids, 0) + 1
    ranked = sorted(
        score,
        key=lambda ids: (-score[ids], sum(weight[c] for c in ids),
                         tuple(sorted(ids))))
    for ids in ranked:
        if full.validate(ids, opts.conflict_budget):
            d = full.diagnosis(ids)
            return DiagnosisReport(
                strategy="bugassist",
                diagnoses=[d],
                optimum_cost=d.cost,
                per_test_counts={tid: len(s) for tid, s in per.items()},
                unique_aggregated_count=len(score),
                wall_time=time.perf_counter() - t0,
                solver_stats=full.solver_stats(),
            )
    raise NoConsistentDiagnosis(
        f"none of {len(ranked)} ranked candidates is consistent with "
        f"all {len(failing)} failing tests")


def localize_sniper(ast, suite: TestSuite, opts: Config) -> DiagnosisReport:
    """Aggregate per-test correction sets by unions over one set per
    test; the final diagnosis is the minimum-cost aggregated set (ties:
    lexicographic)."""
    t0 = time.perf_counter()
    failing = failing_tests(ast, suite, opts)
    if not failing:
        return _empty_report("sniper", t0)

    per = _per_test_mcses(ast, failing, opts)
    full = Instance.build(ast, failing, opts)
    weight = {c.component_id: c.weight for c in full.table}

    aggregated = {frozenset()}
    for tid in sorted(per):
        sets = per[tid]
        if len(aggregated) * len(sets) > opts.product_cap:
            raise ResourceError(
                f"aggregation: {len(aggregated)} x {len(sets)} unions at "
                f"test {tid} exceed product_cap {opts.product_cap}")
        aggregated = {u | m for u in aggregated for m in sets}
    best = min(aggregated,
               key=lambda ids: (sum(weight[c] for c in ids),
                                tuple(sorted(ids))))
    if not full.validate(best, opts.conflict_budget):
        raise NoConsistentDiagnosis(
            "minimum-cost aggregated union failed joint validation")
    d = full.diagnosis(best)
    return DiagnosisReport(
        strategy="sniper",
        diagnoses=[d],
        optimum_cost=d.cost,
        per_test_counts={tid: len(s) for tid, s in per.items()},
        unique_aggregated_count=len(aggregated),
        wall_time=time.perf_counter() - t0,
        solver_stats=full.solver_stats(),
    )


def validate_diagnosis(ast, suite: TestSuite, d, opts: Config) -> bool:
    """True iff relaxing exactly ``d`` (a Diagnosis or an iterable of
    component ids) makes every failing observation satisfiable."""
    ids = d.components if isinstance(d, Diagnosis) else tuple(d)
    failing = failing_tests(ast, suite, opts)
    if not failing:
        return True
    return Instance.build(ast, failing, opts).validate(
        ids, opts.conflict_budget)


def brute_force_diagnoses(ast, suite: TestSuite, max_size: int,
                          opts: Config) -> list:
    """Every subset-minimal diagnosis of size ≤ ``max_size``, found by
    checking candidate subsets in increasing total weight.

    A candidate is emitted when it validates and no previously emitted
    diagnosis is contained in it; since weights are ≥ 1, any validating
    proper subset has strictly smaller weight and was visited earlier,
    so the containment check is exactly subset-minimality.
    """
    t0_failing = failing_tests(ast, suite, opts)
    if not t0_failing:
        return [Diagnosis(components=(), lines=(), cost=0)]
    inst = Instance.build(ast, t0_failing, opts)
    n = len(inst.table)
    if n > opts.bf_cap:
        raise CapTooLarge(
            f"{n} components exceed the brute-force cap {opts.bf_cap}")
    weight = {c.component_id: c.weight for c in inst.table}
    candidates = []
    for size in range(1, min(max_size, n) + 1):
        for ids in itertools.combinations(sorted(weight), size):
            candidates.append((sum(weight[c] for c in ids), ids))
    candidates.sort(key=lambda t: (t[0], t[1]))

    found: list = []
    for _, ids in candidates:
        s = set(ids)
        if any(set(d.components) <= s for d in found):
            continue
        if inst.validate(ids, opts.conflict_budget):
            found.append(inst.diagnosis(ids))
    found.sort(key=lambda d: (d.cost, d.components))
    return found
