"""Diagnosis strategies, validation, brute-force audit, and reports.

Pinned values for the walkthrough program were derived by hand before
the engine ran (see test_transform for the component table): the unique
minimum-cost relaxation is the three if-conditions, cost 3, so cfaults
must return exactly one diagnosis over lines (5, 8, 11). The b18
two-optima pin comes from the weight rule: flipping the guard costs 2
(it nests two assignments) and freeing both assignments also costs 2.
"""

import pytest

from faultloc.config import Config
from faultloc.corpus import load_program
from faultloc.diagnose import (Instance, brute_force_diagnoses, failing_tests,
                               localize_bugassist, localize_cfaults,
                               localize_sniper, make_diagnosis,
                               validate_diagnosis)
from faultloc.errors import (CapTooLarge, HardUnsatError,
                             NoConsistentDiagnosis, ResourceError)
from faultloc.frontend import parse_program


def corpus_setup(name, **overrides):
    p = load_program(name)
    opts = Config(program_path=str(p.path), tests_dir=str(p.path.parent /
                                                          "tests"),
                  unwind=overrides.pop("unwind", p.unwind),
                  width=p.width, **overrides)
    return parse_program(p.source), p.suite, opts


# --- cfaults ----------------------------------------------------------------


def test_cfaults_walkthrough_unique_diagnosis():
    ast, suite, opts = corpus_setup("b01_max3")
    rep = localize_cfaults(ast, suite, opts)
    assert rep.strategy == "cfaults"
    assert rep.optimum_cost == 3 and rep.scale == 1
    assert len(rep.diagnoses) == 1
    d = rep.diagnoses[0]
    assert d.lines == (5, 8, 11)
    assert d.components == (3, 5, 7)
    assert d.cost == 3
    assert d.kinds == ("IfCondition",) * 3


def test_cfaults_reports_every_tied_optimum():
    ast, suite, opts = corpus_setup("b18_max2_cond")
    rep = localize_cfaults(ast, suite, opts)
    assert rep.optimum_cost == 2
    assert sorted(d.lines for d in rep.diagnoses) == [(4,), (6, 8)]


def test_cfaults_empty_report_when_everything_passes():
    ast, suite, opts = corpus_setup("c01_max3")
    rep = localize_cfaults(ast, suite, opts)
    assert rep.diagnoses == [] and rep.per_test_counts == {}


def test_cfaults_raises_when_unwind_cannot_reach_the_outputs():
    # the buggy countdown needs four loop bodies on its first test; at
    # unwind 1 not even a relaxed program can print three values
    ast, suite, opts = corpus_setup("b10_countdown_fence", unwind=1)
    with pytest.raises(HardUnsatError):
        localize_cfaults(ast, suite, opts)


def test_cfaults_respects_the_conflict_budget():
    ast, suite, opts = corpus_setup("b01_max3", conflict_budget=1)
    with pytest.raises(ResourceError):
        localize_cfaults(ast, suite, opts)


def test_diagnoses_are_subset_minimal():
    ast, suite, opts = corpus_setup("b01_max3")
    rep = localize_cfaults(ast, suite, opts)
    d = rep.diagnoses[0]
    assert validate_diagnosis(ast, suite, d, opts)
    for drop in d.components:
        smaller = tuple(c for c in d.components if c != drop)
        assert not validate_diagnosis(ast, suite, smaller, opts)


# --- refinement -------------------------------------------------------------


def test_refined_walkthrough_improves_strictly():
    ast, suite, opts = corpus_setup("b01_max3", refine=True)
    base = localize_cfaults(ast, suite, opts.replace(refine=False))
    rep = localize_cfaults(ast, suite, opts)
    assert rep.strategy == "cfaults-refined"
    assert rep.scale == 2
    assert rep.optimum_cost == 5  # 2.5 once normalized by the scale
    assert rep.optimum_cost < base.optimum_cost * rep.scale
    assert rep.diagnoses[0].lines == (5, 8, 11)


def test_refined_operand_split_witness():
    # only the upper bound of the && chain is wrong: refinement halves
    # the cost, the unrefined run pays for the whole condition
    ast, suite, opts = corpus_setup("b08_range_check", refine=True)
    base = localize_cfaults(ast, suite, opts.replace(refine=False))
    rep = localize_cfaults(ast, suite, opts)
    assert base.optimum_cost == 1
    assert rep.scale == 2 and rep.optimum_cost == 1
    assert rep.optimum_cost < base.optimum_cost * rep.scale


def test_refinement_never_costs_more_than_the_parent():
    for name in ("b02_sum_init", "b12_off_by_one", "b22_triangle"):
        ast, suite, opts = corpus_setup(name, refine=True)
        base = localize_cfaults(ast, suite, opts.replace(refine=False))
        rep = localize_cfaults(ast, suite, opts)
        assert rep.optimum_cost <= base.optimum_cost * rep.scale, name


# --- bugassist --------------------------------------------------------------


def test_bugassist_walkthrough_finds_a_consistent_candidate():
    ast, suite, opts = corpus_setup("b01_max3")
    rep = localize_bugassist(ast, suite, opts)
    assert rep.strategy == "bugassist"
    assert len(rep.diagnoses) == 1
    assert validate_diagnosis(ast, suite, rep.diagnoses[0], opts)
    assert set(rep.per_test_counts) == {"t0", "t1", "t2"}
    assert all(v >= 1 for v in rep.per_test_counts.values())
    assert rep.unique_aggregated_count >= 1


def test_bugassist_two_disjoint_faults_pays_for_io():
    # each failing test blames one of the two broken guards; no cheap
    # per-test candidate explains both observations, so the baseline
    # falls back to an expensive read-skipping correction while the
    # aggregated encoding pays 2 for the two guards
    ast, suite, opts = corpus_setup("b11_two_stage")
    rep = localize_bugassist(ast, suite, opts)
    cf = localize_cfaults(ast, suite, opts)
    assert validate_diagnosis(ast, suite, rep.diagnoses[0], opts)
    assert cf.optimum_cost == 2
    assert rep.diagnoses[0].cost > cf.optimum_cost


def test_bugassist_gives_up_when_candidates_conflict():
    # keeping only the cheapest correction per test leaves the two
    # disjoint guard flips, and neither explains the other test
    ast, suite, opts = corpus_setup("b11_two_stage", mcs_limit=1)
    with pytest.raises(NoConsistentDiagnosis):
        localize_bugassist(ast, suite, opts)


def test_cfaults_handles_the_two_fault_program():
    ast, suite, opts = corpus_setup("b11_two_stage")
    rep = localize_cfaults(ast, suite, opts)
    assert rep.optimum_cost == 2
    assert [d.lines for d in rep.diagnoses] == [(4, 8)]


# --- sniper -----------------------------------------------------------------


def test_sniper_walkthrough_matches_cfaults_optimum():
    ast, suite, opts = corpus_setup("b01_max3")
    rep = localize_sniper(ast, suite, opts)
    assert rep.strategy == "sniper"
    assert len(rep.diagnoses) == 1
    assert rep.diagnoses[0].lines == (5, 8, 11)
    assert rep.diagnoses[0].cost == 3
    # the cartesian aggregation spawns far more candidate sets than the
    # single aggregated encoding reports
    cf = localize_cfaults(ast, suite, opts)
    assert rep.unique_aggregated_count > len(cf.diagnoses)


def test_sniper_two_fault_union():
    ast, suite, opts = corpus_setup("b11_two_stage")
    rep = localize_sniper(ast, suite, opts)
    assert [d.lines for d in rep.diagnoses] == [(4, 8)]


def test_sniper_respects_the_product_cap():
    ast, suite, opts = corpus_setup("b01_max3", product_cap=2)
    with pytest.raises(ResourceError):
        localize_sniper(ast, suite, opts)


def test_sniper_union_always_validates():
    # unions of per-test corrections stay corrections (relaxation is
    # monotone), so even a truncated MCS list yields a valid result
    ast, suite, opts = corpus_setup("b01_max3", mcs_limit=1)
    rep = localize_sniper(ast, suite, opts)
    assert rep.unique_aggregated_count == 1
    assert validate_diagnosis(ast, suite, rep.diagnoses[0], opts)


# --- validation and brute force ----------------------------------------------


def test_validate_accepts_any_superset_of_a_diagnosis():
    ast, suite, opts = corpus_setup("b01_max3")
    assert validate_diagnosis(ast, suite, (3, 5, 7), opts)
    assert validate_diagnosis(ast, suite, (0, 3, 5, 7), opts)
    # freeing all three reads is also consistent (the unconstrained
    # values can steer exactly one guard per test) — just expensive
    assert validate_diagnosis(ast, suite, (0, 1, 2), opts)
    assert not validate_diagnosis(ast, suite, (), opts)
    assert not validate_diagnosis(ast, suite, (0,), opts)
    assert not validate_diagnosis(ast, suite, (4,), opts)


def test_validate_is_true_on_a_passing_suite():
    ast, suite, opts = corpus_setup("c01_max3")
    assert validate_diagnosis(ast, suite, (), opts)


def test_brute_force_matches_cfaults_on_the_walkthrough():
    ast, suite, opts = corpus_setup("b01_max3")
    rep = localize_cfaults(ast, suite, opts)
    audit = brute_force_diagnoses(ast, suite, 9, opts)
    assert audit, "audit found no diagnosis"
    best = min(d.cost for d in audit)
    assert best == rep.optimum_cost
    assert {d.components for d in audit if d.cost == best} == \
        {d.components for d in rep.diagnoses}
    # every audited diagnosis is subset-minimal by construction; spot
    # check the smallest ones
    for d in audit[:5]:
        for drop in d.components:
            rest = tuple(c for c in d.components if c != drop)
            assert not validate_diagnosis(ast, suite, rest, opts)


def test_brute_force_cap():
    ast, suite, opts = corpus_setup("b01_max3", bf_cap=4)
    with pytest.raises(CapTooLarge):
        brute_force_diagnoses(ast, suite, 9, opts)


# --- instances ---------------------------------------------------------------


def test_instance_exposes_solver_statistics():
    p = load_program("b01_max3")
    ast = parse_program(p.source)
    opts = Config(program_path=str(p.path),
                  tests_dir=str(p.path.parent / "tests"), unwind=p.unwind)
    failing = failing_tests(ast, p.suite, opts)
    inst = Instance.build(ast, failing, opts)
    assert inst.validate((3, 5, 7))
    assert not inst.validate((3, 5))
    stats = inst.solver_stats()
    assert set(stats) == {"vars", "hard_clauses", "soft_clauses",
                          "validation_solves", "conflicts", "decisions",
                          "propagations"}
    assert stats["soft_clauses"] == 9
    assert stats["validation_solves"] >= 2


def test_reports_serialize_deterministically():
    ast, suite, opts = corpus_setup("b01_max3")
    a = localize_cfaults(ast, suite, opts).as_json(stable=True)
    b = localize_cfaults(ast, suite, opts).as_json(stable=True)
    assert a == b
    assert a["strategy"] == "cfaults"
    assert a["wall_time"] == 0.0
    d = a["diagnoses"][0]
    assert d["lines"] == [5, 8, 11]
    assert [c["id"] for c in d["components"]] == [3, 5, 7]
    assert {c["kind"] for c in d["components"]} == {"IfCondition"}


def test_make_diagnosis_alignment():
    p = load_program("b01_max3")
    ast = parse_program(p.source)
    opts = Config(program_path=str(p.path),
                  tests_dir=str(p.path.parent / "tests"), unwind=p.unwind)
    inst = Instance.build(ast, failing_tests(ast, p.suite, opts), opts)
    d = make_diagnosis(inst.table, [7, 3])
    assert d.components == (3, 7)
    assert d.component_lines == (5, 11)
    assert d.lines == (5, 11)
    assert d.cost == 2
    assert d.weights == (1, 1)
