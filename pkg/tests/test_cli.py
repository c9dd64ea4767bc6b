"""End-to-end tests for the command-line driver.

These invoke ``main()`` in process against shipped corpus programs and
pin the observable contract: exit codes for the four outcome classes,
report shape and section order, conformance to docs/report-schema.json,
byte-stable output under --stable-output, and the side channels
(--summary on stderr, --emit-wcnf next to the report).
"""

import json
from pathlib import Path

import jsonschema
import pytest

from faultloc.cli import main
from faultloc.corpus import load_program

REPORT_SCHEMA = json.loads(
    (Path(__file__).resolve().parent.parent / "docs" / "report-schema.json")
    .read_text())

METADATA_KEYS = ["schema", "program", "tests", "config"]


def corpus_args(name):
    prog = load_program(name)
    return [f"--program-path={prog.path}",
            f"--tests-dir={prog.path.parent / 'tests'}"]


def run_cli(tmp_path, name, *extra):
    out = tmp_path / "report.json"
    code = main(corpus_args(name) + [f"--output-path={out}", *extra])
    doc = json.loads(out.read_text()) if out.exists() else None
    return code, doc, out


def test_localizes_shipped_bug(tmp_path):
    code, doc, _ = run_cli(tmp_path, "b01_max3")
    assert code == 0
    assert doc["schema"] == "1"
    assert doc["config"]["strategy"] == "cfaults"
    section = doc["cfaults"]
    assert [d["lines"] for d in section["diagnoses"]] == [[5, 8, 11]]
    assert section["optimum_cost"] == 3
    assert section["scale"] == 1
    jsonschema.validate(instance=doc, schema=REPORT_SCHEMA)


def test_strategy_all_emits_sections_in_canonical_order(tmp_path):
    code, doc, _ = run_cli(tmp_path, "b01_max3", "--strategy=all")
    assert code == 0
    assert list(doc) == METADATA_KEYS + ["cfaults", "bugassist", "sniper"]
    for name in ("cfaults", "bugassist", "sniper"):
        assert doc[name]["strategy"] == name
        assert doc[name]["diagnoses"]
    jsonschema.validate(instance=doc, schema=REPORT_SCHEMA)


def test_refine_renames_the_cfaults_section(tmp_path):
    code, doc, _ = run_cli(tmp_path, "b01_max3", "--strategy=all", "--refine")
    assert code == 0
    assert list(doc) == METADATA_KEYS + ["cfaults-refined", "bugassist",
                                         "sniper"]
    section = doc["cfaults-refined"]
    assert section["strategy"] == "cfaults-refined"
    assert section["scale"] == 2
    assert section["optimum_cost"] == 5
    assert all(d["lines"] == [5, 8, 11] for d in section["diagnoses"])
    jsonschema.validate(instance=doc, schema=REPORT_SCHEMA)


def test_stable_output_is_byte_reproducible(tmp_path):
    texts = []
    for stem in ("first", "second"):
        out = tmp_path / f"{stem}.json"
        code = main(corpus_args("b01_max3")
                    + [f"--output-path={out}", "--stable-output"])
        assert code == 0
        texts.append(out.read_bytes())
    assert texts[0] == texts[1]
    doc = json.loads(texts[0])
    assert doc["cfaults"]["wall_time"] == 0.0


def test_partial_failure_keeps_other_sections(tmp_path):
    # Truncating each test's correction sets to one can leave the
    # baseline without any jointly consistent candidate; that aborts
    # only its own section while the other strategies still report.
    code, doc, _ = run_cli(tmp_path, "b11_two_stage", "--strategy=all",
                           "--mcs-limit=1")
    assert code == 1
    assert list(doc) == METADATA_KEYS + ["cfaults", "bugassist", "sniper"]
    assert isinstance(doc["bugassist"]["error"], str)
    assert doc["bugassist"]["error"]
    assert doc["cfaults"]["diagnoses"]
    assert doc["sniper"]["diagnoses"]
    jsonschema.validate(instance=doc, schema=REPORT_SCHEMA)


def test_no_consistent_diagnosis_exits_1(tmp_path):
    code, doc, _ = run_cli(tmp_path, "b11_two_stage", "--strategy=bugassist",
                           "--mcs-limit=1")
    assert code == 1
    assert set(doc) == set(METADATA_KEYS) | {"bugassist"}
    assert "error" in doc["bugassist"]


def test_exhausted_conflict_budget_exits_2(tmp_path):
    code, doc, _ = run_cli(tmp_path, "b01_max3", "--conflict-budget=1")
    assert code == 2
    assert "error" in doc["cfaults"]
    jsonschema.validate(instance=doc, schema=REPORT_SCHEMA)


def test_missing_program_exits_3(tmp_path, capsys):
    out = tmp_path / "report.json"
    code = main([f"--program-path={tmp_path / 'nope.mc'}",
                 f"--tests-dir={tmp_path}", f"--output-path={out}"])
    assert code == 3
    assert not out.exists()
    assert capsys.readouterr().err.startswith("error:")


def test_underfed_test_suite_exits_3(tmp_path, capsys):
    # One input line cannot feed the program's three top-level reads:
    # the concrete run underruns (so the test fails), and unrolling
    # refuses to encode a test it cannot feed.
    prog = load_program("b01_max3")
    suite = tmp_path / "tests"
    suite.mkdir()
    (suite / "t0.in").write_text("1\n")
    (suite / "t0.out").write_text("1\n")
    code = main([f"--program-path={prog.path}", f"--tests-dir={suite}",
                 f"--output-path={tmp_path / 'report.json'}"])
    assert code == 3
    assert capsys.readouterr().err.startswith("error:")


def test_invalid_budget_exits_3(tmp_path, capsys):
    code = main(corpus_args("b01_max3") + ["--unwind=0"])
    assert code == 3
    assert "unwind" in capsys.readouterr().err


def test_emit_wcnf_writes_dimacs_next_to_report(tmp_path):
    code, _, out = run_cli(tmp_path, "b01_max3", "--emit-wcnf")
    assert code == 0
    dump = out.with_suffix(".wcnf")
    assert dump.is_file()
    assert dump.read_text().startswith("p wcnf ")


def test_emit_wcnf_skips_programs_with_no_failing_tests(tmp_path, capsys):
    code, doc, out = run_cli(tmp_path, "c01_max3", "--emit-wcnf")
    assert code == 0
    assert not out.with_suffix(".wcnf").exists()
    assert "all tests pass" in capsys.readouterr().err
    assert doc["cfaults"]["diagnoses"] == []
    assert doc["cfaults"]["optimum_cost"] == 0
    jsonschema.validate(instance=doc, schema=REPORT_SCHEMA)


def test_summary_prints_to_stderr(tmp_path, capsys):
    code, _, _ = run_cli(tmp_path, "b01_max3", "--summary")
    assert code == 0
    captured = capsys.readouterr()
    assert captured.out == ""
    assert "cfaults: lines 5,8,11 cost 3" in captured.err


def test_report_defaults_to_stdout(capsys):
    code = main(corpus_args("b01_max3"))
    assert code == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["schema"] == "1"
    jsonschema.validate(instance=doc, schema=REPORT_SCHEMA)


def test_console_entry_point_is_installed():
    from importlib.metadata import entry_points
    (ep,) = entry_points(group="console_scripts", name="faultloc")
    assert ep.value == "faultloc.cli:main"
