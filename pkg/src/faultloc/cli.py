"""Command-line driver: parse flags, run strategies, write the report.

Exit codes: 0 success, 1 localization failure (no strategy produced a
consistent diagnosis, or none can exist at this unwinding), 2 resource
exhaustion (conflict budget, aggregation caps, relaxation-vector caps),
3 input errors (unreadable/invalid program or test suite).
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import fields
from pathlib import Path
from typing import Optional, TextIO

from .config import STRATEGIES, WIDTHS, Config
from .diagnose import (Instance, failing_tests, localize_bugassist,
                       localize_cfaults, localize_sniper)
from .errors import (CapacityError, CapTooLarge, FaultLocError,
                     HardUnsatError, IoError, NoConsistentDiagnosis,
                     ResourceError, UnrollError)
from .frontend import load_test_suite, parse_program
from .solve import write_wcnf

_SECTION_ORDER = ("cfaults", "cfaults-refined", "bugassist", "sniper")

_CONFIG_KEYS = ("strategy", "refine", "unwind", "width", "io_multiplier",
                "mcs_limit", "product_cap", "conflict_budget", "seed",
                "bf_cap", "vector_cap", "unwind_assert")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="faultloc",
        description="MaxSAT-based fault localization for MiniC programs: "
                    "encodes all failing tests as one weighted formula and "
                    "reports minimum-cost sets of suspect statements.")
    p.add_argument("--program-path", required=True,
                   help="MiniC source file")
    p.add_argument("--tests-dir", required=True,
                   help="directory of tN.in / tN.out test files")
    p.add_argument("--output-path",
                   help="report destination (default: standard output)")
    p.add_argument("--strategy", choices=STRATEGIES, default="cfaults")
    p.add_argument("--refine", action="store_true",
                   help="re-run at sub-expression granularity")
    p.add_argument("--unwind", type=int, default=8,
                   help="loop unrolling factor (default 8)")
    p.add_argument("--width", type=int, choices=WIDTHS, default=16,
                   help="integer bit width (default 16)")
    p.add_argument("--io-multiplier", type=int, default=100,
                   help="I/O statement weight factor (default 100)")
    p.add_argument("--mcs-limit", type=int, default=0,
                   help="max correction sets per failing test, 0 = all")
    p.add_argument("--product-cap", type=int, default=1_000_000,
                   help="cap on aggregated union count (default 10^6)")
    p.add_argument("--conflict-budget", type=int, default=0,
                   help="CDCL conflicts per solve, 0 = unlimited")
    p.add_argument("--seed", type=int, default=0,
                   help="solver randomization seed")
    p.add_argument("--bf-cap", type=int, default=16,
                   help="component limit for brute-force auditing")
    p.add_argument("--vector-cap", type=int, default=4096,
                   help="per-component relaxation-vector budget")
    p.add_argument("--unwind-assert", action="store_true",
                   help="record that unwinding bounds are treated as "
                        "assertions (the encoded constraint is identical)")
    p.add_argument("--emit-wcnf", action="store_true",
                   help="dump the joint instance in DIMACS WCNF next to "
                        "the report")
    p.add_argument("--stable-output", action="store_true",
                   help="zero volatile fields for byte-stable reports")
    p.add_argument("--summary", action="store_true",
                   help="print a one-line-per-diagnosis table to stderr")
    return p


def config_from_args(args: argparse.Namespace) -> Config:
    names = {f.name for f in fields(Config)} - {"limits"}
    return Config(**{n: getattr(args, n) for n in names})


def _summary_lines(sections: dict) -> list:
    out = []
    for name, sec in sections.items():
        if "error" in sec:
            out.append(f"{name}: error: {sec['error']}")
            continue
        if not sec["diagnoses"]:
            out.append(f"{name}: no diagnosis (all tests pass)")
        for d in sec["diagnoses"]:
            lines = ",".join(str(x) for x in d["lines"])
            cost = d["cost"] / sec["scale"]
            out.append(f"{name}: lines {lines} cost {cost:g}")
    return out


def emit_report(sections: dict, config: Config,
                path: Optional[str]) -> None:
    """Schema-versioned JSON with a fixed field order: metadata first,
    then one section per strategy in canonical order. ``path`` None
    writes to standard output; unwritable paths raise IoError."""
    doc = {
        "schema": "1",
        "program": config.program_path,
        "tests": config.tests_dir,
        "config": {k: getattr(config, k) for k in _CONFIG_KEYS},
    }
    for name in _SECTION_ORDER:
        if name in sections:
            doc[name] = sections[name]
    text = json.dumps(doc, indent=2) + "\n"
    if path is None:
        sys.stdout.write(text)
        return
    try:
        Path(path).write_text(text)
    except OSError as e:
        raise IoError(f"cannot write report to {path}: {e}") from e


def _wcnf_path(config: Config) -> Path:
    base = Path(config.output_path) if config.output_path \
        else Path(config.program_path)
    return base.with_suffix(".wcnf")


def run(config: Config, summary: bool = False) -> int:
    """Execute the configured strategies; returns the process exit code."""
    try:
        source = Path(config.program_path).read_text()
        ast = parse_program(source)
        suite = load_test_suite(config.tests_dir)
    except (OSError, FaultLocError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 3

    wanted = [s for s in ("cfaults", "bugassist", "sniper")
              if config.strategy in ("all", s)]
    runners = {"cfaults": localize_cfaults, "bugassist": localize_bugassist,
               "sniper": localize_sniper}
    sections: dict = {}
    code = 0
    for name in wanted:
        try:
            report = runners[name](ast, suite, config)
            sections[report.strategy] = report.as_json(
                stable=config.stable_output)
        except (NoConsistentDiagnosis, HardUnsatError) as e:
            sections[name] = {"error": str(e)}
            code = max(code, 1)
        except (ResourceError, CapTooLarge, CapacityError) as e:
            sections[name] = {"error": str(e)}
            code = max(code, 2)
        except UnrollError as e:
            print(f"error: {e}", file=sys.stderr)
            return 3

    if config.emit_wcnf:
        code = max(code, _dump_wcnf(ast, suite, config))

    try:
        emit_report(sections, config, config.output_path)
    except IoError as e:
        print(f"error: {e}", file=sys.stderr)
        return 3

    if summary:
        for line in _summary_lines(sections):
            print(line, file=sys.stderr)
    return code


def _dump_wcnf(ast, suite, config: Config) -> int:
    try:
        failing = failing_tests(ast, suite, config)
        if not failing:
            print("note: all tests pass; no instance to dump",
                  file=sys.stderr)
            return 0
        inst = Instance.build(ast, failing, config)
        with open(_wcnf_path(config), "w") as fp:
            write_wcnf(inst.wcnf, fp)
        return 0
    except (UnrollError, CapacityError, OSError) as e:
        print(f"error: wcnf dump failed: {e}", file=sys.stderr)
        return 2


def main(argv: Optional[list] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = config_from_args(args)
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return 3
    return run(config, summary=args.summary)


if __name__ == "__main__":
    sys.exit(main())
