"""Bundled example programs with test suites and ground-truth metadata.

Each program lives in its own directory::

    <name>/prog.mc      the program source
    <name>/meta.json    kind, description, suggested unwind depth, width,
                        and the ground-truth faulty lines (empty when the
                        program is correct)
    <name>/tests/       one <id>.in / <id>.out pair per test

The suites of buggy programs hold the *intended* outputs, so at least
one test fails; correct programs pass their whole suite.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from ..frontend import TestSuite, load_test_suite

_ROOT = Path(__file__).resolve().parent

__all__ = ["CorpusProgram", "corpus_names", "load_program", "load_all"]


@dataclass(frozen=True)
class CorpusProgram:
    """One bundled program plus its suite and metadata."""

    name: str
    path: Path  # the program source file
    source: str
    suite: TestSuite
    kind: str  # "correct" | "buggy"
    description: str
    unwind: int  # depth sufficient for every bundled test
    width: int
    faulty_lines: tuple[int, ...]  # ground truth; () for correct programs

    @property
    def buggy(self) -> bool:
        return self.kind == "buggy"


def corpus_names() -> tuple[str, ...]:
    """Names of all bundled programs, sorted."""
    return tuple(sorted(p.name for p in _ROOT.iterdir()
                        if (p / "prog.mc").is_file()))


def load_program(name: str) -> CorpusProgram:
    """Load one bundled program by name."""
    d = _ROOT / name
    path = d / "prog.mc"
    if not path.is_file():
        raise KeyError(f"no bundled program named {name!r}")
    meta = json.loads((d / "meta.json").read_text(encoding="utf-8"))
    return CorpusProgram(
        name=name,
        path=path,
        source=path.read_text(encoding="utf-8"),
        suite=load_test_suite(d / "tests"),
        kind=meta["kind"],
        description=meta["description"],
        unwind=meta["unwind"],
        width=meta["width"],
        faulty_lines=tuple(meta["faulty_lines"]),
    )


def load_all() -> list[CorpusProgram]:
    """Load every bundled program."""
    return [load_program(name) for name in corpus_names()]
