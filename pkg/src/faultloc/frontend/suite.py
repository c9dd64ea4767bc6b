"""Test-suite loading.

A suite is a directory of paired files ``t<N>.in`` / ``t<N>.out``. Each
file holds whitespace-separated decimal integers (any mix of spaces and
newlines; blank files mean "no values"). ``t<N>.in`` is the stdin the
program would read with scanf, ``t<N>.out`` the exact stdout integer
sequence a correct run must print.

Missing directory: IoError. An ``.in`` without its ``.out`` (or vice
versa) or a non-integer token: FormatError. A directory with no test
pairs at all is a valid empty suite.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path

from ..errors import FormatError, IoError

_NAME_RE = re.compile(r"^t(\d+)\.(in|out)$")
_INT_RE = re.compile(r"^[+-]?\d+$")


@dataclass(frozen=True)
class TestCase:
    test_id: str  # "t<N>"
    inputs: tuple[int, ...]
    expected: tuple[int, ...]


@dataclass(frozen=True)
class TestSuite:
    path: str
    tests: tuple[TestCase, ...]

    def __len__(self) -> int:
        return len(self.tests)

    def by_id(self, test_id: str) -> TestCase:
        for t in self.tests:
            if t.test_id == test_id:
                return t
        raise KeyError(test_id)


def _read_ints(path: Path) -> tuple[int, ...]:
    try:
        text = path.read_text()
    except OSError as e:
        raise IoError(f"cannot read {path}: {e}") from e
    values = []
    for tok in text.split():
        if not _INT_RE.match(tok):
            raise FormatError(f"{path}: non-integer token {tok!r}")
        values.append(int(tok))
    return tuple(values)


def load_test_suite(path: str | Path) -> TestSuite:
    """Load every t<N>.in / t<N>.out pair under `path`, ordered by N."""
    root = Path(path)
    if not root.is_dir():
        raise IoError(f"test-suite directory not found: {root}")
    ins: dict[int, Path] = {}
    outs: dict[int, Path] = {}
    for entry in root.iterdir():
        m = _NAME_RE.match(entry.name)
        if not m:
            continue
        num = int(m.group(1))
        (ins if m.group(2) == "in" else outs)[num] = entry
    if set(ins) != set(outs):
        lonely = sorted(set(ins) ^ set(outs))
        raise FormatError(
            f"{root}: unpaired test file(s) for t{lonely[0]} "
            "(each t<N>.in needs a t<N>.out)")
    tests = tuple(
        TestCase(f"t{num}", _read_ints(ins[num]), _read_ints(outs[num]))
        for num in sorted(ins)
    )
    return TestSuite(str(root), tests)
