"""Coverage spectra: parsing, serialization and per-statement counts.

Text format::

    # comment
    statements middle.c:3,middle.c:4,middle.c:5
    test t1 PASS middle.c:3,middle.c:4
    test t2 FAIL middle.c:3,middle.c:5

JSON mirror::

    {"statements": ["middle.c:3", ...],
     "tests": [{"id": "t1", "verdict": "PASS", "covered": ["middle.c:3"]}]}
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterable

from .errors import InputError


@dataclass(frozen=True, order=True)
class StatementId:
    """A source statement, identified by its file label and line."""

    unit: str
    line: int

    def __post_init__(self):
        if not isinstance(self.line, int) or self.line < 1:
            raise InputError(f"line must be a positive integer: {self.line!r}")
        if not self.unit or any(c.isspace() or c == "," for c in self.unit):
            raise InputError(f"bad unit label: {self.unit!r}")

    @property
    def id(self) -> str:
        return f"{self.unit}:{self.line}"

    @classmethod
    def parse(cls, text: str) -> "StatementId":
        unit, sep, line = text.strip().rpartition(":")
        if not sep or not unit:
            raise InputError(f"statement id must be <unit>:<line>: {text!r}")
        try:
            lineno = int(line)
        except ValueError:
            raise InputError(f"non-integer line in {text!r}") from None
        return cls(unit, lineno)

    def __str__(self) -> str:
        return self.id


def line_key(s: StatementId):
    """Tie-break key: ascending line number, then unit label."""
    return (s.line, s.unit)


class Verdict(Enum):
    PASS = "PASS"
    FAIL = "FAIL"


@dataclass(frozen=True)
class TestRun:
    __test__ = False  # not a pytest class

    id: str
    verdict: Verdict
    covered: frozenset


@dataclass(frozen=True)
class StatementStats:
    ef: int
    ep: int
    nf: int
    np: int


@dataclass(frozen=True)
class CoverageSpectrum:
    """Statement universe plus per-test coverage rows and verdicts.

    Immutable after construction. Statement order is the document order.
    """

    statements: tuple
    tests: tuple
    _index: dict = field(init=False, repr=False, compare=False)
    _counts: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not self.statements:
            raise InputError("spectrum has zero statements")
        index = {}
        for i, s in enumerate(self.statements):
            if s in index:
                raise InputError(f"duplicate statement {s}")
            index[s] = i
        seen = set()
        for t in self.tests:
            if t.id in seen:
                raise InputError(f"duplicate test id {t.id!r}")
            seen.add(t.id)
            unknown = [s for s in t.covered if s not in index]
            if unknown:
                raise InputError(
                    f"test {t.id!r} covers unknown statement {sorted(unknown)[0]}"
                )
        counts = {s: [0, 0] for s in self.statements}
        for t in self.tests:
            slot = 0 if t.verdict is Verdict.FAIL else 1
            for s in t.covered:
                counts[s][slot] += 1
        object.__setattr__(self, "_index", index)
        object.__setattr__(self, "_counts", counts)

    @property
    def failing(self) -> int:
        return sum(1 for t in self.tests if t.verdict is Verdict.FAIL)

    @property
    def passing(self) -> int:
        return sum(1 for t in self.tests if t.verdict is Verdict.PASS)

    @property
    def totals(self) -> tuple[int, int]:
        """(F, Pp): number of failing and passing tests."""
        return self.failing, self.passing

    def __contains__(self, s) -> bool:
        return s in self._index

    def __len__(self) -> int:
        return len(self.statements)

    def failing_tests(self) -> list:
        return [t for t in self.tests if t.verdict is Verdict.FAIL]

    def test(self, test_id: str) -> TestRun:
        for t in self.tests:
            if t.id == test_id:
                return t
        raise InputError(f"unknown test id {test_id!r}")

    def require_failure(self) -> None:
        if self.failing == 0:
            raise InputError("spectrum has no failing test; nothing to localize")


def stats(spectrum: CoverageSpectrum, s: StatementId) -> StatementStats:
    """Return the (ef, ep, nf, np) counts for statement `s`."""
    if s not in spectrum:
        raise InputError(f"unknown statement {s}")
    ef, ep = spectrum._counts[s]
    return StatementStats(ef=ef, ep=ep, nf=spectrum.failing - ef, np=spectrum.passing - ep)


def all_stats(spectrum: CoverageSpectrum) -> dict:
    return {s: stats(spectrum, s) for s in spectrum.statements}


def make_spectrum(statements: Iterable, tests: Iterable) -> CoverageSpectrum:
    """Build a spectrum from ids (strings or StatementId) and test triples.

    `tests` yields (test_id, verdict, covered) where verdict is "PASS"/"FAIL"
    or a Verdict and covered is an iterable of ids.
    """
    stmts = tuple(_as_id(s) for s in statements)
    runs = []
    for test_id, verdict, covered in tests:
        runs.append(TestRun(str(test_id), _verdict(verdict), frozenset(_as_id(s) for s in covered)))
    return CoverageSpectrum(stmts, tuple(runs))


def _as_id(s) -> StatementId:
    return s if isinstance(s, StatementId) else StatementId.parse(s)


def _verdict(v) -> Verdict:
    if isinstance(v, Verdict):
        return v
    try:
        return Verdict(str(v).upper())
    except ValueError:
        raise InputError(f"verdict must be PASS or FAIL, got {v!r}") from None


def _split_ids(field_text: str) -> list:
    return [StatementId.parse(p) for p in field_text.split(",") if p.strip()]


def parse_spectrum_text(text: str) -> CoverageSpectrum:
    statements = None
    tests = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            if parts[0] == "statements":
                if statements is not None:
                    raise InputError("duplicate statements header")
                if len(parts) != 2:
                    raise InputError("statements header takes one comma-separated field")
                statements = _split_ids(parts[1])
            elif parts[0] == "test":
                if statements is None:
                    raise InputError("test line before statements header")
                if len(parts) not in (3, 4):
                    raise InputError("expected: test <id> <PASS|FAIL> [<ids>]")
                covered = _split_ids(parts[3]) if len(parts) == 4 else []
                tests.append((parts[1], _verdict(parts[2]), covered))
            else:
                raise InputError(f"unknown directive {parts[0]!r}")
        except InputError as exc:
            raise InputError(f"line {lineno}: {exc}") from None
    if statements is None:
        raise InputError("missing statements header")
    return make_spectrum(statements, tests)


def parse_spectrum_json(text: str) -> CoverageSpectrum:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON: {exc}") from None
    if not isinstance(doc, dict) or "statements" not in doc:
        raise InputError("JSON spectrum needs a 'statements' list")
    try:
        tests = [(t["id"], t["verdict"], t.get("covered", [])) for t in doc.get("tests", [])]
    except (KeyError, TypeError, AttributeError):
        raise InputError("each test needs 'id' and 'verdict'") from None
    return make_spectrum(doc["statements"], tests)


def parse_spectrum(source) -> CoverageSpectrum:
    """Parse a spectrum from a path, choosing JSON by the .json extension."""
    path = Path(source)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from None
    if path.suffix.lower() == ".json":
        return parse_spectrum_json(text)
    return parse_spectrum_text(text)


def _ordered(spectrum: CoverageSpectrum, covered) -> list:
    return sorted(covered, key=spectrum._index.__getitem__)


def dump_spectrum_text(spectrum: CoverageSpectrum) -> str:
    out = ["statements " + ",".join(s.id for s in spectrum.statements)]
    for t in spectrum.tests:
        ids = ",".join(s.id for s in _ordered(spectrum, t.covered))
        out.append(f"test {t.id} {t.verdict.value} {ids}".rstrip())
    return "\n".join(out) + "\n"


def dump_spectrum_json(spectrum: CoverageSpectrum) -> str:
    doc = {
        "statements": [s.id for s in spectrum.statements],
        "tests": [
            {"id": t.id, "verdict": t.verdict.value,
             "covered": [s.id for s in _ordered(spectrum, t.covered)]}
            for t in spectrum.tests
        ],
    }
    return json.dumps(doc, indent=2) + "\n"
