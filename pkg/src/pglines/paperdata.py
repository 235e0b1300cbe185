"""Published explicit line systems for r = 7 and r = 8, with their claimed parameters.

The fixture files are verbatim transcriptions (duplicates included).  The
harness reports every deviation and never repairs data.
"""

from __future__ import annotations

import hashlib
import json
from collections import Counter
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from .bincode import check_code_contract
from .linesys import LineSystem, SystemParseError, SystemReport, format_system, parse_system, verify_system

# n_{3.5}(31t - i) = 127t - offset for t >= 1 (t >= 2 for i >= 26)
R7_OFFSETS = (
    0, 5, 10, 15, 20, 21, 26, 31, 36, 41, 42, 47, 52, 55, 60, 63,
    68, 73, 76, 81, 84, 87, 92, 95, 100, 105, 108, 113, 116, 121, 126,
)
R7_SMALL = {3: 7, 4: 12, 5: 17}
R7_LABELS = (3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 15, 21, 25, 26, 30)
R8_EXPECTED = {9: 33, 10: 36, 11: 40, 14: 54, 23: 89, 24: 94, 27: 107, 49: 195, 50: 200}


def _r7_expected(s: int) -> int:
    return R7_SMALL.get(s, 127 - R7_OFFSETS[31 - s])


@dataclass(frozen=True)
class Fixture:
    r: int
    s: int
    expected_n: int
    filename: str
    source: str

    @property
    def id(self) -> Tuple[int, int]:
        return (self.r, self.s)

    @property
    def text(self) -> str:
        return _fixture_dir().joinpath(self.filename).read_text()


@dataclass(frozen=True)
class FixtureResult:
    fixture: Fixture
    entries: int = 0
    duplicate_entries: int = 0
    report: Optional[SystemReport] = None
    code_failures: Tuple[str, ...] = ()
    checksum_ok: bool = True
    errors: Tuple[str, ...] = ()

    @property
    def passed(self) -> bool:
        return (
            self.checksum_ok
            and not self.errors
            and not self.code_failures
            and self.report is not None
            and self.report.passed
        )

    def as_dict(self) -> dict:
        return {
            "r": self.fixture.r,
            "s": self.fixture.s,
            "expected_n": self.fixture.expected_n,
            "entries": self.entries,
            "duplicate_entries": self.duplicate_entries,
            "n": self.report.n if self.report else None,
            "s_max": self.report.s_max if self.report else None,
            "spanning": self.report.spanning if self.report else None,
            "checksum_ok": self.checksum_ok,
            "passed": self.passed,
            "problems": list(self.problems()),
        }

    def problems(self) -> List[str]:
        out = list(self.errors)
        if not self.checksum_ok:
            out.append("transcription checksum mismatch")
        if self.report is not None:
            out += list(self.report.mismatches)
        out += [f"code: {c}" for c in self.code_failures]
        return out


@dataclass(frozen=True)
class HarnessReport:
    results: Tuple[FixtureResult, ...] = field(default=())

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    @property
    def pass_count(self) -> int:
        return sum(r.passed for r in self.results)

    def as_dict(self) -> dict:
        return {
            "passed": self.passed,
            "pass_count": self.pass_count,
            "total": len(self.results),
            "fixtures": [r.as_dict() for r in self.results],
        }


def _fixture_dir():
    return resources.files("pglines").joinpath("data", "fixtures")


def datasets() -> List[Fixture]:
    out = [
        Fixture(7, s, _r7_expected(s), f"r7_s{s:02d}.txt", "explicit ILP constructions for n_{3.5}(s)")
        for s in R7_LABELS
    ]
    out += [
        Fixture(8, s, n, f"r8_s{s:02d}.txt", "explicit ILP constructions for n_4(s)")
        for s, n in R8_EXPECTED.items()
    ]
    return out


def fixture(r: int, s: int) -> Fixture:
    for f in datasets():
        if f.id == (r, s):
            return f
    raise KeyError(f"no fixture for r={r}, s={s}")


def load_system(r: int, s: int) -> LineSystem:
    return parse_system(fixture(r, s).text)


def checksums() -> Dict[str, str]:
    return json.loads(_fixture_dir().joinpath("checksums.json").read_text())


def _entry_count(text: str) -> Counter:
    entries = Counter()
    for raw in text.splitlines():
        body = raw.split("#", 1)[0].strip()
        if body and not body.lower().startswith("r="):
            entries[" ".join(body.replace("/", " ").split())] += 1
    return entries


def verify_fixture(fix: Fixture, text: Optional[str] = None) -> FixtureResult:
    """Check one fixture; ``text`` overrides the packaged file (for fault injection)."""
    text = fix.text if text is None else text
    digest = hashlib.sha256(text.encode()).hexdigest()
    checksum_ok = checksums().get(fix.filename) == digest
    entries = _entry_count(text)
    n_entries = sum(entries.values())
    dups = n_entries - len(entries)
    try:
        system = parse_system(text, fix.r)
    except SystemParseError as exc:
        return FixtureResult(fix, n_entries, dups, checksum_ok=checksum_ok, errors=(str(exc),))
    report = verify_system(system, fix.expected_n, fix.s)
    code_failures: Tuple[str, ...] = ()
    if report.spanning:
        code_failures = check_code_contract(system).failures
    return FixtureResult(fix, n_entries, dups, report, code_failures, checksum_ok)


def verify_all() -> HarnessReport:
    return HarnessReport(tuple(verify_fixture(f) for f in datasets()))


def export_fixtures(directory) -> List[Path]:
    """Write every fixture as a standalone system file (parsed, canonical order)."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    paths = []
    for fix in datasets():
        system = parse_system(fix.text)
        path = directory / f"system_r{fix.r}_s{fix.s:02d}.txt"
        header = f"r={fix.r} s={fix.s} claimed n={fix.expected_n}; {fix.source}"
        path.write_text(format_system(system, header))
        paths.append(path)
    return paths
