"""Suite report records and their serialisation."""

from __future__ import annotations

import json
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, TextIO

MAX_FAILURES = 10


@dataclass
class SuiteReport:
    suite: str
    ring: str
    quotient: str
    status: str  # "pass", "fail" or "skipped"
    checked: int = 0
    failures: list[dict] = field(default_factory=list)
    expected_negative: bool = False
    elapsed_ms: int = 0
    reason: str = ""
    details: dict = field(default_factory=dict)

    def __post_init__(self):
        self.failures = self.failures[:MAX_FAILURES]

    @property
    def status_text(self) -> str:
        return f"skipped({self.reason})" if self.status == "skipped" else self.status

    def to_record(self) -> dict:
        return {
            "suite": self.suite,
            "ring": self.ring,
            "quotient": self.quotient,
            "status": self.status_text,
            "checked": self.checked,
            "failures": self.failures,
            "expected_negative": self.expected_negative,
            "elapsed_ms": self.elapsed_ms,
        }


def witness(obj) -> dict:
    """A failure record; group elements are written as residue matrices."""
    return {"witness": json.dumps(_residues(obj))}


def _residues(obj):
    if hasattr(obj, "residue_rows"):
        return obj.residue_rows()
    if hasattr(obj, "residues"):
        return list(obj.residues)
    if isinstance(obj, (list, tuple)):
        return [_residues(o) for o in obj]
    return obj if isinstance(obj, (int, float, str)) or obj is None else str(obj)


def emit(reports: Iterable[SuiteReport], path: str | Path | None, out: TextIO | None = None) -> None:
    """Write one JSON record per line to ``path`` and a summary table to ``out``."""
    reports = list(reports)
    out = out if out is not None else sys.stdout
    if path is not None:
        with open(path, "w", encoding="utf-8") as fh:
            for r in reports:
                fh.write(json.dumps(r.to_record(), sort_keys=False) + "\n")
    out.write(summary_table(reports))


def summary_table(reports: list[SuiteReport]) -> str:
    if not reports:
        return "0 suites\n"
    rows = [("suite", "ring", "quotient", "status", "checked", "ms")]
    for r in reports:
        status = r.status_text + (" (negative control)" if r.expected_negative else "")
        rows.append((r.suite, r.ring, r.quotient, status, str(r.checked), str(r.elapsed_ms)))
    widths = [max(len(row[i]) for row in rows) for i in range(len(rows[0]))]
    lines = ["  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip() for row in rows]
    lines.insert(1, "  ".join("-" * w for w in widths))
    passed = sum(r.status == "pass" for r in reports)
    failed = sum(r.status == "fail" for r in reports)
    skipped = sum(r.status == "skipped" for r in reports)
    lines.append(f"{len(reports)} suites: {passed} passed, {failed} failed, {skipped} skipped")
    return "\n".join(lines) + "\n"
