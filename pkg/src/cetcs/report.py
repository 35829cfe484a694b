"""Check outcomes and their deterministic rendering.

A Report records one checked item: its verdict, how many instances were
enumerated, an optional structured witness (present on failure, or carrying
a reason on skip) and the wall-clock time spent.  Timing is measured but
excluded from rendered output unless explicitly requested, so identical
inputs produce byte-identical reports.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Mapping

PASS = "pass"
FAIL = "fail"
SKIP = "skip"


@dataclass(frozen=True)
class Report:
    item: str
    verdict: str
    witness: Mapping | None
    instances_checked: int
    elapsed: float | None = None

    @property
    def passed(self) -> bool:
        return self.verdict == PASS

    @property
    def failed(self) -> bool:
        return self.verdict == FAIL

    def to_dict(self, include_timing: bool = False) -> dict:
        return {
            "item": self.item,
            "verdict": self.verdict,
            "witness": dict(self.witness) if self.witness is not None else None,
            "instances_checked": self.instances_checked,
            "elapsed": self.elapsed if include_timing else None,
        }

    def text_line(self, include_timing: bool = False) -> str:
        line = f"{self.verdict.upper():<4} {self.item} instances={self.instances_checked}"
        if self.witness is not None:
            line += " witness=" + json.dumps(
                dict(self.witness), sort_keys=True, separators=(",", ":"),
                ensure_ascii=False,
            )
        if include_timing and self.elapsed is not None:
            line += f" elapsed={self.elapsed:.3f}s"
        return line


def from_dict(data: Mapping) -> Report:
    return Report(
        item=data["item"],
        verdict=data["verdict"],
        witness=data.get("witness"),
        instances_checked=data.get("instances_checked", 0),
        elapsed=data.get("elapsed"),
    )


def render_text(reports: Iterable[Report], include_timing: bool = False) -> str:
    return "\n".join(r.text_line(include_timing) for r in reports) + "\n"


def render_json(reports: Iterable[Report], include_timing: bool = False) -> str:
    payload = [r.to_dict(include_timing) for r in reports]
    return json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def exit_code(reports: Iterable[Report]) -> int:
    return 1 if any(r.failed for r in reports) else 0
