"""Verification reports: per-check records, candidate tables, JSON and text output."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from typing import Any

SCHEMA_VERSION = 1


@dataclass
class CheckRecord:
    """One claim and its outcome.

    ``mandatory`` checks decide the verdict; the others are supplementary
    observations printed alongside.
    """

    id: str
    reference: str
    inputs: dict[str, Any]
    expected: str
    computed: str
    passed: bool
    mandatory: bool = True


@dataclass
class CandidateRecord:
    """One choice of the ambiguous generators and the checks evaluated on it."""

    labels: dict[str, str]
    checks: dict[str, bool]

    @property
    def passed(self) -> bool:
        return all(self.checks.values())


@dataclass
class VerificationReport:
    target: str
    group: str
    checks: list[CheckRecord] = field(default_factory=list)
    candidates: list[CandidateRecord] = field(default_factory=list)
    generators: list[dict] = field(default_factory=list)
    betti: list[int] = field(default_factory=list)
    hilbert: list[int] = field(default_factory=list)
    timing: dict[str, float] = field(default_factory=dict)
    # whether the verdict needs a candidate that passes every candidate check
    require_candidate: bool = False

    def add(self, record: CheckRecord) -> CheckRecord:
        self.checks.append(record)
        return record

    def check(self, id: str) -> CheckRecord:
        for c in self.checks:
            if c.id == id:
                return c
        raise KeyError(id)

    @property
    def passing_candidates(self) -> list[CandidateRecord]:
        return [c for c in self.candidates if c.passed]

    @property
    def failed_checks(self) -> list[CheckRecord]:
        return [c for c in self.checks if c.mandatory and not c.passed]

    @property
    def verdict(self) -> bool:
        if not self.checks:
            return False
        if self.failed_checks:
            return False
        return not self.require_candidate or bool(self.passing_candidates)

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA_VERSION,
            "target": self.target,
            "group": self.group,
            "verdict": "pass" if self.verdict else "fail",
            "checks": [asdict(c) for c in self.checks],
            "candidates": [
                {"labels": c.labels, "checks": c.checks, "passed": c.passed} for c in self.candidates
            ],
            "passing_candidates": len(self.passing_candidates),
            "generators": self.generators,
            "betti": self.betti,
            "hilbert": self.hilbert,
            "timing": {k: round(v, 4) for k, v in self.timing.items()},
        }

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)

    def to_text(self) -> str:
        return render_text(self.to_dict())


def render_text(data: dict) -> str:
    """Human-readable rendering of a report dictionary."""
    lines = [f"[{data['verdict'].upper()}] {data['target']} on {data['group']}"]
    if data["betti"]:
        lines.append(f"  betti   {data['betti']}")
    if data["hilbert"]:
        lines.append(f"  hilbert {data['hilbert']}")
    for gen in data["generators"]:
        lines.append(
            f"  generator {gen['name']} (degree {gen['degree']}, ambiguity {gen['ambiguity_dim']}): "
            + "; ".join(gen["constraints"])
        )
    for c in data["checks"]:
        tag = "ok  " if c["passed"] else "FAIL"
        if not c["mandatory"]:
            tag = tag.strip().lower() + "*"
        lines.append(f"  {tag:5} {c['id']}: {c['reference']}")
        if not c["passed"] or not c["mandatory"]:
            lines.append(f"        expected {c['expected']}; computed {c['computed']}")
    if data["candidates"]:
        lines.append(f"  candidates: {data['passing_candidates']} of {len(data['candidates'])} pass")
        for cand in data["candidates"]:
            label = " ".join(f"{k}={v}" for k, v in cand["labels"].items())
            failed = [k for k, v in cand["checks"].items() if not v]
            status = "pass" if cand["passed"] else "fails " + ", ".join(failed)
            lines.append(f"    {label}: {status}")
    if data["timing"]:
        total = sum(data["timing"].values())
        lines.append(f"  time {total:.2f}s")
    if any(not c["mandatory"] for c in data["checks"]):
        lines.append("  (* supplementary, not part of the verdict)")
    return "\n".join(lines)
