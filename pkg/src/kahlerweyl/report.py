"""Structured pass/fail records for verification suites."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .tensor import Tensor, _fmt


@dataclass
class Check:
    claim: str
    paper_ref: str
    computed: Any
    expected: Any
    passed: bool
    mode: str = "exact"

    def to_dict(self) -> dict:
        return {
            "claim": self.claim,
            "paper_ref": self.paper_ref,
            "computed": jsonable(self.computed),
            "expected": jsonable(self.expected),
            "pass": bool(self.passed),
            "mode": self.mode,
        }


@dataclass
class VerificationReport:
    suite: str
    config: dict
    checks: list[Check] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def check(self, claim: str, computed, expected, ref: str = "", mode: str = "exact",
              passed: bool | None = None) -> Check:
        if passed is None:
            passed = computed == expected
        c = Check(claim, ref, computed, expected, bool(passed), mode)
        self.checks.append(c)
        return c

    def extend(self, other: "VerificationReport") -> None:
        self.checks.extend(other.checks)
        self.notes.extend(other.notes)

    def to_dict(self) -> dict:
        out = {
            "suite": self.suite,
            "config": jsonable(self.config),
            "checks": [c.to_dict() for c in self.checks],
            "pass": self.passed,
        }
        if self.notes:
            out["notes"] = list(self.notes)
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def to_markdown(self) -> str:
        lines = [f"## {self.suite}", "", f"config: `{json.dumps(jsonable(self.config))}`", "",
                 "| claim | computed | expected | pass | mode |", "|---|---|---|---|---|"]
        for c in self.checks:
            d = c.to_dict()
            lines.append(f"| {c.claim} | {_cell(d['computed'])} | {_cell(d['expected'])} | "
                         f"{'PASS' if c.passed else 'FAIL'} | {c.mode} |")
        lines += ["", f"**overall: {'PASS' if self.passed else 'FAIL'}**"]
        lines += [f"- {n}" for n in self.notes]
        return "\n".join(lines) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["suite", "claim", "paper_ref", "computed", "expected", "pass", "mode"])
        for c in self.checks:
            d = c.to_dict()
            w.writerow([self.suite, c.claim, c.paper_ref, json.dumps(d["computed"]),
                        json.dumps(d["expected"]), d["pass"], c.mode])
        return buf.getvalue()

    def render(self, fmt: str) -> str:
        if fmt == "json":
            return self.to_json() + "\n"
        if fmt in ("md", "markdown"):
            return self.to_markdown()
        if fmt == "csv":
            return self.to_csv()
        raise ValueError(f"unknown format {fmt!r}")


def _cell(v) -> str:
    s = json.dumps(v)
    return s if len(s) <= 60 else s[:57] + "..."


def jsonable(v):
    """Convert exact values (Fractions, tensors, numpy scalars) into JSON types."""
    if isinstance(v, bool) or v is None or isinstance(v, (str, float)):
        return v
    if isinstance(v, int):
        return v
    if isinstance(v, Fraction):
        return _fmt(v)
    if isinstance(v, Tensor):
        return v.to_record()
    if isinstance(v, dict):
        return {str(k): jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [jsonable(x) for x in v]
    if hasattr(v, "item"):
        return jsonable(v.item())
    return str(v)
