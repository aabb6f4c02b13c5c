"""Structured pass/fail reports returned by the verifiers."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Any


class Status(str, enum.Enum):
    PASS = "pass"
    FAIL = "fail"
    HYPOTHESIS_NOT_MET = "hypothesis-not-met"


@dataclass(frozen=True)
class Verdict:
    """A boolean flag with the first counterexample when it is false."""

    holds: bool
    witness: Any = None

    def __bool__(self) -> bool:
        return self.holds


TRUE = Verdict(True)


@dataclass(frozen=True)
class Check:
    name: str
    status: Status
    witness: Any = None
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.status is Status.PASS

    @property
    def failed(self) -> bool:
        return self.status is Status.FAIL


def check(name: str, holds: bool, witness: Any = None, detail: str = "") -> Check:
    return Check(name, Status.PASS if holds else Status.FAIL, None if holds else witness, detail)


def skipped(name: str, detail: str = "") -> Check:
    return Check(name, Status.HYPOTHESIS_NOT_MET, None, detail)


@dataclass(frozen=True)
class Report:
    title: str
    checks: tuple[Check, ...] = field(default_factory=tuple)

    @property
    def ok(self) -> bool:
        """True when no check failed. Unmet hypotheses are not failures."""
        return not any(c.failed for c in self.checks)

    @property
    def failures(self) -> tuple[Check, ...]:
        return tuple(c for c in self.checks if c.failed)

    def __getitem__(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def render(self) -> str:
        lines = [self.title]
        for c in self.checks:
            line = f"  [{c.status.value}] {c.name}"
            if c.witness is not None:
                line += f"  witness={_fmt(c.witness)}"
            if c.detail:
                line += f"  ({c.detail})"
            lines.append(line)
        return "\n".join(lines)

    def to_dict(self) -> dict:
        return {
            "title": self.title,
            "ok": self.ok,
            "checks": [
                {
                    "name": c.name,
                    "status": c.status.value,
                    "witness": _jsonable(c.witness),
                    "detail": c.detail,
                }
                for c in self.checks
            ],
        }


def _fmt(value: Any) -> str:
    if isinstance(value, tuple):
        return "(" + ", ".join(_fmt(v) for v in value) + ")"
    return str(value)


def _jsonable(value: Any) -> Any:
    if value is None or isinstance(value, (bool, int, str)):
        return value
    if isinstance(value, (tuple, list)):
        return [_jsonable(v) for v in value]
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if hasattr(value, "labels") and not isinstance(value, type):
        labels = value.labels
        return list(labels() if callable(labels) else labels)
    return str(value)
