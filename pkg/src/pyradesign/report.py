"""Check lists and run reports."""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any


@dataclass
class Check:
    """One named verdict. Skipped checks count as passed but print as SKIP."""

    name: str
    passed: bool
    witness: Any = None
    skipped: bool = False

    def line(self) -> str:
        tag = "SKIP" if self.skipped else ("PASS" if self.passed else "FAIL")
        tail = "" if self.witness in (None, "") else f"  [{self.witness}]"
        return f"{tag}  {self.name}{tail}"


@dataclass
class CheckReport:
    """Named list of checks; ``ok`` only when every check passed."""

    title: str
    checks: list[Check] = field(default_factory=list)

    def add(self, name: str, passed: bool, witness: Any = None) -> Check:
        c = Check(name, bool(passed), witness)
        self.checks.append(c)
        return c

    def extend(self, other: CheckReport, prefix: str = "") -> None:
        for c in other.checks:
            self.checks.append(Check(prefix + c.name, c.passed, c.witness))

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def get(self, name: str) -> Check:
        return next(c for c in self.checks if c.name == name)

    def to_text(self) -> str:
        lines = [self.title]
        lines += ["  " + c.line() for c in self.checks]
        return "\n".join(lines)


def file_digest(path: str | Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


@dataclass
class RunReport:
    command: str
    inputs: dict[str, str] = field(default_factory=dict)
    checks: list[Check] = field(default_factory=list)
    timing: dict[str, int] = field(default_factory=dict)  # milliseconds
    data: dict[str, Any] = field(default_factory=dict)

    def add(self, name: str, passed: bool, witness: Any = None) -> Check:
        c = Check(name, bool(passed), witness)
        self.checks.append(c)
        return c

    def skip(self, name: str, reason: str) -> Check:
        c = Check(name, True, reason, skipped=True)
        self.checks.append(c)
        return c

    def absorb(self, rep: CheckReport, prefix: str = "") -> None:
        for c in rep.checks:
            self.checks.append(Check(prefix + c.name, c.passed, c.witness))

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def exit_code(self) -> int:
        return 0 if self.ok else 1

    def to_text(self) -> str:
        lines = [f"== {self.command}"]
        for name, digest in self.inputs.items():
            lines.append(f"   input {name}  sha256:{digest[:16]}")
        lines += ["   " + c.line() for c in self.checks]
        for phase, ms in self.timing.items():
            lines.append(f"   time  {phase}: {ms} ms")
        passed = sum(c.passed and not c.skipped for c in self.checks)
        skipped = sum(c.skipped for c in self.checks)
        tail = f", {skipped} skipped" if skipped else ""
        lines.append(f"== {passed}/{len(self.checks)} checks passed{tail}")
        return "\n".join(lines)

    def to_json(self) -> dict:
        out = asdict(self)
        out["ok"] = self.ok
        # witnesses may carry tuples or sets; keep the output plain JSON
        return json.loads(json.dumps(out, default=_plain))

    def write_json(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_json(), indent=2) + "\n", encoding="utf-8")


def _plain(obj):
    if isinstance(obj, (set, frozenset)):
        return sorted(obj)
    if isinstance(obj, tuple):
        return list(obj)
    return str(obj)
