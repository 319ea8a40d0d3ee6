"""Verification reports: one record per check, rendered as key=value lines."""

from __future__ import annotations

import time
from dataclasses import dataclass, field


@dataclass
class CheckResult:
    name: str
    status: str  # pass | fail | skipped
    window: str = ""
    witness: str = ""
    detail: dict = field(default_factory=dict)
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def line(self, timing: bool = True) -> str:
        parts = [f"check={self.name}", f"status={self.status}"]
        if self.window:
            parts.append(f"window={self.window}")
        for k in sorted(self.detail):
            parts.append(f"{k}={_quote(self.detail[k])}")
        if self.witness:
            parts.append(f"witness={_quote(self.witness)}")
        if timing:
            parts.append(f"seconds={self.seconds:.3f}")
        return " ".join(parts)


def _quote(v) -> str:
    s = str(v)
    if any(c.isspace() for c in s) or '"' in s:
        return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'
    return s


class Report:
    """Ordered list of check results.  Failures carry a witness string."""

    def __init__(self, title: str = ""):
        self.title = title
        self.checks: list[CheckResult] = []
        self.echo: dict = {}

    def record(self, name, passed, window="", witness="", **detail) -> CheckResult:
        status = passed if isinstance(passed, str) else ("pass" if passed else "fail")
        r = CheckResult(name, status, str(window), "" if status == "pass" else str(witness),
                        detail)
        self.checks.append(r)
        return r

    def extend(self, other: "Report", prefix: str = "") -> "Report":
        """Append other's checks; a subject in its title ("name (a,b)") becomes a detail."""
        subject = other.title.split(" ", 1)[1] if " " in other.title else ""
        for c in other.checks:
            detail = dict(c.detail)
            if subject and "subject" not in detail:
                detail["subject"] = subject
            self.checks.append(CheckResult(prefix + c.name, c.status, c.window, c.witness,
                                           detail, c.seconds))
        return self

    def timed(self, name, fn, window=""):
        """Run fn() -> (passed, witness, detail) and record it with wall time."""
        t0 = time.perf_counter()
        passed, witness, detail = fn()
        r = self.record(name, passed, window, witness, **(detail or {}))
        r.seconds = time.perf_counter() - t0
        return r

    @property
    def passed(self) -> bool:
        return all(c.status != "fail" for c in self.checks)

    def failures(self) -> list[CheckResult]:
        return [c for c in self.checks if c.status == "fail"]

    def get(self, name) -> CheckResult:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def counts(self) -> dict:
        out = {"pass": 0, "fail": 0, "skipped": 0}
        for c in self.checks:
            out[c.status] += 1
        return out

    def render(self, timing: bool = True) -> str:
        lines = []
        if self.title:
            lines.append(f"report={_quote(self.title)}")
        for k in sorted(self.echo):
            lines.append(f"config.{k}={_quote(self.echo[k])}")
        lines += [c.line(timing) for c in self.checks]
        n = self.counts()
        lines.append(f"summary pass={n['pass']} fail={n['fail']} skipped={n['skipped']}")
        return "\n".join(lines) + "\n"

    def __repr__(self):
        n = self.counts()
        return f"<Report {self.title!r} pass={n['pass']} fail={n['fail']}>"
