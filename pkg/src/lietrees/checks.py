"""Outcome records shared by the verification routines."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class Check:
    """One verified statement.  ``passed`` is ``None`` for a skipped check."""

    name: str
    passed: bool | None
    detail: str = ""
    witness: dict = field(default_factory=dict, compare=False)

    @property
    def status(self) -> str:
        return {True: "pass", False: "fail", None: "skipped"}[self.passed]


def check(name: str, ok: bool, detail: str = "", witness: dict | None = None) -> Check:
    return Check(name, bool(ok), detail, {} if ok else dict(witness or {}))


def all_passed(checks) -> bool:
    return all(c.passed for c in checks if c.passed is not None)
