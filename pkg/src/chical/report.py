"""Check results shared by the identity checkers and the CLI."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .superjet import State, render


@dataclass
class Check:
    name: str
    passed: bool
    witness: Optional[dict] = None

    def __bool__(self) -> bool:
        return self.passed

    def as_dict(self) -> dict:
        d = {"name": self.name, "status": "pass" if self.passed else "fail"}
        if self.witness is not None:
            d["witness"] = self.witness
        return d


def compare(name: str, lhs: State, rhs: State, **context) -> Check:
    if lhs == rhs:
        return Check(name, True)
    witness = {k: _show(v) for k, v in context.items()}
    witness["lhs"] = render(lhs)
    witness["rhs"] = render(rhs)
    return Check(name, False, witness)


def _show(v):
    if isinstance(v, State):
        return render(v)
    if isinstance(v, (list, tuple)):
        return [_show(x) for x in v]
    if isinstance(v, dict):
        return {str(k): _show(x) for k, x in v.items()}
    if isinstance(v, (int, str, bool)) or v is None:
        return v
    return str(v)


@dataclass
class CheckGroup:
    """Conjunction of checks; keeps only the first failure as witness."""

    name: str
    count: int = 0
    failure: Optional[Check] = None
    details: list = field(default_factory=list)

    def add(self, check: Check) -> Check:
        self.count += 1
        if not check.passed and self.failure is None:
            self.failure = check
        return check

    def extend(self, checks) -> None:
        for c in checks:
            self.add(c)

    @property
    def passed(self) -> bool:
        return self.failure is None

    def result(self) -> Check:
        if self.failure is None:
            return Check(self.name, True, None)
        w = {"first_failure": self.failure.name}
        if self.failure.witness:
            w.update(self.failure.witness)
        return Check(self.name, False, w)
