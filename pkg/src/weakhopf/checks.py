"""Uniform pass/fail bookkeeping for verification passes.

Every verification stage appends Check records (name, defining law, result,
witness on failure) to a CheckList; the CLI renders these directly and exit
status is derived from them.  Failures are report entries, never silent.
"""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class Check:
    name: str
    law: str
    passed: bool
    witness: str | None = None


class VerificationError(AssertionError):
    """An identity that is a hard precondition for later stages failed."""

    def __init__(self, checks):
        self.checks = checks
        bad = [c for c in checks if not c.passed]
        lines = ["%s: %s [%s]" % (c.name, c.witness or "failed", c.law) for c in bad]
        super().__init__("verification failed:\n" + "\n".join(lines))


@dataclass
class CheckList:
    title: str = ""
    items: list = field(default_factory=list)

    def add(self, name, law, passed, witness=None):
        self.items.append(Check(name, law, bool(passed),
                                None if passed else witness))
        return bool(passed)

    def extend(self, other):
        self.items.extend(other.items)

    @property
    def ok(self):
        return all(c.passed for c in self.items)

    def failures(self):
        return [c for c in self.items if not c.passed]

    def get(self, name):
        for c in self.items:
            if c.name == name:
                return c
        raise KeyError(name)

    def require(self):
        """Raise if anything failed; later stages depend on these laws."""
        if not self.ok:
            raise VerificationError(self.items)
        return self
