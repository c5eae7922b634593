"""Exception types shared across the package."""

from __future__ import annotations


class ZenolabError(Exception):
    """Base class for all package errors."""


class ValidationError(ZenolabError):
    """A precondition or structural invariant of an input failed."""


class SchemaError(ValidationError):
    """A scenario file violated the schema. Collects every violated field."""

    def __init__(self, problems: list[str]):
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))


class InvariantViolation(ZenolabError):
    """A runtime invariant that should hold mathematically was violated.

    Carries the name of the failed inequality and a detail mapping so the
    caller can print a replayable diagnostic instead of a bare message.
    """

    def __init__(self, name: str, **details):
        self.name = name
        self.details = details
        parts = [name] + [f"{k}={details[k]!r}" for k in sorted(details)]
        super().__init__(" ".join(parts))
