"""Exception types; the CLI maps each to its own exit status."""

from .parse import ParseError


class PreconditionError(ValueError):
    """Input violates a documented precondition (CLI exit status 3)."""


class InvariantError(AssertionError):
    """An internal invariant failed (CLI exit status 4)."""

    def __init__(self, name: str, detail: str = ""):
        self.name = name
        super().__init__(f"invariant '{name}' failed" + (f": {detail}" if detail else ""))


def check(cond: bool, name: str, detail: str = "") -> None:
    if not cond:
        raise InvariantError(name, detail)


__all__ = ["ParseError", "PreconditionError", "InvariantError", "check"]
