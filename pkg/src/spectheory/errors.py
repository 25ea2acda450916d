"""Exception types shared by the whole package."""


class SpecTheoryError(Exception):
    """Base class for every error raised by this package."""


class AlphabetMismatch(SpecTheoryError):
    def __init__(self, left, right):
        super().__init__(f"alphabet mismatch: {list(left)} vs {list(right)}")
        self.left = left
        self.right = right


class ValidationError(SpecTheoryError):
    """A structure violates one of its invariants."""


class UndeclaredName(ValidationError):
    """An undeclared state, label or variable is referenced."""

    def __init__(self, kind, name, where=""):
        msg = f"undeclared {kind} {name!r}"
        if where:
            msg += f" in {where}"
        super().__init__(msg)
        self.kind = kind
        self.name = name


class UnguardedError(SpecTheoryError):
    """Normalization was asked to handle unguarded recursion."""


class NotDeterministic(SpecTheoryError):
    """The deterministic quotient was given a nondeterministic operand."""
