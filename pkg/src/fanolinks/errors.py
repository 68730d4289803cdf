"""Exception hierarchy shared by all modules."""


class InputError(ValueError):
    """Malformed or out-of-contract input."""


class ParseError(InputError):
    """Polynomial text that does not match the grammar."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class UndefinedWeightError(InputError):
    """Weight of the zero polynomial was requested."""


class SubstitutionError(InputError):
    """A fractional substitution produced a non-integral or negative exponent."""


class NonTerminalError(ValueError):
    """A singularity check found a non-isolated or non-terminal point."""


class TruncationError(ValueError):
    """A germ predicate needs graded pieces beyond the retained truncation."""
