"""Exception types shared across the package.

The CLI maps these onto exit codes: parse problems exit with 2, budget
exhaustion with 3, and internal invariant violations with 4.
"""


class DimensionError(ValueError):
    """A set member or index is out of range for its owning context."""


class ParseError(ValueError):
    """Malformed input file; carries a 1-based line number when known."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f" (line {line}" + (f", column {column}" if column is not None else "") + ")"
        super().__init__(message + where)


class BudgetExceededError(RuntimeError):
    """Concept enumeration hit the configured concept-count budget."""

    def __init__(self, budget):
        self.budget = budget
        super().__init__(f"concept budget of {budget} exceeded; raise the budget to enumerate this lattice")


class IncompleteLatticeError(ValueError):
    """An operation that needs the complete lattice was given a filtered one."""


class InvariantError(RuntimeError):
    """An internal consistency check failed."""
