"""Exception types raised by the jstdiff core.

Every anticipated failure maps to one subclass of JstdiffError so the CLI
can turn it into a single diagnostic line and a non-zero exit code.
"""


class JstdiffError(Exception):
    """Base class for all jstdiff errors."""


class MissingColumn(JstdiffError):
    def __init__(self, column, where=""):
        self.column = column
        suffix = f" in {where}" if where else ""
        super().__init__(f"column {column!r} not found{suffix}")


class ParseError(JstdiffError):
    def __init__(self, row, col, value):
        self.row = row
        self.col = col
        self.value = value
        super().__init__(
            f"cannot parse {value!r} as a number at row {row}, column {col!r}"
        )


class EmptyDataset(JstdiffError):
    pass


class DegenerateSplit(JstdiffError):
    pass


class EmptyHistogram(JstdiffError):
    pass


class EmptySide(JstdiffError):
    pass


class EmptyInput(JstdiffError):
    pass


class LengthMismatch(JstdiffError):
    pass


class DimensionMismatch(JstdiffError):
    pass


class UnknownNode(JstdiffError):
    pass


class StaleInputs(JstdiffError):
    pass


class SchemaError(JstdiffError):
    pass
