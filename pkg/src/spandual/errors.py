"""Exception types shared across the package."""


class SpanDualError(Exception):
    """Base class for all library errors."""


class InvalidCategory(SpanDualError):
    """A composition table violates the category axioms."""


class InvalidFunctor(SpanDualError):
    pass


class InvalidTransformation(SpanDualError):
    pass


class InvalidTriple(SpanDualError):
    """Ingressives/egressives fail the adequacy axioms."""

    def __init__(self, message, witnesses=()):
        super().__init__(message)
        self.witnesses = tuple(witnesses)


class BudgetExceeded(SpanDualError):
    """An exhaustive search hit the configured candidate budget."""


class MissingLifts(SpanDualError):
    """A required supply of (co)cartesian lifts is absent."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class MissingCartesianLifts(MissingLifts):
    pass


class MissingLeftAdjoint(SpanDualError):
    def __init__(self, message, obj=None):
        super().__init__(message)
        self.obj = obj


class NotCocartesian(SpanDualError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NotOrtho(SpanDualError):
    pass


class NotSegal(SpanDualError):
    pass


class IncoherentDiagram(SpanDualError):
    pass


class IncoherentLaxStructure(SpanDualError):
    pass


class BaseMismatch(SpanDualError):
    pass


class ShapeMismatch(SpanDualError):
    pass


class ParseError(SpanDualError):
    def __init__(self, message, line=None, column=None):
        location = ""
        if line is not None:
            location = f" at line {line}" + (f", column {column}" if column is not None else "")
        super().__init__(message + location)
        self.line = line
        self.column = column
