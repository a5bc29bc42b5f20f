"""Exception hierarchy shared by every module."""


class ColexError(Exception):
    """Base class for all library errors."""


class FormatError(ColexError):
    """Malformed automaton text or binary payload."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class NotDeterministicError(ColexError):
    pass


class EmptyLanguageError(ColexError):
    pass


class AlphabetMismatchError(ColexError):
    pass


class CapExceededError(ColexError):
    """A search or construction hit its configured cap."""

    def __init__(self, message, cap=None):
        self.cap = cap
        super().__init__(message)


class BudgetError(ColexError):
    """Exact computation would need more table memory than allowed."""

    def __init__(self, message, needed_bytes=None, budget_bytes=None):
        self.needed_bytes = needed_bytes
        self.budget_bytes = budget_bytes
        super().__init__(message)


class AxiomViolationError(ColexError):
    pass


class NotMinimumError(ColexError):
    pass


class InversionError(ColexError):
    """The transform cannot be inverted to a unique automaton."""
