"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class RangeOverflowError(OverflowError):
    """A result exceeds the representable double range (e.g. e^h for h > 709)."""


class SimulationBudgetError(RuntimeError):
    """A requested simulation would exceed the configured compute budget."""


class TruncatedPathsError(RuntimeError):
    """Strict-mode estimate refused because some paths hit the horizon."""


class TableFormatError(ValueError):
    """A CSV file is not a table produced by this package, or is malformed."""
