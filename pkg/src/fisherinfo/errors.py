"""Exception types shared across the package."""


class ConfigError(ValueError):
    """Invalid parameters: out-of-range values or incompatible options."""


class FormatError(ValueError):
    """A density file that is missing, truncated or inconsistent with its header."""


class BudgetError(MemoryError):
    """An allocation would exceed the configured memory cap."""
