class InvalidWordError(ValueError):
    """A word contains a letter outside {0, 1, 2} or is malformed."""


class ResourceLimitError(RuntimeError):
    """An enumeration hit its element or node cap."""


class SearchExhaustedError(RuntimeError):
    """A bounded search (power, window, word) found nothing within its bound."""
