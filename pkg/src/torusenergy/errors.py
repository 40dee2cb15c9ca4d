"""Package-wide exception types."""


class UnsupportedOperationError(Exception):
    """Raised when a potential or operation cannot provide a requested quantity.

    Examples: a multidimensional transform for a 1-D-only potential family,
    or a certified tail bound for a divergent weighted coefficient sum.
    """
