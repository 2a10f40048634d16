"""Exception types shared across the package."""
import os

DEFAULT_DEGREE_CAP = 512


class ParseError(ValueError):
    """Malformed text input (multiquiver files, polynomials, words)."""


class MultiquiverError(ValueError):
    """A multiquiver or incidence matrix violates a structural condition."""


class DegreeBoundError(ArithmeticError):
    """A computation exceeded the configured degree guard."""


class CrossCheckError(RuntimeError):
    """Two independent computations of the same quantity disagree."""


class CyclePresent(ValueError):
    """No total order realizes a parity function; carries the offending cycle."""

    def __init__(self, message, cycle=()):
        super().__init__(message)
        self.cycle = tuple(cycle)


def degree_cap() -> int:
    raw = os.environ.get("TGW_DEGREE_CAP")
    if not raw:
        return DEFAULT_DEGREE_CAP
    try:
        cap = int(raw)
    except ValueError:
        raise ValueError(f"TGW_DEGREE_CAP must be an integer, got {raw!r}") from None
    if cap < 1:
        raise ValueError("TGW_DEGREE_CAP must be positive")
    return cap
