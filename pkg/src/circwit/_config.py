"""Shared constants, size caps and error types."""

import os

# Every unordered antipodal pair is counted once in the d = n/2 constraint.
CONVENTION = "half-range-antipodal"
FORMAT_VERSION = 1

DEFAULT_MAX_N = 24
MAX_N_ENV = "CIRCWIT_MAX_N"


class CapExceeded(ValueError):
    """Requested order is above the configured size cap."""


def max_n(default=DEFAULT_MAX_N):
    value = os.environ.get(MAX_N_ENV)
    if value is None:
        return default
    try:
        return int(value)
    except ValueError:
        raise ValueError(f"{MAX_N_ENV} must be an integer, got {value!r}") from None


def check_cap(n, cap=None, what="order"):
    limit = max_n() if cap is None else cap
    if n > limit:
        raise CapExceeded(f"{what} n={n} exceeds cap {limit} (set {MAX_N_ENV} to override)")
