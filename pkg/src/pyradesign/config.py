"""Runtime settings read from the environment."""

from __future__ import annotations

import os

from .errors import PyradesignError

THREADS_ENV = "PYRADESIGN_THREADS"


def worker_count() -> int:
    """Worker processes for parallel sweeps; ``PYRADESIGN_THREADS`` overrides the default of 1."""
    raw = os.environ.get(THREADS_ENV, "").strip()
    if not raw:
        return 1
    try:
        n = int(raw)
    except ValueError:
        raise PyradesignError(f"{THREADS_ENV} must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise PyradesignError(f"{THREADS_ENV} must be a positive integer, got {n}")
    return n
