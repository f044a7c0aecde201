"""Process-level defaults."""

from __future__ import annotations

import os

DEFAULT_FUEL = 4000


def default_fuel() -> int:
    raw = os.environ.get("KERNEL_FUEL")
    if raw is None:
        return DEFAULT_FUEL
    try:
        return max(0, int(raw))
    except ValueError:
        return DEFAULT_FUEL
