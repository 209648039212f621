"""Enumeration guards.

Exhaustive checks refuse to start when the instance count exceeds a bound.
The bound resolution order is: explicit argument, the NLIE_MAX_INSTANCES
environment variable, then the per-operation default.
"""

from __future__ import annotations

import os

ENV_VAR = "NLIE_MAX_INSTANCES"

DEFAULT_MAX_INSTANCES = 10**8
DEFAULT_MAX_ENUM = 10**6
DEFAULT_MAX_SUBSPACES = 10**5


class GuardExceeded(RuntimeError):
    """An enumeration would exceed its configured bound."""


def effective_limit(explicit: int | None, default: int) -> int:
    if explicit is not None:
        return int(explicit)
    env = os.environ.get(ENV_VAR)
    if env is not None:
        return int(env)
    return default


def check_instances(count: int, limit: int | None, default: int, what: str) -> int:
    bound = effective_limit(limit, default)
    if count > bound:
        raise GuardExceeded(f"{what}: {count} instances exceed the bound {bound}")
    return count
