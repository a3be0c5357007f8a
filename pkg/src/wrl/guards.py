"""Desk-scale resource guards."""
from __future__ import annotations

import os

DEFAULT_MAX_ENUM = 2**20
MAX_CODE_SYMBOLS = 2**24


class ResourceLimitError(RuntimeError):
    """An enumeration or table would exceed the configured desk-scale limit."""

    def __init__(self, quantity: str, value: int, limit: int):
        self.quantity = quantity
        self.value = value
        self.limit = limit
        super().__init__(f"{quantity} = {value} exceeds the limit {limit}")


def max_enum() -> int:
    """Enumeration limit, overridable through ``WRL_MAX_ENUM``."""
    raw = os.environ.get("WRL_MAX_ENUM")
    if not raw:
        return DEFAULT_MAX_ENUM
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"WRL_MAX_ENUM must be an integer, got {raw!r}") from None
    if value < 1:
        raise ValueError("WRL_MAX_ENUM must be positive")
    return value


def check_enum(quantity: str, value: int, limit: int | None = None) -> None:
    limit = max_enum() if limit is None else limit
    if value > limit:
        raise ResourceLimitError(quantity, value, limit)
