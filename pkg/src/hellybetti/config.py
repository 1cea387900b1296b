"""Enumeration budgets.

``HB_BUDGET`` overrides the defaults.  It is either a bare integer (taken as
the cell budget) or a comma-separated list such as
``cells=200000,family=16,search=500000``.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, replace

from .errors import InputError

ENV_VAR = "HB_BUDGET"


@dataclass(frozen=True)
class Budget:
    cells: int = 10**6  # deleted-product cells
    family: int = 20  # members for subset enumeration
    search: int = 10**6  # nodes visited by the monochromatic-subset search


_KEYS = {"cells", "family", "search"}


def parse_budget(text: str, base: Budget | None = None) -> Budget:
    base = base or Budget()
    text = text.strip()
    if not text:
        return base
    if text.isdigit():
        return replace(base, cells=int(text))
    updates = {}
    for part in text.split(","):
        key, sep, value = part.partition("=")
        key = key.strip()
        if not sep or key not in _KEYS or not value.strip().isdigit():
            raise InputError(f"bad budget entry {part!r}")
        updates[key] = int(value)
    return replace(base, **updates)


def default_budget() -> Budget:
    return parse_budget(os.environ.get(ENV_VAR, ""))
