"""Enumeration caps.

All caps are module-level and may be changed at runtime, e.g.
``expertrev.config.WORLD_BUDGET = 10**8``.  Functions taking a ``budget``
argument fall back to these values when it is ``None``.
"""

from .errors import BudgetExceeded

#: maximum number of propositional variables in a signature
MAX_VARIABLES = 4

#: maximum number of set partitions of the valuation set
PARTITION_BUDGET = 100_000

#: maximum number of worlds materialised by exact enumeration
WORLD_BUDGET = 10_000_000


def check_budget(what: str, size: int, cap: int | None, default: int) -> None:
    limit = default if cap is None else cap
    if size > limit:
        raise BudgetExceeded(what, size, limit)
