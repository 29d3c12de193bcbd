"""Deterministic product-space enumeration with budgets and block iteration.

Flat indices run in row-major order, so iterating blocks visits assignment
tuples in lexicographic order of the axes.  Every exhaustive sweep in the
package funnels through ProductSpace so that budgets, determinism and
witness order are decided in one place.
"""

from __future__ import annotations

from typing import Iterator, Sequence

import numpy as np

from .errors import BudgetExceeded

DEFAULT_BUDGET = 10**8
DEFAULT_BLOCK = 1 << 20


class ProductSpace:
    def __init__(self, axes: Sequence[np.ndarray]):
        self.axes = [np.asarray(a) for a in axes]
        self.sizes = [int(a.shape[0]) for a in self.axes]
        self.periods = [1] * len(self.axes)
        for j in range(len(self.axes) - 2, -1, -1):
            self.periods[j] = self.periods[j + 1] * self.sizes[j + 1]
        self.size = 1
        for s in self.sizes:
            self.size *= s

    def require_within(self, budget: int | None, what: str = "enumeration") -> "ProductSpace":
        limit = DEFAULT_BUDGET if budget is None else budget
        if self.size > limit:
            raise BudgetExceeded(self.size, limit, what)
        return self

    def axis_values(self, flat: np.ndarray) -> list[np.ndarray]:
        out = []
        for a, size, period in zip(self.axes, self.sizes, self.periods):
            out.append(a[(flat // period) % size])
        return out

    def blocks(self, block: int = DEFAULT_BLOCK) -> Iterator[tuple[int, list[np.ndarray]]]:
        for start in range(0, self.size, block):
            flat = np.arange(start, min(start + block, self.size), dtype=np.int64)
            yield start, self.axis_values(flat)

    def tuple_at(self, flat: int) -> tuple[int, ...]:
        return tuple(
            int(a[(flat // period) % size])
            for a, size, period in zip(self.axes, self.sizes, self.periods)
        )
