"""Finite coefficient prefixes with a declared growth exponent."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np


@dataclass(frozen=True)
class CoefficientSeries:
    """Values c_1..c_N, kept exact (ints) where possible, times a float ``scale``.

    ``growth_exponent`` is the claimed theta in |c_n| = O(n^theta); tail bounds
    use it to extrapolate beyond the stored prefix.
    """

    values: tuple
    growth_exponent: float
    scale: float = 1.0
    name: str = ""
    _floats: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(self.values))
        arr = np.array([float(v) for v in self.values], dtype=float) * self.scale
        if not np.all(np.isfinite(arr)):
            raise ValueError("coefficient series must be finite")
        arr.setflags(write=False)
        object.__setattr__(self, "_floats", arr)

    @classmethod
    def from_values(cls, values: Sequence, growth_exponent: float, **kw) -> "CoefficientSeries":
        return cls(tuple(values), growth_exponent, **kw)

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, n: int):
        """Exact (unscaled) c_n, 1-based."""
        if n < 1:
            raise IndexError("coefficient series are indexed from 1")
        return self.values[n - 1]

    def floats(self, N: int | None = None) -> np.ndarray:
        """Scaled floating-point values c_1..c_N."""
        return self._floats if N is None else self._floats[:N]

    def scaled(self, lam: float) -> "CoefficientSeries":
        return CoefficientSeries(self.values, self.growth_exponent, self.scale * lam, self.name)

    def truncated(self, N: int) -> "CoefficientSeries":
        return CoefficientSeries(self.values[:N], self.growth_exponent, self.scale, self.name)

    def bound_constant(self) -> float:
        """max_n |c_n| / n^theta over the stored prefix."""
        n = np.arange(1, len(self) + 1, dtype=float)
        return float(np.max(np.abs(self._floats) / n ** self.growth_exponent, initial=0.0))

    def fitted_slope(self) -> float:
        """Least-squares slope of log|c_n| against log n over [N/2, N] (nonzero terms)."""
        N = len(self)
        n = np.arange(N // 2, N + 1)
        n = n[n >= 1]
        v = np.abs(self._floats[n - 1])
        keep = v > 0
        if keep.sum() < 2:
            return 0.0
        return float(np.polyfit(np.log(n[keep]), np.log(v[keep]), 1)[0])

    def satisfies_growth(self, slack: float = 0.2) -> bool:
        return self.fitted_slope() <= self.growth_exponent + slack
