"""Deterministic compensated reductions shared by the evaluators."""

from __future__ import annotations

import math

import numpy as np


def fsum(values) -> float:
    """Correctly rounded sum of real values (order independent)."""
    return math.fsum(np.asarray(values, dtype=float).ravel())


def csum(values) -> complex:
    """Correctly rounded sum of complex values, componentwise."""
    v = np.asarray(values, dtype=complex).ravel()
    return complex(math.fsum(v.real), math.fsum(v.imag))


def cumulative_fsum(values) -> list[float]:
    # exact running partials: each partial is the rounded exact prefix sum
    out = []
    acc: list[float] = []
    for v in values:
        acc.append(float(v))
        out.append(math.fsum(acc))
    return out
