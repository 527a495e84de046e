"""Run-wide numerical settings.

Two precision modes are supported.  ``standard`` targets the tolerances the
acceptance suite is written against; ``extended`` tightens every internal
truncation target and lets the quadrature oracles fall back to
multiprecision arithmetic more eagerly.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

WORKERS_ENV = "SIEGEL_LAMBERT_WORKERS"


@dataclass(frozen=True)
class Precision:
    name: str
    series_rtol: float      # relative tail target for truncated series
    quad_rtol: float        # target for vertical-line quadratures
    lfunc_rtol: float       # target for the theta-integral L evaluator
    zeta_rtol: float


STANDARD = Precision("standard", 1e-12, 1e-13, 1e-15, 1e-15)
EXTENDED = Precision("extended", 1e-15, 1e-15, 1e-16, 1e-16)

_MODES = {"standard": STANDARD, "extended": EXTENDED}


def precision(mode: str | Precision = "standard") -> Precision:
    if isinstance(mode, Precision):
        return mode
    try:
        return _MODES[mode]
    except KeyError:
        raise ValueError(f"unknown precision mode {mode!r}") from None


def default_workers() -> int:
    env = os.environ.get(WORKERS_ENV)
    if env:
        n = int(env)
        if n < 1:
            raise ValueError(f"{WORKERS_ENV} must be >= 1")
        return n
    return os.cpu_count() or 1


# acceptance thresholds, relative
IDENTITY_RTOL = 1e-4        # end-to-end residual against |LHS|
SWEEP_RTOL = 0.02           # alpha^k LHS against its alpha -> 0 limit
MELLIN_RTOL = 1e-8          # Lambert sum against the c-line quadrature
IK_RTOL = 1e-9              # Whittaker closed form against its line integral
FE_RTOL = 1e-6              # functional equation of the completed D
