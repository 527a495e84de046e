"""Trapezoidal quadrature along vertical lines Re(s) = c.

For an integrand analytic in a strip of half-width d around the line, the
trapezoid rule in Im(s) converges like exp(-2 pi d / h); the step is chosen
from d, the target accuracy and the oscillation rate of the x^{-s} factor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from ._numerics import fsum
from .errors import StepTooCoarseError, TailTooLargeError


@dataclass(frozen=True)
class ContourSpec:
    abscissa: float
    height: float
    step: float

    def __post_init__(self):
        if not (self.height > 0 and self.step > 0):
            raise ValueError("contour height and step must be positive")

    @property
    def nodes(self) -> np.ndarray:
        """Non-negative ordinates 0, h, 2h, ... up to the height."""
        return np.arange(int(math.floor(self.height / self.step)) + 1) * self.step

    def check_line(self, lo: float, hi: float, label: str) -> None:
        if not lo < self.abscissa < hi:
            raise ValueError(f"{label} abscissa must lie in ({lo}, {hi}); got {self.abscissa}")


def trapezoid_step(strip: float, oscillation: float, rtol: float) -> float:
    """Step h with discretisation error about exp(-2 pi strip / h) * e^{|osc| strip} <= rtol."""
    return 2.0 * math.pi / (abs(oscillation) + math.log(1.0 / rtol) / strip)


def line_integral(f: Callable[[np.ndarray], np.ndarray], spec: ContourSpec,
                  symmetric: bool = True, chunk: int = 4096) -> float | complex:
    """(1/2 pi i) int_{c - iT}^{c + iT} f(s) ds.

    ``f`` takes an array of points c + it.  With ``symmetric`` the integrand is
    assumed to satisfy f(conj s) = conj f(s), so only t >= 0 is sampled and the
    result is real.
    """
    t = spec.nodes
    h = spec.step
    c = spec.abscissa
    if symmetric:
        parts = []
        for i in range(0, len(t), chunk):
            v = np.asarray(f(c + 1j * t[i:i + chunk])).real
            parts.append(v)
        vals = np.concatenate(parts)
        vals[0] *= 0.5
        return h / math.pi * fsum(vals)
    tt = np.concatenate([-t[:0:-1], t])
    vals = np.concatenate([np.asarray(f(c + 1j * tt[i:i + chunk])) for i in range(0, len(tt), chunk)])
    return h / (2 * math.pi) * complex(fsum(vals.real), fsum(vals.imag))


@dataclass(frozen=True)
class LineIntegral:
    """Result of a vertical-line quadrature with its grid and error estimates."""

    value: float
    contour: ContourSpec
    error: float        # estimated discretisation error of the returned value
    tail: float         # bound on the neglected |t| > T part

    def __float__(self) -> float:
        return float(self.value)


def adaptive_line_integral(f: Callable[[np.ndarray], np.ndarray], c: float, step: float,
                           rtol: float, t_max: float = 600.0, chunk: int = 16, batch: int = 4,
                           envelope: Callable[[float], float] | None = None,
                           map_fn=map) -> LineIntegral:
    """(1/2 pi i) int_{(c)} f(s) ds for conjugate-symmetric f, with adaptive height.

    Trapezoid nodes t = j h and midpoints t = (j + 1/2) h are added chunk by
    chunk until the tail bound (2/pi^2) max(|f(c+iT)|, envelope(T)) falls below
    rtol |I|.  The midpoint rule's error is close to the negative of the
    trapezoid error, so their mean (the h/2 rule) is returned and half their
    gap is the error estimate for the h rule.  ``step`` should target roughly
    sqrt(rtol) for the h rule; a gap above that raises NonConvergenceError.
    ``map_fn`` evaluates chunks and may be a thread-pool map.
    """
    h = step
    trap: list[float] = []
    mid: list[float] = []
    j0 = 0
    while True:
        starts = [j0 + i * chunk for i in range(batch)]
        grids = [(np.arange(j, j + chunk) * h, (np.arange(j, j + chunk) + 0.5) * h) for j in starts]
        results = list(map_fn(lambda g: (np.asarray(f(c + 1j * g[0])), np.asarray(f(c + 1j * g[1]))), grids))
        last_mag = 0.0
        for ft, fm in results:
            trap.extend(ft.real)
            mid.extend(fm.real)
            last_mag = float(max(np.max(np.abs(ft)), np.max(np.abs(fm))))
        j0 = starts[-1] + chunk
        T = (j0 - 0.5) * h
        tv = np.array(trap)
        I_trap = h / math.pi * (fsum(tv[1:]) + 0.5 * tv[0])
        I_mid = h / math.pi * fsum(mid)
        I = 0.5 * (I_trap + I_mid)
        env = envelope(T) if envelope else 0.0
        tail = 2.0 / math.pi ** 2 * max(last_mag, env)
        if tail <= rtol * abs(I) and I != 0:
            break
        if T > t_max:
            raise TailTooLargeError(
                f"integrand not negligible by T={T:.1f}: tail bound {tail:.2e} vs |I| = {abs(I):.2e}", tail)
    gap = 0.5 * abs(I_trap - I_mid)
    if gap > 10 * math.sqrt(rtol) * abs(I):
        raise StepTooCoarseError(
            f"trapezoid and midpoint rules differ by {gap:.2e} (|I| = {abs(I):.2e}); step {h} too large")
    # the h/2 rule error is roughly the square of the relative h-rule gap
    err = max(gap * gap / abs(I), 1e-16 * abs(I))
    return LineIntegral(I, ContourSpec(c, T, 0.5 * h), err, tail)
