"""Complex gamma, Whittaker W and the G^{2,0}_{1,2} Meijer function.

Only the pieces the Lambert-series identity needs are implemented: the
Whittaker function is restricted to real parameters and a positive real
argument, and the Meijer function to the (m, n, p, q) = (2, 0, 1, 2) case.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special as _sp

from .errors import InvalidIndexError, PoleError, WhittakerUnderflow

LOG_2PI = math.log(2.0 * math.pi)
HALF_LOG_2PI = 0.5 * LOG_2PI

# Stirling coefficients B_{2j} / (2j (2j-1)), j = 1..10
_STIRLING = [float(_sp.bernoulli(2 * j)[-1]) / (2 * j * (2 * j - 1)) for j in range(1, 11)]
_STIRLING_MIN_ABS = 15.0


def _poles(z: np.ndarray) -> np.ndarray:
    return (z.imag == 0) & (z.real <= 0) & (z.real == np.round(z.real))


def log_gamma(s):
    """Principal branch of log Gamma(s) for complex ``s`` (scalar or array).

    The branch is the analytic continuation of the real logarithm from the
    positive axis, cut along the negative real axis.  Small arguments are
    shifted up with the recurrence Gamma(s+1) = s Gamma(s) until the Stirling
    series is accurate to well below binary64 resolution.
    """
    arr = np.asarray(s, dtype=complex)
    z = np.atleast_1d(arr).astype(complex)
    if np.any(_poles(z)):
        raise PoleError(f"log_gamma has a pole at non-positive integer {s!r}")

    # shift until |z| is large; Re z >= 0 is also required for points near the cut
    need = (np.abs(z) < _STIRLING_MIN_ABS) | (z.real < 0)
    shift = np.where(need, np.ceil(np.maximum(_STIRLING_MIN_ABS - z.real, 0.0)), 0.0).astype(int)
    acc = np.zeros_like(z)
    for j in range(int(shift.max(initial=0))):
        m = shift > j
        acc[m] += np.log(z[m] + j)
    w = z + shift

    inv = 1.0 / w
    inv2 = inv * inv
    series = np.zeros_like(w)
    for c in reversed(_STIRLING):
        series = series * inv2 + c
    out = (w - 0.5) * np.log(w) - w + HALF_LOG_2PI + series * inv - acc
    return out[0] if arr.ndim == 0 else out.reshape(arr.shape)


def gamma(s):
    """Gamma(s) for complex ``s``; real input with positive entries gives a real result."""
    arr = np.asarray(s)
    out = np.exp(log_gamma(arr))
    if not np.iscomplexobj(arr) and np.all(arr > 0):
        out = out.real
    return out[()] if np.ndim(out) == 0 else out


def stirling_abs_gamma(sigma, T):
    """Leading Stirling magnitude sqrt(2 pi) |T|^(sigma-1/2) exp(-pi |T| / 2)."""
    T = np.abs(T)
    return math.sqrt(2 * math.pi) * T ** (sigma - 0.5) * np.exp(-0.5 * math.pi * T)


# ---------------------------------------------------------------- Whittaker W

@dataclass(frozen=True)
class WhittakerParams:
    kappa: float
    mu: float
    z: float

    def __post_init__(self):
        if not self.z > 0:
            raise ValueError("Whittaker argument must be positive")

    @classmethod
    def for_weight(cls, k: int, n: int, beta: float) -> "WhittakerParams":
        """Indices attached to the transformed Lambert series, argument 4 pi n beta."""
        return cls(k / 2 + 1, k / 2 - 1, 4 * math.pi * n * beta)


def _logsumexp(v: np.ndarray) -> float:
    m = float(np.max(v))
    return m + math.log(math.fsum(np.exp(v - m)))


def _log_hyperu_quad(a: float, b: float, z: float, rtol: float = 1e-16) -> float:
    """log U(a, b, z) for a > 0 from the Laplace integral, trapezoid in log u.

    U = z^-a / Gamma(a) * int_0^inf e^-u u^(a-1) (1 + u/z)^(b-a-1) du.
    """
    L = math.log(1.0 / rtol) + 5.0
    p = b - a - 1.0
    h = 2.0 * math.pi * 1.3 / (L + 5.0)
    x_lo = -L / a - 1.0

    def logf(x):
        u = np.exp(x)
        return -u + a * x + p * np.log1p(u / z)

    # walk right past the peak until the integrand is negligible
    x_hi = 0.0
    peak = float(logf(np.array([x_lo, 0.0])).max())
    while True:
        v = float(logf(np.array(x_hi)))
        peak = max(peak, v)
        if v < peak - L and x_hi > 0:
            break
        x_hi += 0.5
    x = np.arange(math.floor(x_lo / h), math.ceil(x_hi / h) + 1) * h
    return -a * math.log(z) - float(_sp.gammaln(a)) + math.log(h) + _logsumexp(logf(x))


def _hyperu_series_int(a: float, n: int, z: float) -> float:
    # b = n + 1 with n >= 0: logarithmic series (Abramowitz-Stegun 13.1.6)
    lz = math.log(z)
    terms = []
    term = 1.0
    k = 0
    while True:
        if k > 0:
            term *= (a + k - 1) * z / ((n + k) * k)
        terms.append(term * (lz + _sp.digamma(a + k) - _sp.digamma(1 + k) - _sp.digamma(n + k + 1)))
        if k > 5 and abs(term) * (abs(lz) + 10.0 + math.log(k + n + 1)) < 1e-18 * abs(math.fsum(terms)):
            break
        if k > 5 and term == 0.0:
            break
        k += 1
        if k > 5000:
            raise ArithmeticError("U series failed to converge")
    head = (-1) ** (n + 1) * _sp.rgamma(a - n) / math.factorial(n) * math.fsum(terms)
    finite = []
    for j in range(1, n + 1):
        poch = 1.0
        for i in range(n - j):
            poch *= 1 - a + j + i
        finite.append(math.factorial(j - 1) * poch / math.factorial(n - j) * z ** (-j))
    return head + _sp.rgamma(a) * math.fsum(finite)


def _hyp1f1_series(a: float, b: float, z: float) -> float:
    terms = [1.0]
    term = 1.0
    k = 0
    while abs(term) > 1e-18 * abs(math.fsum(terms)) or k < 3:
        term *= (a + k) * z / ((b + k) * (k + 1))
        terms.append(term)
        k += 1
        if k > 5000:
            raise ArithmeticError("1F1 series failed to converge")
    return math.fsum(terms)


def _hyperu_series(a: float, b: float, z: float) -> float:
    nb = round(b)
    if abs(b - nb) < 1e-12 and nb >= 1:
        return _hyperu_series_int(a, nb - 1, z)
    return (_sp.gamma(1 - b) * _sp.rgamma(a - b + 1) * _hyp1f1_series(a, b, z)
            + _sp.gamma(b - 1) * _sp.rgamma(a) * z ** (1 - b) * _hyp1f1_series(a - b + 1, 2 - b, z))


def _hyperu_poly(m: int, b: float, z: float) -> float:
    # U(-m, b, z) is a polynomial of degree m
    terms = []
    for s in range(m + 1):
        poch = 1.0
        for i in range(m - s):
            poch *= b + s + i
        terms.append(math.comb(m, s) * poch * (-z) ** s)
    return (-1) ** m * math.fsum(terms)


def switchover(kappa: float, mu: float) -> float:
    """Argument below which W is evaluated from the U-function series."""
    a = abs(mu) - kappa + 0.5
    return 1.0 if a > 0 else max(1.0, 1.0 + 2.0 * abs(mu))


def log_whittaker_w(kappa: float, mu: float, z: float) -> tuple[float, float]:
    """Return (log|W_{kappa,mu}(z)|, sign) for real indices and z > 0.

    W = z^(mu+1/2) e^(-z/2) U(mu - kappa + 1/2, 1 + 2 mu, z).  For z at or
    above :func:`switchover` U comes from its Laplace integral (shifted by the
    contiguous relation in ``a`` when ``a <= 0``); below it from the series.
    """
    if not z > 0:
        raise ValueError("z must be positive")
    mu = abs(mu)  # W is even in mu
    a = mu - kappa + 0.5
    b = 1.0 + 2.0 * mu
    prefix = (mu + 0.5) * math.log(z) - 0.5 * z

    if a <= 0 and a == round(a):
        u = _hyperu_poly(int(-a), b, z)
    elif z < switchover(kappa, mu):
        u = _hyperu_series(a, b, z)
    elif a > 0:
        return prefix + _log_hyperu_quad(a, b, z), 1.0
    else:
        m = math.ceil(-a) + 1
        top = a + m
        cur = math.exp(_log_hyperu_quad(top, b, z))
        nxt = math.exp(_log_hyperu_quad(top + 1, b, z))
        for _ in range(m):
            # U(a-1) = -(b - 2a - z) U(a) - a (a - b + 1) U(a+1)
            cur, nxt = -(b - 2 * top - z) * cur - top * (top - b + 1) * nxt, cur
            top -= 1
        u = cur
    if u == 0.0:
        return -math.inf, 0.0
    return prefix + math.log(abs(u)), math.copysign(1.0, u)


def whittaker_w(p: WhittakerParams | float, mu: float | None = None, z: float | None = None) -> float:
    """W_{kappa,mu}(z); call as ``whittaker_w(params)`` or ``whittaker_w(kappa, mu, z)``."""
    kappa = p
    if isinstance(p, WhittakerParams):
        kappa, mu, z = p.kappa, p.mu, p.z
    logw, sign = log_whittaker_w(kappa, mu, z)
    if logw < -708.0:
        raise WhittakerUnderflow(
            f"W_{{{kappa},{mu}}}({z}) underflows (log|W| = {logw:.1f}); use log_whittaker_w")
    return sign * math.exp(logw)


# ------------------------------------------------------------- Meijer G^{2,0}_{1,2}

@dataclass(frozen=True)
class MeijerIndices:
    a1: float
    b1: float
    b2: float

    def __post_init__(self):
        for d in (self.a1 - self.b1, self.a1 - self.b2):
            if d >= 1 and d == round(d):
                raise InvalidIndexError(
                    f"a1 - b_j = {d} is a positive integer; poles are not separated")

    @classmethod
    def for_weight(cls, k: int) -> "MeijerIndices":
        return cls(0.5 - k, 0.0, 2.0 - k)

    @property
    def kappa(self) -> float:
        return 0.5 * (self.b1 + self.b2 + 1.0) - self.a1

    @property
    def mu(self) -> float:
        return 0.5 * (self.b1 - self.b2)


def log_meijer_g_2012(idx: MeijerIndices, z: float) -> tuple[float, float]:
    logw, sign = log_whittaker_w(idx.kappa, idx.mu, z)
    return 0.5 * (idx.b1 + idx.b2 - 1.0) * math.log(z) - 0.5 * z + logw, sign


def meijer_g_2012(idx: MeijerIndices, z: float) -> float:
    """G^{2,0}_{1,2}(a1; b1, b2 | z) = z^((b1+b2-1)/2) e^(-z/2) W_{kappa,mu}(z).

    kappa = (b1 + b2 + 1)/2 - a1 and mu = (b1 - b2)/2.  Underflow returns 0.
    """
    if not z > 0:
        raise ValueError("z must be positive")
    logg, sign = log_meijer_g_2012(idx, z)
    return sign * math.exp(logg) if logg > -745.0 else 0.0


def meijer_g_2012_integrand(idx: MeijerIndices, z: float, w):
    """Mellin-Barnes integrand Gamma(b1+w) Gamma(b2+w) z^-w / Gamma(a1+w)."""
    w = np.asarray(w, dtype=complex)
    return np.exp(log_gamma(idx.b1 + w) + log_gamma(idx.b2 + w)
                  - log_gamma(idx.a1 + w) - w * math.log(z))
