"""Riemann zeta: evaluation, nontrivial zeros, bracketing, Moebius, Riesz sums."""

from __future__ import annotations

import json
import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy import special as _sp

from ._numerics import fsum
from .errors import (MissedZeroError, NonConvergenceError, PoleError,
                     SimplicityError, TruncationWarning)
from .series import CoefficientSeries
from .specfun import log_gamma

_EM_ORDER = 24
# B_{2j} / (2j)!, j = 1.._EM_ORDER + 1
_BERN = [float(_sp.bernoulli(2 * j)[-1]) / math.factorial(2 * j) for j in range(1, _EM_ORDER + 2)]
_TWO_PI_LD = np.longdouble(2) * np.arccos(np.longdouble(-1))

SIMPLICITY_THRESHOLD = 1e-6


def _pow_neg(logn: np.ndarray, s: np.ndarray) -> np.ndarray:
    """n^{-s} for a row of log n and a column of s.

    The phase t log n is reduced mod 2 pi in extended precision, which keeps
    the relative error near 1e-16 even for |t| of several hundred; ``logn``
    should itself be long double.
    """
    sigma = s.real[:, None]
    t = s.imag.astype(np.longdouble)[:, None]
    ph = np.fmod(t * logn.astype(np.longdouble)[None, :], _TWO_PI_LD).astype(float)
    return np.exp(-sigma * logn.astype(float)[None, :]) * (np.cos(ph) - 1j * np.sin(ph))


def _em_params(s: np.ndarray, rtol: float) -> tuple[int, int]:
    smax = float(np.max(np.abs(s), initial=0.0))
    M = max(_EM_ORDER // 2, int(math.ceil(-float(np.min(s.real, initial=0.0)))) + 2)
    M = min(M, _EM_ORDER)
    N = max(10, int(math.ceil((smax + 2 * M) / math.pi)))
    return N, M


def _check_pole(s: np.ndarray) -> None:
    if np.any(s == 1):
        raise PoleError("zeta has a pole at s = 1")


def _euler_maclaurin(s: np.ndarray, N: int, M: int, derivative: bool):
    logn = np.log(np.arange(1, N, dtype=np.longdouble))
    logN_ld = np.log(np.longdouble(N))
    logN = float(logN_ld)
    head = _pow_neg(logn, s)
    if derivative:
        head = -head * logn.astype(float)[None, :]
    sums = np.array([complex(fsum(r.real), fsum(r.imag)) for r in head])

    NmS = _pow_neg(np.array([logN_ld]), s)[:, 0]          # N^{-s}
    if derivative:
        tail = -logN * N * NmS / (s - 1) - N * NmS / (s - 1) ** 2 - 0.5 * logN * NmS
    else:
        tail = N * NmS / (s - 1) + 0.5 * NmS

    # corrections B_{2j}/(2j)! (s)_{2j-1} N^{-s-2j+1}; P, dP track the Pochhammer and its derivative
    P = s.copy()
    dP = np.ones_like(s)
    powN = NmS / N                                       # N^{-s-1}
    corr = np.zeros_like(s)
    for j in range(1, M + 1):
        if derivative:
            corr += _BERN[j - 1] * (dP - logN * P) * powN
        else:
            corr += _BERN[j - 1] * P * powN
        # advance (s)_{2j-1} -> (s)_{2j+1}
        for m in (2 * j - 1, 2 * j):
            dP = dP * (s + m) + P
            P = P * (s + m)
        powN = powN / (N * N)
    # first omitted correction, times |s + 2M + 1| / (sigma + 2M + 1)
    bound = np.abs(_BERN[M] * P * powN) * np.abs(s + 2 * M + 1) / (s.real + 2 * M + 1)
    if derivative:
        bound = bound * (logN + 2 * M + 2)
    return sums + tail + corr, bound


def _log_sin_half_pi(s: np.ndarray) -> np.ndarray:
    """log sin(pi s / 2) without overflow for large |Im s| (principal branch not needed)."""
    z = 0.5 * np.pi * s
    up = z.imag >= 0
    # sin z = -e^{-iz} (1 - e^{2iz}) / (2i) for Im z >= 0, and the conjugate form below
    zz = np.where(up, z, np.conj(z))
    v = -1j * zz + np.log1p(-np.exp(2j * zz)) - np.log(-2j)
    return np.where(up, v, np.conj(v))


def _em_evaluate(flat: np.ndarray, derivative: bool, rtol: float) -> np.ndarray:
    N, M = _em_params(flat, rtol)
    for _ in range(8):
        val, bound = _euler_maclaurin(flat, N, M, derivative)
        if np.all(bound <= rtol * np.maximum(np.abs(val), 1e-6)):
            return val
        N = int(N * 1.5) + 1
    raise NonConvergenceError("Euler-Maclaurin remainder bound not met")


def _evaluate(s, derivative: bool, rtol: float):
    arr = np.asarray(s, dtype=complex)
    flat = np.atleast_1d(arr).ravel()
    _check_pole(flat)
    # well left of Re s = 0 the Euler-Maclaurin head cancels badly; use the reflection formula
    left = (flat.real < -0.5) if not derivative else np.zeros(flat.shape, dtype=bool)
    val = np.empty_like(flat)
    if np.any(~left):
        val[~left] = _em_evaluate(flat[~left], derivative, rtol)
    if np.any(left):
        sl = flat[left]
        trivial = (sl.imag == 0) & (sl.real == np.round(sl.real)) & (np.round(sl.real) % 2 == 0)
        w = np.where(trivial, 0.5, sl)          # placeholder away from sin's zeros
        logchi = (w * math.log(2) + (w - 1) * math.log(math.pi) + _log_sin_half_pi(w)
                  + log_gamma(1 - w))
        refl = np.exp(logchi) * _em_evaluate(1 - w, False, rtol)
        refl = np.where(sl.imag == 0, refl.real, refl)
        val[left] = np.where(trivial, 0.0, refl)
    return val[0] if arr.ndim == 0 else val.reshape(arr.shape)


def zeta(s, rtol: float = 1e-15):
    """Riemann zeta by Euler-Maclaurin summation (scalar or array input).

    Term count N and order M are set from |s|; N grows until the remainder
    bound is below ``rtol`` relative to the value.
    """
    return _evaluate(s, False, rtol)


def zeta_derivative(s, rtol: float = 1e-15):
    """zeta'(s), from the term-wise differentiated Euler-Maclaurin formula."""
    return _evaluate(s, True, rtol)


# ------------------------------------------------------------------ Hardy Z

def hardy_theta(t):
    """Riemann-Siegel theta: Im log Gamma(1/4 + it/2) - (t/2) log pi."""
    t = np.asarray(t, dtype=float)
    return np.imag(log_gamma(0.25 + 0.5j * t)) - 0.5 * t * math.log(math.pi)


def hardy_z(t):
    t = np.asarray(t, dtype=float)
    return np.real(np.exp(1j * hardy_theta(t)) * zeta(0.5 + 1j * t))


def rvm_estimate(T: float) -> float:
    """Riemann-von Mangoldt main term (T/2pi) log(T/2pi e) + 7/8."""
    return T / (2 * math.pi) * math.log(T / (2 * math.pi * math.e)) + 7.0 / 8.0


def zero_count(T: float) -> int:
    """N(T): zeros with 0 < Im rho <= T, by the argument principle.

    N(T) = theta(T)/pi + 1 + S(T), with pi S(T) the continuous change of
    arg zeta along 2 + iT -> 1/2 + iT (Re zeta > 0 at sigma = 2).
    """
    if T <= 0:
        raise ValueError("T must be positive")
    for pts in (401, 4001):
        sig = np.linspace(2.0, 0.5, pts)
        ang = np.unwrap(np.angle(zeta(sig + 1j * T)))
        if np.max(np.abs(np.diff(ang))) < math.pi / 4:
            break
    else:
        raise NonConvergenceError(f"argument of zeta varies too fast near T={T}")
    n = float(hardy_theta(T)) / math.pi + 1.0 + ang[-1] / math.pi
    r = round(n)
    if abs(n - r) > 0.25:
        raise NonConvergenceError(f"T={T} is too close to a zero ordinate (N = {n:.3f})")
    return int(r)


# ------------------------------------------------------------------ zeros

@dataclass(frozen=True)
class ZetaZero:
    index: int
    gamma: float
    tol: float

    @property
    def rho(self) -> complex:
        return complex(0.5, self.gamma)

    def certificate(self) -> bool:
        """True when Z changes sign across [gamma - tol, gamma + tol]."""
        z = hardy_z(np.array([self.gamma - self.tol, self.gamma + self.tol]))
        return bool(z[0] * z[1] < 0)

    def to_dict(self) -> dict:
        return {"index": self.index, "gamma": self.gamma, "tol": self.tol}


def _sign_changes(t: np.ndarray) -> list[tuple[float, float]]:
    z = hardy_z(t)
    out = []
    for i in range(len(t) - 1):
        if z[i] == 0.0:
            raise NonConvergenceError(f"Z vanishes on a grid point t={t[i]}")
        if z[i] * z[i + 1] < 0:
            out.append((float(t[i]), float(t[i + 1])))
    return out


def _bisect(brackets: list[tuple[float, float]], tol: float) -> np.ndarray:
    if not brackets:
        return np.empty(0)
    a = np.array([b[0] for b in brackets])
    b = np.array([b[1] for b in brackets])
    za = hardy_z(a)
    while np.max(b - a) > 2 * tol:
        m = 0.5 * (a + b)
        zm = hardy_z(m)
        left = np.sign(zm) == np.sign(za)
        a = np.where(left, m, a)
        za = np.where(left, zm, za)
        b = np.where(left, b, m)
        # stop shrinking intervals that already reached the floating-point floor
        if np.all((b - a <= 2 * tol) | (0.5 * (a + b) == a) | (0.5 * (a + b) == b)):
            break
    return 0.5 * (a + b)


def _scan(t_lo: float, t_hi: float, step: float, workers: int) -> list[tuple[float, float]]:
    n = int(math.ceil((t_hi - t_lo) / step))
    grid = t_lo + step * np.arange(n + 1)
    cuts = np.linspace(0, n, max(1, workers) + 1).astype(int)
    # windows overlap on their shared endpoint so no sign change is lost
    windows = [grid[cuts[i]:cuts[i + 1] + 1] for i in range(len(cuts) - 1) if cuts[i + 1] > cuts[i]]
    if workers > 1 and len(windows) > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(_sign_changes, windows))
    else:
        parts = [_sign_changes(w) for w in windows]
    return [br for part in parts for br in part]


def _certified(index: int, gamma: float, tol: float) -> ZetaZero:
    """ZetaZero whose tol is widened until the sign change of Z is resolved above rounding."""
    t = max(tol, 2 * math.ulp(gamma))
    for _ in range(60):
        z = ZetaZero(index, gamma, t)
        if z.certificate():
            return z
        t *= 2
    raise NonConvergenceError(f"no sign change of Z resolved around gamma = {gamma}")


def find_zeros(count: int, tol: float = 1e-9, workers: int = 1,
               check_simplicity: bool = True) -> list[ZetaZero]:
    """First ``count`` zeros 1/2 + i gamma, certified against N(T).

    Sign changes of the Hardy Z-function are located on a grid, refined by
    bisection to ``tol``, and their number below a cut T between the
    count-th and next zero is compared with the argument-principle N(T).
    A mismatch triggers grid refinement and finally :class:`MissedZeroError`.
    The result does not depend on ``workers``.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    T_end = 20.0
    while rvm_estimate(T_end) < count + 2.5:
        T_end *= 1.2
    refine = 1
    while True:
        gap = 2 * math.pi / math.log(T_end / (2 * math.pi))
        step = min(0.5, gap / 8) / refine
        brackets = _scan(10.0, T_end, step, workers)
        if len(brackets) < count + 1:
            T_end *= 1.2
            continue
        gammas = _bisect(brackets[:count + 1], tol)
        T_cut = 0.5 * (gammas[count - 1] + gammas[count])
        n_arg = zero_count(T_cut)
        if n_arg == count:
            break
        if refine >= 16:
            raise MissedZeroError(
                f"sign-change census gives {count} zeros below T={T_cut:.6f}, argument principle gives {n_arg}")
        refine *= 4

    zeros = [_certified(i + 1, float(g), tol) for i, g in enumerate(gammas[:count])]
    if check_simplicity:
        check_simple(zeros)
    return zeros


def check_simple(zeros: list[ZetaZero], threshold: float = SIMPLICITY_THRESHOLD) -> np.ndarray:
    """Return zeta'(rho) for each zero; raise if any modulus is below ``threshold``.

    Each zero is evaluated on its own so the value does not depend on which
    other zeros share the call.
    """
    if not zeros:
        return np.empty(0, dtype=complex)
    d = np.array([zeta_derivative(z.rho) for z in zeros], dtype=complex)
    bad = np.abs(d) <= threshold
    if np.any(bad):
        i = int(np.argmax(bad))
        raise SimplicityError(
            f"|zeta'(rho)| = {abs(d[i]):.3e} at gamma = {zeros[i].gamma}; multiple zero suspected")
    return d


def zeros_to_json(zeros: list[ZetaZero]) -> str:
    return json.dumps([z.to_dict() for z in zeros])


def zeros_from_json(text: str) -> list[ZetaZero]:
    return [ZetaZero(int(d["index"]), float(d["gamma"]), float(d["tol"])) for d in json.loads(text)]


# ------------------------------------------------------------------ brackets

@dataclass(frozen=True)
class Bracket:
    members: tuple[int, ...]
    A0: float


def bracket_threshold(gamma: float, A0: float) -> float:
    return math.exp(-A0 * gamma / math.log(gamma))


def bracket_zeros(zeros: list[ZetaZero], A0: float = 1.0) -> list[Bracket]:
    """Group zeros whose ordinates differ by less than the sum of their thresholds.

    The relation is closed transitively, so each bracket is a run of
    consecutive zeros.
    """
    if A0 <= 0:
        raise ValueError("A0 must be positive")
    if not zeros:
        return []
    g = [z.gamma for z in zeros]
    if any(b <= a for a, b in zip(g, g[1:])):
        raise ValueError("zeros must be sorted by ordinate")
    eps = [bracket_threshold(x, A0) for x in g]
    parent = list(range(len(zeros)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    emax = max(eps)
    for i in range(len(g)):
        j = i + 1
        while j < len(g) and g[j] - g[i] < eps[i] + emax:
            if g[j] - g[i] < eps[i] + eps[j]:
                parent[find(j)] = find(i)
            j += 1
    groups: dict[int, list[int]] = {}
    for i in range(len(g)):
        groups.setdefault(find(i), []).append(zeros[i].index)
    return [Bracket(tuple(m), A0) for m in sorted(groups.values(), key=lambda m: m[0])]


# ------------------------------------------------------------------ Moebius, Riesz

def mobius_sieve(N: int) -> CoefficientSeries:
    """mu(1..N) by the linear sieve."""
    if N < 1:
        raise ValueError("N must be >= 1")
    mu = [0] * (N + 1)
    mu[1] = 1
    composite = bytearray(N + 1)
    primes: list[int] = []
    for i in range(2, N + 1):
        if not composite[i]:
            primes.append(i)
            mu[i] = -1
        for p in primes:
            ip = i * p
            if ip > N:
                break
            composite[ip] = 1
            if i % p == 0:
                mu[ip] = 0
                break
            mu[ip] = -mu[i]
    return CoefficientSeries(tuple(mu[1:]), 0.0, name="mobius")


def _mobius_floats(N: int, mu: CoefficientSeries | None) -> np.ndarray:
    if mu is None or len(mu) < N:
        mu = mobius_sieve(N)
    return mu.floats(N)


def riesz_sum(x: float, N: int, mu: CoefficientSeries | None = None, rtol: float = 1e-12) -> float:
    """Partial sum sum_{n<=N} mu(n)/n exp(-x/n^2).

    Using sum mu(n)/n = 0, the distance to the full sum is at most
    x/(2N^2) + |sum_{n<=N} mu(n)/n|; a :class:`TruncationWarning` is issued
    when that exceeds ``rtol`` times the partial sum.
    """
    if not x > 0:
        raise ValueError("x must be positive")
    m = _mobius_floats(N, mu)
    n = np.arange(1, N + 1, dtype=float)
    w = m / n
    val = fsum(w * np.exp(-x / n ** 2))
    bound = x / (2.0 * N * N) + abs(fsum(w))
    if bound > rtol * abs(val):
        warnings.warn(f"riesz_sum truncation bound {bound:.2e} exceeds {rtol:g} of the partial sum",
                      TruncationWarning, stacklevel=2)
    return val


def riesz_limit(x: float, N: int | None = None, mu: CoefficientSeries | None = None) -> float:
    """Full sum sum_n mu(n)/n exp(-x/n^2).

    Since sum mu(n)/n = 0 this is sum mu(n)/n expm1(-x/n^2).  Terms n <= N are
    summed directly; the tail is -x sum_{n>N} mu(n)/n^3, obtained exactly as
    1/zeta(3) minus the partial sum, plus a remainder below x^2 / (8 N^4).
    N defaults to the smallest value making that remainder negligible.
    """
    if not x > 0:
        raise ValueError("x must be positive")
    auto = N is None
    if auto:
        N = max(1000, int(math.ceil((x * x / 8e-18) ** 0.25)))
    while True:
        m = _mobius_floats(N, mu)
        n = np.arange(1, N + 1, dtype=float)
        w = m / n
        head = fsum(w * np.expm1(-x / n ** 2))
        tail3 = 1.0 / zeta(3.0).real - fsum(w / n ** 2)
        value = head - x * tail3
        rem = x * x / (8.0 * N ** 4)
        if rem <= 1e-15 * abs(value):
            break
        if not auto or mu is not None:
            warnings.warn(f"riesz_limit remainder bound {rem:.2e} is not negligible; increase N",
                          TruncationWarning, stacklevel=2)
            break
        # size N from the value just found
        N = int(math.ceil((x * x / (8.0 * 0.5e-15 * abs(value))) ** 0.25))
    return value
