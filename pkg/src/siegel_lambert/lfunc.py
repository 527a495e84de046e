"""Arithmetic coefficients and L-function evaluation for Saito-Kurokawa instances.

The Rankin-Selberg series of a Saito-Kurokawa lift F of weight k is modelled as

    D(s) = C zeta(s-k+1) zeta(s-k+2) L(f, s),

f the normalised weight 2k-2 eigenform.  Coefficients are exact integers; the
scale C enters only when they are turned into floats.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from ._numerics import csum
from .errors import (InsufficientCoefficientsError, NonConvergenceError,
                     UnsupportedWeightError)
from .series import CoefficientSeries
from .specfun import log_gamma
from .zeta import mobius_sieve, zeta

LOG_2PI = math.log(2 * math.pi)

# E_w = 1 + EIS[w] * sum sigma_{w-1}(n) q^n, i.e. -2w/B_w
EISENSTEIN_CONSTANT = {4: 240, 6: -504, 8: 480, 10: -264, 14: -24}


# ------------------------------------------------------------ exact integer series

def _pentagonal(N: int) -> dict[int, int]:
    """Nonzero coefficients of prod_{m>=1} (1 - q^m) up to q^N."""
    p = {0: 1}
    j = 1
    while j * (3 * j - 1) // 2 <= N:
        sign = -1 if j % 2 else 1
        for g in (j * (3 * j - 1) // 2, j * (3 * j + 1) // 2):
            if g <= N:
                p[g] = sign
        j += 1
    return p


def _series_power(p: dict[int, int], alpha: int, N: int) -> list[int]:
    """Coefficients of P(q)^alpha (P(0) = 1) by the power recurrence

    n c_n = sum_{j=1}^n ((alpha + 1) j - n) p_j c_{n-j}.
    """
    terms = sorted((j, v) for j, v in p.items() if j > 0)
    c = [1] + [0] * N
    for n in range(1, N + 1):
        acc = 0
        for j, v in terms:
            if j > n:
                break
            acc += ((alpha + 1) * j - n) * v * c[n - j]
        c[n] = acc // n
    return c


def delta_tau(N: int) -> CoefficientSeries:
    """tau(1..N) from q prod (1 - q^m)^24, exact integers."""
    if N < 1:
        raise ValueError("N must be >= 1")
    c = _series_power(_pentagonal(N - 1), 24, N - 1)
    return CoefficientSeries(tuple(c), 5.5, name="tau")


def divisor_sigma(N: int, r: int) -> list[int]:
    """sigma_r(n) for n = 0..N (entry 0 unused)."""
    s = [0] * (N + 1)
    for d in range(1, N + 1):
        dr = d ** r
        for m in range(d, N + 1, d):
            s[m] += dr
    return s


def eisenstein(weight: int, N: int) -> list[int]:
    """q-expansion coefficients 0..N of the level-one Eisenstein series E_weight."""
    try:
        const = EISENSTEIN_CONSTANT[weight]
    except KeyError:
        raise UnsupportedWeightError(f"no integral Eisenstein series of weight {weight} tabulated") from None
    sig = divisor_sigma(N, weight - 1)
    return [1] + [const * sig[n] for n in range(1, N + 1)]


def _padded(series) -> list[int]:
    return [0] + list(series)


def dirichlet_mul(x: list, y: list) -> list:
    """Dirichlet convolution of two 1-based lists (entry 0 ignored), same length."""
    N = min(len(x), len(y)) - 1
    out = [0] * (N + 1)
    for d in range(1, N + 1):
        xd = x[d]
        if not xd:
            continue
        for m in range(1, N // d + 1):
            if y[m]:
                out[d * m] += xd * y[m]
    return out


def dirichlet_inverse(x: list) -> list:
    """Dirichlet inverse of a 1-based integer list with x[1] = +-1."""
    if x[1] not in (1, -1):
        raise ValueError("exact inverse needs x[1] = +-1")
    N = len(x) - 1
    inv = [0] * (N + 1)
    inv[1] = x[1]
    for n in range(2, N + 1):
        acc = 0
        for d in range(2, n + 1):
            if n % d == 0:
                acc += x[d] * inv[n // d]
        inv[n] = -acc * x[1]
    return inv


def at_squares(N: int, fn) -> list[int]:
    """1-based list with fn(j) at n = j^2 and 0 elsewhere."""
    v = [0] * (N + 1)
    j = 1
    while j * j <= N:
        v[j * j] = fn(j)
        j += 1
    return v


# ------------------------------------------------------------ eigenform and L(f, s)

@dataclass(frozen=True)
class EigenformSpec:
    weight: int
    coefficients: CoefficientSeries
    sign: int

    def hecke_multiplicative(self, n_max: int | None = None) -> bool:
        """Exact check a(mn) = a(m) a(n) for coprime m, n with mn <= n_max."""
        a = self.coefficients
        n_max = min(n_max or len(a), len(a))
        for m in range(2, n_max + 1):
            for n in range(m + 1, n_max // m + 1):
                if math.gcd(m, n) == 1 and a[m * n] != a[m] * a[n]:
                    return False
        return True

    def hecke_prime_square(self, p: int) -> bool:
        """a(p^2) = a(p)^2 - p^(w-1)."""
        a = self.coefficients
        return a[p * p] == a[p] ** 2 - p ** (self.weight - 1)

    def theta(self, y) -> np.ndarray:
        """g(y) = sum a_n exp(-2 pi n y) over the stored coefficients."""
        y = np.atleast_1d(np.asarray(y, dtype=complex))
        a = self.coefficients.floats()
        n = np.arange(1, len(a) + 1)
        return np.exp(-2 * math.pi * np.outer(y, n)) @ a

    def completed(self, s: complex, rtol: float = 1e-15) -> complex:
        """Lambda(f, s) = (2 pi)^-s Gamma(s) L(f, s)."""
        return _theta_mellin(self, complex(s), rtol)

    def L(self, s: complex, rtol: float = 1e-15) -> complex:
        s = complex(s)
        return self.completed(s, rtol) * np.exp(s * LOG_2PI - log_gamma(s))


def _fe_sign(weight: int, a: CoefficientSeries, y0: float = 1.2) -> int:
    """Sign eps of g(1/y) = eps y^w g(y), read off numerically at one point."""
    probe = EigenformSpec(weight, a, 1)
    lhs = probe.theta(1 / y0)[0].real
    rhs = y0 ** weight * probe.theta(y0)[0].real
    ratio = lhs / rhs
    eps = 1 if ratio > 0 else -1
    if abs(ratio - eps) > 1e-8:
        raise NonConvergenceError(
            f"theta relation fails (ratio {ratio:.12g}); not a level-one eigenform or too few coefficients")
    return eps


def eigenform_2km2(k: int, N: int = 400) -> EigenformSpec:
    """Normalised weight 2k-2 level-one eigenform, for k with dim S_{2k-2} = 1.

    f = Delta * E_{2k-14}, supported for k in {10, 12, 14}.
    """
    if k % 2 or k not in (10, 12, 14):
        raise UnsupportedWeightError(f"k={k}: weight {2 * k - 2} cusp space is not one-dimensional")
    if N < 40:
        raise InsufficientCoefficientsError("at least 40 coefficients are needed for the sign probe")
    tau = delta_tau(N).values
    E = eisenstein(2 * k - 14, N)
    f = [sum(E[j] * tau[n - 1 - j] for j in range(n)) for n in range(1, N + 1)]
    coeffs = CoefficientSeries(tuple(f), (2 * k - 3) / 2, name=f"f{2 * k - 2}")
    return EigenformSpec(2 * k - 2, coeffs, _fe_sign(2 * k - 2, coeffs))


def _theta_mellin(f: EigenformSpec, s: complex, rtol: float) -> complex:
    """Lambda(s) = int_R g(e^{x+i phi}) e^{(x+i phi) s} dx along a rotated ray.

    The rotation phi = sign(t)(pi/2 - eta) removes the exponential decay of
    Gamma(s) from the integrand; for x < 0 the modular relation
    g(y) = eps y^-w g(1/y) is used so only |y| >= 1 is sampled.  The
    integrand is analytic in a strip of half-width eta, which fixes the
    trapezoid step.  A half-grid comparison estimates the discretisation error.
    """
    w = f.weight
    sigma, t = s.real, s.imag
    eta = math.atan(w / (2 * abs(t))) if t != 0 else 0.5 * math.pi
    phi = math.copysign(0.5 * math.pi - eta, t) if t != 0 else 0.0
    L = math.log(1 / rtol)
    # shifting the ray by i*d inflates the integrand by e^{d|t|} and, through the
    # weakened damping cos(|phi| + d), by (cos phi / cos(|phi| + d))^max(sigma, w - sigma)
    d = np.linspace(0.01, 0.99, 99) * eta
    growth = max(sigma, w - sigma, 0.0) * np.log(math.cos(phi) / np.cos(abs(phi) + d))
    h = float(np.max(2 * math.pi * d / (L + d * abs(t) + growth)))
    rate = 2 * math.pi * math.sin(eta)

    def envelope(u, slope):
        return u * slope - rate * np.exp(u)

    # ranges where the integrand envelopes are within e^-(L+5) of their peak
    grid = np.linspace(0.0, 60.0, 6001)
    Ep, Em = envelope(grid, sigma), envelope(grid, w - sigma)
    top = max(Ep.max(), Em.max())
    def reach(E):
        idx = np.nonzero(E > top - L - 5)[0]
        return (grid[idx[-1]] if idx.size else 0.0) + h

    X, U = reach(Ep), reach(Em)

    a = f.coefficients.floats()
    theta_w = (w - 1) / 2
    n_max = 1
    while theta_w * math.log(n_max + 1) + 2 * math.log(n_max + 1) - rate * n_max > -L - 5:
        n_max += 1
    if n_max > len(a):
        raise NonConvergenceError(
            f"L(f, {s}) needs {n_max} coefficients, only {len(a)} available")
    n = np.arange(1, n_max + 1)
    an = a[:n_max]

    def integrand(x):
        z = x + 1j * phi
        pos = x >= 0
        y = np.exp(np.where(pos, z, -z))          # |y| >= 1 on both halves
        g = np.exp(-2 * math.pi * np.outer(y, n)) @ an
        return np.where(pos, g * np.exp(z * s), f.sign * g * np.exp(z * (s - w)))

    x = np.arange(-int(math.ceil(U / h)), int(math.ceil(X / h)) + 1) * h
    trap = integrand(x)
    mid = integrand(x[:-1] + 0.5 * h)
    I_trap, I_mid = h * csum(trap), h * csum(mid)
    # the midpoint error is about minus the trapezoid error; their mean is the h/2 rule
    I = 0.5 * (I_trap + I_mid)
    # near a zero of Lambda only an absolute error relative to the integrand scale is meaningful
    scale = h * float(np.sum(np.abs(trap)))
    if 0.5 * abs(I_trap - I_mid) > 1e-9 * max(abs(I), 1e-7 * scale):
        raise NonConvergenceError(
            f"theta integral for Lambda(f, {s}) did not converge (trapezoid/midpoint gap {abs(I_trap - I_mid):.1e})")
    return I


# ------------------------------------------------------------ Saito-Kurokawa instance

@dataclass(frozen=True)
class LFunctionModel:
    """D(s) = C prod zeta(s - shift) * L(f, s) with completion (2 pi)^-2s prod Gamma(s + g)."""

    zeta_shifts: tuple[int, ...]
    gamma_shifts: tuple[int, ...]
    f: EigenformSpec
    C: float
    reflection_center: int

    def reflect(self, s: complex) -> complex:
        return self.reflection_center - s

    def gamma_D(self, s: complex, rtol: float = 1e-15) -> complex:
        """Gamma(s) D(s) = C (2 pi)^s prod zeta(.) Lambda(f, s); avoids dividing by Gamma."""
        s = complex(s)
        z = np.prod([zeta(s - a) for a in self.zeta_shifts])
        return self.C * np.exp(s * LOG_2PI) * z * self.f.completed(s, rtol)

    def D(self, s: complex, rtol: float = 1e-15) -> complex:
        s = complex(s)
        z = np.prod([zeta(s - a) for a in self.zeta_shifts])
        return self.C * z * self.f.L(s, rtol)

    def completed(self, s: complex, rtol: float = 1e-15) -> complex:
        """D*(s) = (2 pi)^-2s Gamma(s) Gamma(s - k + 2) D(s)."""
        s = complex(s)
        extra = [g for g in self.gamma_shifts if g != 0]
        lg = sum(log_gamma(s + g) for g in extra)
        z = np.prod([zeta(s - a) for a in self.zeta_shifts])
        return self.C * z * self.f.completed(s, rtol) * np.exp(lg - s * LOG_2PI)


@dataclass(frozen=True)
class SKInstance:
    k: int
    f: EigenformSpec
    C: float = 1.0
    _cache: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.k % 2 or self.k < 10:
            raise UnsupportedWeightError("k must be even and at least 10")
        if self.f.weight != 2 * self.k - 2:
            raise ValueError("eigenform weight must be 2k - 2")
        if not self.C > 0:
            raise ValueError("normalisation C must be positive")

    @classmethod
    def build(cls, k: int = 10, N: int = 400, C: float = 1.0) -> "SKInstance":
        return cls(k, eigenform_2km2(k, N), C)

    def scaled(self, lam: float) -> "SKInstance":
        return SKInstance(self.k, self.f, self.C * lam)

    @cached_property
    def model(self) -> LFunctionModel:
        k = self.k
        return LFunctionModel((k - 1, k - 2), (0, 2 - k), self.f, self.C, 2 * k - 2)

    @property
    def residue(self) -> float:
        return residue_at_k(self)

    @property
    def petersson_scalar(self) -> float:
        """<F1, F2> = (k-1)! / (4^k pi^(k+2)) Res_{s=k} D(s)."""
        k = self.k
        return math.factorial(k - 1) / (4.0 ** k * math.pi ** (k + 2)) * self.residue

    def to_dict(self, N: int | None = None) -> dict:
        return {"k": self.k, "weight": self.f.weight, "C": self.C, "sign": self.f.sign,
                "N": N if N is not None else len(self.f.coefficients)}


def _mobius_list(N: int) -> list[int]:
    return _padded(mobius_sieve(max(N, 1)).values)


def _c_exact(inst: SKInstance, N: int) -> list[int]:
    key = ("c", N)
    if key not in inst._cache:
        k = inst.k
        if N > len(inst.f.coefficients):
            raise InsufficientCoefficientsError(
                f"{N} coefficients requested, eigenform has {len(inst.f.coefficients)}")
        u = [0] * (N + 1)
        for d in range(1, N + 1):
            for e in range(1, N // d + 1):
                u[d * e] += d ** (k - 1) * e ** (k - 2)
        b = dirichlet_mul(u, _padded(inst.f.coefficients.values[:N]))
        mu = _mobius_list(N)
        inst._cache[key] = dirichlet_mul(b, at_squares(N, lambda j: mu[j] * j ** (2 * k - 4)))
    return inst._cache[key]


def sk_petersson_coeffs(inst: SKInstance, N: int) -> CoefficientSeries:
    """c_1..c_N with sum c_n n^-s = D(s) / zeta(2s - 2k + 4); exact integers times C."""
    return CoefficientSeries(tuple(_c_exact(inst, N)[1:]), inst.k - 1.0, inst.C, name="c")


def a_series(inst: SKInstance, N: int) -> CoefficientSeries:
    """a(n) = sum_{d^2 e^2 m = n} d^(2k-4) mu(e) e^(2k-1) c_m, i.e. D(s) / zeta(2s + 1 - 2k).

    The mu(e) e^(2k-1) terms at n = e^2 make n^(k - 1/2) the natural growth exponent.
    """
    k = inst.k
    c = _c_exact(inst, N)
    mu = _mobius_list(N)
    a = dirichlet_mul(c, at_squares(N, lambda d: d ** (2 * k - 4)))
    a = dirichlet_mul(a, at_squares(N, lambda e: mu[e] * e ** (2 * k - 1)))
    return CoefficientSeries(tuple(a[1:]), k - 0.5, inst.C, name="a")


def eval_Lf(f: EigenformSpec, s: complex, rtol: float = 1e-15) -> complex:
    return f.L(s, rtol)


def eval_D(inst: SKInstance, s: complex, rtol: float = 1e-15) -> complex:
    """C zeta(s-k+1) zeta(s-k+2) L(f, s); PoleError at s = k."""
    return inst.model.D(s, rtol)


def completed_D(inst: SKInstance, s: complex, rtol: float = 1e-15) -> complex:
    return inst.model.completed(s, rtol)


def residue_at_k(inst: SKInstance) -> float:
    """Res_{s=k} D(s) = C zeta(2) L(f, k)."""
    if "residue" not in inst._cache:
        inst._cache["residue"] = inst.C * math.pi ** 2 / 6 * eval_Lf(inst.f, inst.k).real
    return inst._cache["residue"]


FE_SAMPLES = (9.5 + 2j, 7.25 + 10j, 11 - 17.5j, 4.3 + 24j, 13.1 + 30j)
RESIDUE_OFFSETS = (1e-6, 1e-7, 1e-8, 1e-9)    # the linear term is about 0.7 offset


def functional_equation_deviation(inst: SKInstance, s: complex, rtol: float = 1e-15) -> float:
    """|D*(s) - D*(2k-2-s)| / |D*(s)|."""
    a = completed_D(inst, s, rtol)
    b = completed_D(inst, 2 * inst.k - 2 - s, rtol)
    return abs(a - b) / abs(a)


def residue_deviation(inst: SKInstance, offset: float, rtol: float = 1e-15) -> float:
    """Relative gap between (s-k) D(s) at s = k + offset and the residue at k."""
    r = inst.residue
    s = inst.k + offset
    return abs((s - inst.k) * eval_D(inst, s, rtol) - r) / abs(r)


# ------------------------------------------------------------ export

def coefficients_csv(inst: SKInstance, N: int) -> str:
    tau = delta_tau(N)
    c = sk_petersson_coeffs(inst, N)
    a = a_series(inst, N)
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(["n", "tau", "c_n", "a_n"])
    for n in range(1, N + 1):
        wr.writerow([n, tau[n], repr(c.floats()[n - 1]) if inst.C != 1 else c[n],
                     repr(a.floats()[n - 1]) if inst.C != 1 else a[n]])
    return buf.getvalue()


def instance_json(inst: SKInstance, N: int | None = None) -> str:
    return json.dumps(inst.to_dict(N))
