"""Both sides of the Lambert-series identity, its quadrature oracles and validators.

For a Saito-Kurokawa instance with coefficients c_n and alpha beta = 1,

    sum c_n e^{-4 pi n alpha} = V_k(alpha) + R_k(alpha) + sum_rho R_rho(alpha),

where V_k is a Whittaker-function series in a(n), R_k the residue at s = k and
R_rho the residue at s = rho/2 + k - 2 of

    F(s) = Gamma(s) D(s) (4 pi alpha)^-s / zeta(2s - 2k + 4).

The left side is also (1/2 pi i) int_{(c)} F(s) ds for c > k; moving the line
to c1 in (k-3, k-2) picks up the residues, and the c1-line integral equals
V_k after reflecting D and zeta.  Each of these steps has its own evaluator.
"""

from __future__ import annotations

import json
import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import mpmath
import numpy as np

from ._numerics import cumulative_fsum, fsum
from .config import MELLIN_RTOL, STANDARD, Precision
from .contour import ContourSpec, LineIntegral, adaptive_line_integral, line_integral
from .errors import (ConjugateAsymmetryWarning, InsufficientCoefficientsError,
                     OracleMismatchError, StepTooCoarseError, TailTooLargeError,
                     TruncationError)
from .lfunc import SKInstance, a_series, delta_tau, sk_petersson_coeffs
from .series import CoefficientSeries
from .specfun import log_gamma, log_whittaker_w, stirling_abs_gamma
from .zeta import (Bracket, ZetaZero, bracket_zeros, check_simple, find_zeros,
                   riesz_limit, zeta, zeta_derivative)

MIN_ALPHA = 1e-4
ZERO_TOL = 1e-14          # ordinate tolerance used when the identity finds its own zeros
VK_TAIL_MARGIN = 2.0     # W(x) <= x^kappa e^{-x/2} holds for large x only


@dataclass(frozen=True)
class TransformPair:
    alpha: float

    def __post_init__(self):
        if not (math.isfinite(self.alpha) and self.alpha >= MIN_ALPHA):
            raise ValueError(f"alpha must be a finite number >= {MIN_ALPHA}")

    @property
    def beta(self) -> float:
        return 1.0 / self.alpha


def _pair(p) -> TransformPair:
    return p if isinstance(p, TransformPair) else TransformPair(float(p))


# ------------------------------------------------------------ truncated series

def _tail_sum(K: float, theta: float, rate: float, N: int, extra: float = 0.0) -> float:
    """Bound on sum_{n>N} K n^theta (rate n)^extra e^{-rate n} by a geometric majorant."""
    n = N + 1
    first = K * n ** theta * (rate * n) ** extra * math.exp(-rate * n)
    q = ((n + 1) / n) ** (theta + extra) * math.exp(-rate)
    if q >= 1:
        return math.inf
    return first / (1 - q)


def terms_for_tail(c: CoefficientSeries, rate: float, rtol: float, extra: float = 0.0,
                   margin: float = 1.0) -> int:
    """Smallest N whose tail bound (growth exponent of ``c``, times ``margin``) is below rtol times the partial sum."""
    K = c.bound_constant()
    x = c.floats()
    n = np.arange(1, len(x) + 1)
    terms = x * (rate * n) ** extra * np.exp(-rate * n)
    partial = np.cumsum(terms)
    for N in range(1, len(x) + 1):
        if margin * _tail_sum(K, c.growth_exponent, rate, N, extra) <= rtol * abs(partial[N - 1]):
            return N
    raise InsufficientCoefficientsError(
        f"{len(x)} coefficients do not reach the tail target {rtol:g}")


def lambert_lhs(c: CoefficientSeries, pair, N: int | None = None, rtol: float = 1e-12) -> float:
    """sum_{n<=N} c_n exp(-4 pi n alpha) with a growth-exponent tail bound enforced.

    N defaults to the smallest admissible truncation.
    """
    pair = _pair(pair)
    rate = 4 * math.pi * pair.alpha
    if N is None:
        if not np.any(c.floats()):
            return 0.0
        N = terms_for_tail(c, rate, rtol)
    if N > len(c):
        raise InsufficientCoefficientsError(f"N={N} exceeds the {len(c)} stored coefficients")
    n = np.arange(1, N + 1)
    val = fsum(c.floats(N) * np.exp(-rate * n))
    tail = _tail_sum(c.bound_constant(), c.growth_exponent, rate, N)
    if tail > rtol * abs(val) and tail > 0:
        raise TruncationError(f"tail bound {tail:.2e} exceeds {rtol:g} of the partial sum {val:.6e}")
    return val


def _vk_terms(a: CoefficientSeries, k: int, beta: float, N: int) -> np.ndarray:
    kappa, mu = k / 2 + 1, k / 2 - 1
    out = np.empty(N)
    av = a.floats(N)
    for n in range(1, N + 1):
        x = 4 * math.pi * n * beta
        lw, sg = log_whittaker_w(kappa, mu, x)
        out[n - 1] = av[n - 1] * sg * math.exp(0.5 * (1 - k) * math.log(x) - 0.5 * x + lw) if av[n - 1] else 0.0
    return out


def _vk_sum(a: CoefficientSeries, k: int, beta: float, rtol: float, N: int | None) -> tuple[float, int]:
    """Raw Whittaker sum and its length; a free N grows until the tail bound holds."""
    rate = 4 * math.pi * beta
    K = a.bound_constant()
    fixed = N is not None
    if N is None:
        N = terms_for_tail(a, rate, rtol, extra=1.5, margin=VK_TAIL_MARGIN)
    while True:
        if N > len(a):
            raise InsufficientCoefficientsError(f"N={N} exceeds the {len(a)} stored a(n)")
        val = fsum(_vk_terms(a, k, beta, N))
        tail = VK_TAIL_MARGIN * _tail_sum(K, a.growth_exponent, rate, N, extra=1.5)
        if tail <= rtol * abs(val):
            return val, N
        if fixed:
            raise TruncationError(f"V_k tail bound {tail:.2e} exceeds {rtol:g} of {val:.6e}")
        N = min(len(a), int(N * 1.25) + 1) if N < len(a) else N + 1


def whittaker_series_Vk(inst: SKInstance, pair, N: int | None = None, rtol: float = 1e-12,
                        a: CoefficientSeries | None = None) -> float:
    """V_k = (beta^(2k-2) / pi^(3/2)) sum a(n) x^((1-k)/2) W_{k/2+1, k/2-1}(x) e^{-x/2}, x = 4 pi n beta.

    The terms behave like a(n) x^(3/2) e^{-x}; that envelope drives the tail bound.
    """
    pair = _pair(pair)
    if a is None:
        a = a_series(inst, min(len(inst.f.coefficients), 400))
    val, _ = _vk_sum(a, inst.k, pair.beta, rtol, N)
    return pair.beta ** (2 * inst.k - 2) / math.pi ** 1.5 * val


def rk_from_scalar(petersson_scalar: float, k: int, alpha: float) -> float:
    """R_k = 90 <F1, F2> / (pi^2 alpha^k); zero when the Petersson product vanishes."""
    if petersson_scalar == 0:
        return 0.0
    return 90.0 * petersson_scalar / (math.pi ** 2 * alpha ** k)


def residue_Rk(inst: SKInstance, pair) -> float:
    pair = _pair(pair)
    return rk_from_scalar(inst.petersson_scalar, inst.k, pair.alpha)


def residue_Rk_direct(inst: SKInstance, pair) -> float:
    """Gamma(k) Res_{s=k} D (4 pi alpha)^-k / zeta(4), with zeta(4) = pi^4/90."""
    pair = _pair(pair)
    k = inst.k
    return math.factorial(k - 1) * inst.residue * (4 * math.pi * pair.alpha) ** (-k) * 90.0 / math.pi ** 4


# ------------------------------------------------------------ zero sum

class BracketPartial(NamedTuple):
    bracket: int
    cum: float
    imag: float         # imaginary residue of the paired bracket sum


def r_rho(inst: SKInstance, pair, rho: complex, zeta_prime: complex) -> complex:
    """Residue of F at s0 = rho/2 + k - 2: Gamma(s0) D(s0) (4 pi alpha)^-s0 / (2 zeta'(rho))."""
    pair = _pair(pair)
    s0 = rho / 2 + inst.k - 2
    return inst.model.gamma_D(s0) * np.exp(-s0 * math.log(4 * math.pi * pair.alpha)) / (2 * zeta_prime)


def zero_sum(inst: SKInstance, pair, zeros: Sequence[ZetaZero], brackets: Sequence[Bracket],
             imag_tol: float = 1e-10, workers: int = 1) -> list[BracketPartial]:
    """Cumulative bracketed sums of R_rho + R_conj(rho), in ascending bracket order.

    Both members of each conjugate pair are evaluated independently, so the
    imaginary part of each bracket sum is a genuine symmetry check; it is
    reported and triggers a ConjugateAsymmetryWarning above ``imag_tol``
    relative to the bracket's terms.
    """
    if not brackets:
        return []
    pair = _pair(pair)
    by_index = {z.index: z for z in zeros}
    members = [by_index[i] for b in brackets for i in b.members]
    dz = check_simple(members)
    dzc = np.array([zeta_derivative(np.conj(z.rho)) for z in members], dtype=complex)

    def one(i):
        z = members[i]
        return r_rho(inst, pair, z.rho, dz[i]), r_rho(inst, pair, np.conj(z.rho), dzc[i])

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            res = list(ex.map(one, range(len(members))))
    else:
        res = [one(i) for i in range(len(members))]
    pos = {z.index: i for i, z in enumerate(members)}

    sums, imags = [], []
    for b in brackets:
        terms = [t for i in b.members for t in res[pos[i]]]
        re = fsum([t.real for t in terms])
        im = fsum([t.imag for t in terms])
        scale = max(abs(t) for t in terms)
        if abs(im) > imag_tol * scale:
            warnings.warn(f"bracket {b.members}: imaginary residue {im:.2e} exceeds {imag_tol:g}",
                          ConjugateAsymmetryWarning, stacklevel=2)
        sums.append(re)
        imags.append(im)
    cums = cumulative_fsum(sums)
    return [BracketPartial(j, cums[j], imags[j]) for j in range(len(brackets))]


# ------------------------------------------------------------ quadrature oracles

def _step(dist: float, log_x: float, rtol: float, growth: float = 0.0) -> float:
    """Trapezoid step for an h-rule error near sqrt(rtol): exp(-2 pi d / h) times the strip growth."""
    d = 0.8 * dist
    return 2 * math.pi * d / (0.5 * math.log(1 / rtol) + d * abs(log_x) + growth + 2.0)


def _pool_map(workers: int):
    if workers > 1:
        ex = ThreadPoolExecutor(max_workers=workers)
        return ex, ex.map
    return None, map


def _run_line(f, c, h, rtol, envelope, spec, workers) -> LineIntegral:
    if spec is not None:
        val = line_integral(f, spec)
        tail = 2.0 / math.pi ** 2 * max(float(np.abs(f(np.array([spec.abscissa + 1j * spec.height])))[0]),
                                        envelope(spec.height))
        if tail > rtol * abs(val):
            raise TailTooLargeError(
                f"height T={spec.height} too small: Stirling tail bound {tail:.2e} vs |I| = {abs(val):.2e}", tail)
        return LineIntegral(val, spec, math.nan, tail)
    ex, mapper = _pool_map(workers)
    try:
        for attempt in range(3):
            try:
                return adaptive_line_integral(f, c, h / 2 ** attempt, rtol, envelope=envelope, map_fn=mapper)
            except StepTooCoarseError:
                if attempt == 2:
                    raise
    finally:
        if ex is not None:
            ex.shutdown()


def _mellin_integrand(inst: SKInstance, log_x: float):
    k = inst.k

    def f(s: np.ndarray) -> np.ndarray:
        gd = np.array([inst.model.gamma_D(v) for v in s])
        return gd * np.exp(-s * log_x) / zeta(2 * s - 2 * k + 4)
    return f


def _mellin_envelope(inst: SKInstance, c: float, log_x: float):
    # Stirling |Gamma(c+iT)| times |D| on the line (bounded by zeta(c-k+1) zeta(c-k+2) sum|a_f| n^-c
    # for c > k; the L-factor is taken as its value at T) and |1/zeta(2s-2k+4)| <= zeta(2c-2k+4)/zeta(4c-4k+8)
    k = inst.k

    def env(T: float) -> float:
        s = complex(c, T)
        d = abs(inst.model.D(s)) if c > k else 0.0
        return stirling_abs_gamma(c, T) * d * math.exp(-c * log_x) / abs(zeta(2 * s - 2 * k + 4))
    return env


def mellin_quadrature_lhs(inst: SKInstance, pair, spec: ContourSpec | None = None,
                          rtol: float = 1e-13, workers: int = 1) -> LineIntegral:
    """(1/2 pi i) int_{(c)} Gamma(s) D(s) (4 pi alpha)^-s / zeta(2s - 2k + 4) ds, c > k.

    Without ``spec`` the line sits at c = max(k + 2, 4 pi alpha) (near the saddle of
    Gamma(s) x^-s) and the height grows until the Stirling tail bound is met.
    """
    pair = _pair(pair)
    k = inst.k
    log_x = math.log(4 * math.pi * pair.alpha)
    c = spec.abscissa if spec else max(k + 2.0, 4 * math.pi * pair.alpha)
    if not c > k:
        raise ValueError(f"c-line abscissa must exceed k={k}")
    f = _mellin_integrand(inst, log_x)
    dist = min(c - k, 3.0)
    growth = float(log_gamma(c + 0.8 * dist).real - log_gamma(c).real)
    h = _step(dist, log_x, rtol, growth)
    return _run_line(f, c, h, rtol, _mellin_envelope(inst, c, log_x), spec, workers)


def c1_line_quadrature(inst: SKInstance, pair, spec: ContourSpec | None = None,
                       rtol: float = 1e-13, workers: int = 1) -> LineIntegral:
    """The same integrand on Re s = c1 in (k-3, k-2); default c1 = k - 2.75."""
    pair = _pair(pair)
    k = inst.k
    c1 = spec.abscissa if spec else k - 2.75
    if not k - 3 < c1 < k - 2:
        raise ValueError(f"c1 must lie in ({k - 3}, {k - 2})")
    log_x = math.log(4 * math.pi * pair.alpha)
    f = _mellin_integrand(inst, log_x)
    dist = (k - 1.75) - c1      # zeros of zeta(2s - 2k + 4)
    h = _step(dist, log_x, rtol, growth=4.0)
    return _run_line(f, c1, h, rtol, lambda T: 0.0, spec, workers)


def vk_quadrature(inst: SKInstance, pair, spec: ContourSpec | None = None,
                  rtol: float = 1e-13, workers: int = 1) -> LineIntegral:
    """V_k as the d1-line integral

    (beta^(2k-2)/pi^(3/2)) (1/2 pi i) int Gamma(w) Gamma(w-k+2) D(w) (4 pi beta)^-w
    / (Gamma(w-k+1/2) zeta(2w+1-2k)) dw,  k < d1 < k+1 (default k + 3/4).
    """
    pair = _pair(pair)
    k, beta = inst.k, pair.beta
    d1 = spec.abscissa if spec else k + 0.75
    if not k < d1 < k + 1:
        raise ValueError(f"d1 must lie in ({k}, {k + 1})")
    log_x = math.log(4 * math.pi * beta)
    pref = beta ** (2 * k - 2) / math.pi ** 1.5

    def f(w: np.ndarray) -> np.ndarray:
        gd = np.array([inst.model.gamma_D(v) for v in w])
        ratio = np.exp(log_gamma(w - k + 2) - log_gamma(w - k + 0.5) - w * log_x)
        return pref * gd * ratio / zeta(2 * w + 1 - 2 * k)

    h = _step(d1 - k, log_x, rtol, growth=2.0)
    return _run_line(f, d1, h, rtol, lambda T: 0.0, spec, workers)


def mellin_closure(inst: SKInstance, pair, rtol: float = 1e-13, workers: int = 1) -> float:
    """Relative gap between the Lambert sum and its c-line quadrature."""
    pair = _pair(pair)
    need = coefficient_length(inst, pair, 1e-12)
    inst_n = ensure_coefficients(inst, need)
    lhs = lambert_lhs(sk_petersson_coeffs(inst_n, max(need, 60)), pair)
    q = mellin_quadrature_lhs(inst_n, pair, rtol=rtol, workers=workers)
    return abs(lhs - q.value) / abs(lhs)


class IkPair(NamedTuple):
    quadrature: float
    closed: float


def ik_closed_form(n: int, beta: float, k: int) -> float:
    """x^((1-k)/2) W_{k/2+1, k/2-1}(x) e^{-x/2}, x = 4 pi n beta."""
    x = 4 * math.pi * n * beta
    lw, sg = log_whittaker_w(k / 2 + 1, k / 2 - 1, x)
    return sg * math.exp(0.5 * (1 - k) * math.log(x) - 0.5 * x + lw)


def ik_quadrature(n: int, beta: float, k: int, spec: ContourSpec | None = None, rtol: float = 1e-13) -> float:
    """(1/2 pi i) int_{(d1)} Gamma(w) Gamma(w-k+2) x^-w / Gamma(w-k+1/2) dw, x = 4 pi n beta.

    The value is about x^(3/2) e^{-x} while the integrand is of size
    Gamma(d1) x^-d1 at t = 0, so large x loses many digits to cancellation;
    the working precision is raised with mpmath to cover the loss.
    """
    x = 4 * math.pi * n * beta
    d1 = spec.abscissa if spec else k + 0.75
    if not k < d1 < k + 1:
        raise ValueError(f"d1 must lie in ({k}, {k + 1})")
    log_x = math.log(x)
    log_scale = float((log_gamma(d1) + log_gamma(d1 - k + 2) - log_gamma(d1 - k + 0.5)).real) - d1 * log_x
    log_value = 1.5 * log_x - x
    loss = max(0.0, (log_scale - log_value) / math.log(10))
    eff_rtol = rtol * 10 ** (-loss)
    dps = int(20 + loss)
    dist = d1 - (k - 2)
    if spec is not None:
        h, T = spec.step, spec.height
    else:
        h = 2 * math.pi * 0.8 * dist / (math.log(1 / eff_rtol) + 0.8 * dist * (abs(log_x) + 2.0))
        # height where the Stirling envelope of the integrand drops below eff_rtol of its t = 0 size
        T = 10.0
        while (float((log_gamma(d1 + 1j * T) + log_gamma(d1 - k + 2 + 1j * T)
                      - log_gamma(d1 - k + 0.5 + 1j * T)).real) - d1 * log_x) - log_scale > math.log(eff_rtol) - 5:
            T += 5.0
    with mpmath.workdps(dps):
        mx = mpmath.mpf(x)
        lx = mpmath.log(mx)
        hh = mpmath.mpf(h)
        total = mpmath.mpf(0)
        J = int(T / h)
        for j in range(J + 1):
            w = mpmath.mpc(d1, j * hh)
            v = mpmath.exp(mpmath.loggamma(w) + mpmath.loggamma(w - k + 2)
                           - mpmath.loggamma(w - k + mpmath.mpf(1) / 2) - w * lx)
            total += v.real if j else v.real / 2
        return float(total * hh / mpmath.pi)


def ik_closed_vs_quadrature(n: int, beta: float, k: int, spec: ContourSpec | None = None,
                            rtol: float = 1e-13) -> IkPair:
    return IkPair(ik_quadrature(n, beta, k, spec, rtol), ik_closed_form(n, beta, k))


# ------------------------------------------------------------ report

@dataclass
class TheoremReport:
    lhs: float
    v_k: float
    r_k: float
    zero_sum_partials: list[BracketPartial]
    residual: float
    truncations: dict = field(default_factory=dict)

    @property
    def zero_sum(self) -> float:
        return self.zero_sum_partials[-1].cum if self.zero_sum_partials else 0.0

    def to_dict(self) -> dict:
        return {
            "lhs": self.lhs,
            "v_k": self.v_k,
            "r_k": self.r_k,
            "zero_sum_partials": [{"bracket": p.bracket, "cum": p.cum} for p in self.zero_sum_partials],
            "residual": self.residual,
            "truncations": {key: self.truncations.get(key)
                            for key in ("n_terms", "zero_count", "quad_T", "quad_step")},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _zeros(zeros) -> list[ZetaZero]:
    if isinstance(zeros, int):
        return find_zeros(zeros, tol=ZERO_TOL) if zeros > 0 else []
    return list(zeros)


def coefficient_length(inst: SKInstance, pair, rtol: float) -> int:
    """Number of c_n needed for the Lambert tail at this alpha (with a safety margin)."""
    c = sk_petersson_coeffs(inst, min(len(inst.f.coefficients), 200))
    theta = c.growth_exponent
    K = c.bound_constant()
    rate = 4 * math.pi * _pair(pair).alpha
    # the sum is at least of the order of its residue term for small alpha
    target = rtol * min(abs(c.floats(1)[0]) * math.exp(-rate), residue_Rk(inst, pair))
    N = 1
    while _tail_sum(K, theta, rate, N) > target:
        N = int(N * 1.2) + 1
    return int(N * 1.2) + 10


def ensure_coefficients(inst: SKInstance, N: int) -> SKInstance:
    if len(inst.f.coefficients) >= N:
        return inst
    from .lfunc import eigenform_2km2
    return SKInstance(inst.k, eigenform_2km2(inst.k, N), inst.C)


def verify_main_identity(inst: SKInstance, pair, zeros=100, N: int | None = None, A0: float = 1.0,
                         precision: Precision = STANDARD, oracle: bool = True,
                         workers: int = 1) -> TheoremReport:
    """Evaluate both sides of the identity and assemble a TheoremReport.

    ``zeros`` is a count or a list of ZetaZero.  With ``oracle`` the left side
    is also computed by c-line quadrature and an OracleMismatchError is raised
    if the two disagree by more than MELLIN_RTOL relative; the quadrature grid is
    recorded in the truncations.
    """
    pair = _pair(pair)
    rtol = precision.series_rtol
    zs = _zeros(zeros)
    brackets = bracket_zeros(zs, A0)

    n_lhs_need = coefficient_length(inst, pair, rtol) if N is None else N
    inst_n = ensure_coefficients(inst, max(n_lhs_need, 60))
    c = sk_petersson_coeffs(inst_n, min(len(inst_n.f.coefficients), max(n_lhs_need, 60)))
    a = a_series(inst_n, min(len(inst_n.f.coefficients), max(n_lhs_need, 60)))
    n_lhs = N if N is not None else terms_for_tail(c, 4 * math.pi * pair.alpha, rtol)

    lhs = lambert_lhs(c, pair, n_lhs, rtol)
    vk_raw, n_vk = _vk_sum(a, inst.k, pair.beta, rtol, N)
    v_k = pair.beta ** (2 * inst.k - 2) / math.pi ** 1.5 * vk_raw
    r_k = residue_Rk(inst_n, pair)
    partials = zero_sum(inst_n, pair, zs, brackets, workers=workers)
    zsum = partials[-1].cum if partials else 0.0
    residual = lhs - math.fsum([v_k, r_k, zsum])

    trunc = {"n_terms": max(n_lhs, n_vk), "zero_count": len(zs), "quad_T": None, "quad_step": None}
    if oracle:
        q = mellin_quadrature_lhs(inst_n, pair, rtol=precision.quad_rtol, workers=workers)
        trunc["quad_T"], trunc["quad_step"] = q.contour.height, q.contour.step
        if abs(q.value - lhs) > MELLIN_RTOL * abs(lhs):
            raise OracleMismatchError(
                f"Lambert sum {lhs!r} and c-line quadrature {q.value!r} disagree")
    return TheoremReport(lhs, v_k, r_k, partials, residual, trunc)


def residue_closure(inst: SKInstance, pair, zeros=100, A0: float = 1.0,
                    rtol: float = 1e-13, workers: int = 1) -> dict:
    """Residue-theorem check: c-line - c1-line - R_k against the bracketed zero sum."""
    pair = _pair(pair)
    zs = _zeros(zeros)
    qc = mellin_quadrature_lhs(inst, pair, rtol=rtol, workers=workers)
    q1 = c1_line_quadrature(inst, pair, rtol=rtol, workers=workers)
    r_k = residue_Rk(inst, pair)
    partials = zero_sum(inst, pair, zs, bracket_zeros(zs, A0), workers=workers)
    from_quad = qc.value - q1.value - r_k
    zsum = partials[-1].cum if partials else 0.0
    return {"c_line": qc.value, "c1_line": q1.value, "r_k": r_k,
            "zero_sum_from_quadrature": from_quad, "zero_sum": zsum,
            "gap": abs(from_quad - zsum)}


# ------------------------------------------------------------ asymptotics

def asymptotic_sweep(inst: SKInstance, alphas: Sequence[float], rtol: float = 1e-12) -> list[tuple[float, float]]:
    """(alpha, alpha^k * LHS(alpha)) for a decreasing list of alphas.

    As alpha -> 0 the scaled values tend to 90 <F1, F2> / pi^2.
    """
    alphas = list(alphas)
    if any(b >= a for a, b in zip(alphas, alphas[1:])):
        raise ValueError("alphas must be strictly decreasing")
    out = []
    for al in alphas:
        pair = TransformPair(al)
        need = coefficient_length(inst, pair, rtol)
        inst_n = ensure_coefficients(inst, need)
        c = sk_petersson_coeffs(inst_n, need)
        out.append((al, al ** inst.k * lambert_lhs(c, pair, None, rtol)))
    return out


def asymptotic_limit(inst: SKInstance) -> float:
    return 90.0 * inst.petersson_scalar / math.pi ** 2


def sweep_deviation_bound(inst: SKInstance, alpha: float, zeros: Sequence[ZetaZero]) -> float:
    """Bound on |alpha^k LHS / limit - 1| from the zero and Whittaker corrections.

    |R_rho(alpha)| scales like alpha^(-Re s0) = alpha^(-(k - 7/4)), so relative to
    R_k it is alpha^(7/4) |R_rho(1)| / R_k(1); the V_k part is evaluated directly.
    Zeros beyond the supplied list are ignored (their terms decay like e^{-pi gamma/4}).
    """
    d = check_simple(list(zeros))
    zsum = sum(2 * abs(r_rho(inst, 1.0, z.rho, dz)) for z, dz in zip(zeros, d))
    r1 = residue_Rk(inst, 1.0)
    vk = abs(whittaker_series_Vk(inst, alpha)) / residue_Rk(inst, alpha)
    return alpha ** 1.75 * zsum / r1 + vk


# ------------------------------------------------------------ classical validators

def _hl_side(a: float) -> float:
    return math.sqrt(a) * riesz_limit(math.pi * a * a)


def hl_lhs(pair) -> float:
    """sqrt(a) sum mu(n)/n exp(-pi (a/n)^2) - sqrt(b) sum mu(n)/n exp(-pi (b/n)^2)."""
    pair = _pair(pair)
    if pair.alpha == pair.beta:
        return 0.0
    return _hl_side(pair.alpha) - _hl_side(pair.beta)


def hl_rhs_partials(pair, zeros: Sequence[ZetaZero], brackets: Sequence[Bracket]) -> list[float]:
    """Bracketed partial sums of (1/(2 sqrt b)) sum_rho Gamma((1-rho)/2)/zeta'(rho) (b/sqrt pi)^(1-rho)."""
    pair = _pair(pair)
    b = pair.beta
    by_index = {z.index: z for z in zeros}
    log_y = math.log(b / math.sqrt(math.pi))
    sums = []
    for br in brackets:
        ms = [by_index[i] for i in br.members]
        d = check_simple(ms)
        terms = []
        for z, dz in zip(ms, d):
            for rho, zp in ((z.rho, dz), (np.conj(z.rho), np.conj(dz))):
                terms.append(np.exp(log_gamma((1 - rho) / 2) + (1 - rho) * log_y) / zp)
        sums.append(fsum([t.real for t in terms]) / (2 * math.sqrt(b)))
    return cumulative_fsum(sums)


def hl_identity(pair, zeros=100, N: int | None = None, A0: float = 1.0) -> tuple[float, float]:
    """(LHS, RHS) of the Hardy-Littlewood identity with alpha beta = 1.

    The Moebius sums are completed exactly (``riesz_limit``), so ``N`` only
    caps the direct part; the RHS is the last bracketed partial sum.
    """
    pair = _pair(pair)
    zs = _zeros(zeros)
    partials = hl_rhs_partials(pair, zs, bracket_zeros(zs, A0))
    if N is None:
        lhs = hl_lhs(pair)
    else:
        lhs = (math.sqrt(pair.alpha) * riesz_limit(math.pi * pair.alpha ** 2, N)
               - math.sqrt(pair.beta) * riesz_limit(math.pi * pair.beta ** 2, N)) if pair.alpha != pair.beta else 0.0
    return lhs, (partials[-1] if partials else 0.0)


def zagier_c0(y: float, N: int | None = None, rtol: float = 1e-12, tau: CoefficientSeries | None = None) -> float:
    """c0(y) = y^12 sum_{n<=N} tau(n)^2 exp(-4 pi n y)."""
    if not y > 0:
        raise ValueError("y must be positive")
    rate = 4 * math.pi * y
    if tau is None:
        need = 20
        while _tail_sum(1.0, 11.5, rate, need) > rtol * math.exp(-rate) * 1e-3:
            need = int(need * 1.2) + 1
        tau = delta_tau(max(need, N or 0))
    sq = CoefficientSeries(tuple(t * t for t in tau.values), 11.5)
    return y ** 12 * lambert_lhs(sq, y, N, rtol)
