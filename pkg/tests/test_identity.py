"""Both sides of the Lambert-series identity, its quadrature oracles and the classical validators."""

import json
import math

import mpmath
import numpy as np
import pytest

from siegel_lambert.config import IDENTITY_RTOL, IK_RTOL, MELLIN_RTOL, SWEEP_RTOL
from siegel_lambert.contour import ContourSpec
from siegel_lambert.errors import TailTooLargeError, TruncationError
from siegel_lambert.identity import (TheoremReport, TransformPair, asymptotic_limit, asymptotic_sweep,
                                     c1_line_quadrature, hl_identity, hl_lhs, hl_rhs_partials,
                                     ik_closed_form, ik_closed_vs_quadrature, lambert_lhs,
                                     mellin_closure, mellin_quadrature_lhs, residue_closure, residue_Rk,
                                     residue_Rk_direct, rk_from_scalar, sweep_deviation_bound,
                                     verify_main_identity, vk_quadrature, whittaker_series_Vk,
                                     zagier_c0, zero_sum)
from siegel_lambert.lfunc import a_series, delta_tau, sk_petersson_coeffs
from siegel_lambert.series import CoefficientSeries
from siegel_lambert.zeta import bracket_zeros

# [DERIVED] mpmath prototype at 40 digits, alpha = 1, 100 zeros
LHS_AT_1 = 3.49026206119608387e-6
VK_AT_1 = 2.307589135548677e-6
RK_AT_1 = 2.7188660627647965e-6
ZSUM_AT_1 = -1.5361931371174e-6


def rel(a, b):
    return abs(a - b) / abs(b)


@pytest.fixture(scope="module")
def report1(inst10, zeros100):
    return verify_main_identity(inst10, 1.0, zeros100)


@pytest.fixture(scope="module")
def report1_20(inst10, zeros20):
    return verify_main_identity(inst10, 1.0, zeros20, oracle=False)


# ------------------------------------------------------------ left side

def test_transform_pair():
    assert TransformPair(4.0).beta == 0.25
    for bad in (0.0, -1.0, math.nan, math.inf, 1e-6):
        with pytest.raises(ValueError):
            TransformPair(bad)


def test_lambert_zero_coefficients():
    """[TRIVIAL] all-zero coefficients give 0."""
    assert lambert_lhs(CoefficientSeries((0,) * 10, 9.0), 1.0) == 0.0


def test_lambert_single_term():
    """[TRIVIAL] c = (1) gives exp(-4 pi alpha)."""
    c = CoefficientSeries((1,), 0.0)
    assert lambert_lhs(c, 0.7, N=1, rtol=1.0) == pytest.approx(math.exp(-4 * math.pi * 0.7), rel=1e-15)


def test_lambert_frozen(inst10):
    """[DERIVED] LHS(1) against the 40-digit prototype."""
    c = sk_petersson_coeffs(inst10, 60)
    assert rel(lambert_lhs(c, 1.0), LHS_AT_1) < 1e-14


def test_lambert_truncation_enforced(inst10):
    c = sk_petersson_coeffs(inst10, 60)
    with pytest.raises(TruncationError):
        lambert_lhs(c, 1.0, N=2)


@pytest.mark.parametrize("alpha", [0.5, 1.0, 2.0])
def test_mellin_closure(inst10, alpha):
    """[PAPER] the Lambert sum equals its c-line Mellin integral."""
    assert mellin_closure(inst10, alpha) <= MELLIN_RTOL


def test_mellin_height_doubling(inst10):
    """[DERIVED] doubling T on a fixed grid moves the result by < 1e-10 relative."""
    base = mellin_quadrature_lhs(inst10, 1.0)
    h = base.contour.step
    a = mellin_quadrature_lhs(inst10, 1.0, ContourSpec(12.0, 40.0, h)).value
    b = mellin_quadrature_lhs(inst10, 1.0, ContourSpec(12.0, 80.0, h)).value
    assert rel(a, b) < 1e-10


def test_mellin_fixed_height_too_small(inst10):
    with pytest.raises(TailTooLargeError):
        mellin_quadrature_lhs(inst10, 1.0, ContourSpec(12.0, 3.0, 0.1))


def test_mellin_rejects_line_left_of_pole(inst10):
    with pytest.raises(ValueError):
        mellin_quadrature_lhs(inst10, 1.0, ContourSpec(9.5, 40.0, 0.1))


def test_mellin_envelope_decays(inst10):
    """[PAPER] the integrand decays along the line like the Stirling envelope."""
    from siegel_lambert.identity import _mellin_integrand
    f = _mellin_integrand(inst10, math.log(4 * math.pi))
    mags = [abs(f(np.array([12 + 1j * t]))[0]) for t in (0.0, 10.0, 20.0, 40.0)]
    assert all(b < a for a, b in zip(mags, mags[1:]))
    assert mags[-1] < 1e-15 * mags[0]


# ------------------------------------------------------------ V_k, I_k, R_k

def test_vk_single_term(inst10):
    """[DERIVED] a = (1): V_k = beta^18/pi^1.5 x^-4.5 W_{6,4}(x) e^{-x/2} with mpmath.whitw."""
    a = CoefficientSeries((1,), 8.5)
    beta = 1.0
    x = 4 * math.pi * beta
    ref = float(beta ** 18 / mpmath.pi ** 1.5 * x ** -4.5 * mpmath.whitw(6, 4, x) * mpmath.exp(-x / 2))
    assert rel(whittaker_series_Vk(inst10, 1.0, N=1, a=a, rtol=1.0), ref) < 1e-13


def test_vk_frozen(inst10):
    assert rel(whittaker_series_Vk(inst10, 1.0), VK_AT_1) < 1e-12


@pytest.mark.parametrize("alpha", [1.0, 2.0])
def test_vk_against_line_integral(inst10, alpha):
    """[PAPER] the Whittaker series equals the reflected d1-line integral."""
    assert rel(vk_quadrature(inst10, alpha).value, whittaker_series_Vk(inst10, alpha)) < 1e-7


def test_vk_decays_as_beta_grows(inst10):
    """[PAPER] V_k vanishes as alpha -> 0, faster than any power of beta."""
    vals = [whittaker_series_Vk(inst10, 1 / b) * b ** 10 for b in (10.0, 20.0, 40.0)]
    assert all(abs(b) < 1e-20 * abs(a) for a, b in zip(vals, vals[1:]))


@pytest.mark.parametrize("n", [1, 2, 5])
@pytest.mark.parametrize("beta", [0.5, 1.0, 2.0])
def test_ik_closed_vs_quadrature(n, beta):
    pair = ik_closed_vs_quadrature(n, beta, 10)
    assert rel(pair.quadrature, pair.closed) <= IK_RTOL


def test_ik_depends_on_n_beta_only():
    """[TRIVIAL] I_k(n, beta) is a function of x = 4 pi n beta."""
    assert ik_closed_form(2, 1.0, 10) == ik_closed_form(4, 0.5, 10)
    assert ik_closed_form(5, 0.4, 12) == ik_closed_form(1, 2.0, 12)


def test_ik_rejects_bad_abscissa():
    from siegel_lambert.identity import ik_quadrature
    with pytest.raises(ValueError):
        ik_quadrature(1, 1.0, 10, ContourSpec(9.5, 30.0, 0.1))


def test_rk_zero_scalar():
    """[TRIVIAL] a vanishing Petersson product gives R_k = 0."""
    assert rk_from_scalar(0.0, 10, 1.0) == 0.0


def test_rk_consistency(inst10):
    """[PAPER] 90 <F1,F2> / (pi^2 alpha^k) = Gamma(k) Res D (4 pi alpha)^-k / zeta(4)."""
    for alpha in (0.3, 1.0, 2.5):
        assert rel(residue_Rk(inst10, alpha), residue_Rk_direct(inst10, alpha)) < 1e-14


def test_rk_frozen(inst10):
    assert rel(residue_Rk(inst10, 1.0), RK_AT_1) < 1e-13
    assert rel(residue_Rk(inst10, 0.5), 2 ** 10 * RK_AT_1) < 1e-13


# ------------------------------------------------------------ zero sum

def test_zero_sum_empty(inst10):
    assert zero_sum(inst10, 1.0, [], []) == []


def test_zero_sum_pairs_are_real(inst10, zeros20):
    """[TRIVIAL] R_rho + R_conj(rho) is real; the imaginary residue is rounding."""
    parts = zero_sum(inst10, 1.0, zeros20, bracket_zeros(zeros20))
    assert all(abs(p.imag) < 1e-12 * abs(ZSUM_AT_1) for p in parts)


def test_zero_terms_decay(inst10, zeros100):
    """[PAPER] |R_rho| against |Gamma(s0)| from Stirling: at most polynomial growth of the ratio."""
    from siegel_lambert.identity import r_rho
    from siegel_lambert.specfun import stirling_abs_gamma
    from siegel_lambert.zeta import check_simple
    zs = zeros100[::20]
    d = check_simple(zs)
    mags = np.array([abs(r_rho(inst10, 1.0, z.rho, dz)) for z, dz in zip(zs, d)])
    env = np.array([stirling_abs_gamma(8.25, z.gamma / 2) for z in zs])
    g = np.array([z.gamma for z in zs])
    slope = np.polyfit(np.log(g), np.log(mags / env), 1)[0]
    assert slope < 10
    assert np.all(np.diff(mags) < 0)


def test_zero_sum_frozen(report1):
    assert abs(report1.zero_sum - ZSUM_AT_1) < 1e-11 * abs(ZSUM_AT_1)


# ------------------------------------------------------------ end to end

def test_verify_main_identity(report1):
    """[PAPER] LHS = V_k + R_k + zero sum at alpha = 1 with 100 bracketed zeros."""
    assert abs(report1.residual) <= IDENTITY_RTOL * abs(report1.lhs)
    assert rel(report1.lhs, LHS_AT_1) < 1e-13
    assert rel(report1.v_k, VK_AT_1) < 1e-12
    assert report1.truncations["zero_count"] == 100
    assert report1.truncations["quad_T"] > 0 and report1.truncations["quad_step"] > 0


def test_residual_non_increasing(report1, report1_20):
    assert abs(report1.residual) <= abs(report1_20.residual)


@pytest.mark.parametrize("alpha", [0.5, 2.0])
def test_verify_other_alphas(inst10, zeros100, alpha):
    r = verify_main_identity(inst10, alpha, zeros100, oracle=False)
    assert abs(r.residual) <= IDENTITY_RTOL * abs(r.lhs)


def test_verify_fixed_truncation_too_short(inst10, zeros20):
    with pytest.raises(TruncationError):
        verify_main_identity(inst10, 1.0, zeros20, N=2, oracle=False)


def test_residue_closure(inst10, zeros100):
    """[PAPER] c-line minus c1-line minus R_k equals the bracketed zero sum."""
    out = residue_closure(inst10, 1.0, zeros100)
    assert out["gap"] < 1e-10 * abs(out["zero_sum"])


def test_scale_covariance(inst10, zeros20):
    """[TRIVIAL] C -> 2C doubles every component."""
    r1 = verify_main_identity(inst10, 1.0, zeros20, oracle=False)
    r2 = verify_main_identity(inst10.scaled(2.0), 1.0, zeros20, oracle=False)
    for x, y in ((r1.lhs, r2.lhs), (r1.v_k, r2.v_k), (r1.r_k, r2.r_k), (r1.zero_sum, r2.zero_sum)):
        assert rel(y, 2 * x) < 1e-12
    for p, q in zip(r1.zero_sum_partials, r2.zero_sum_partials):
        assert rel(q.cum, 2 * p.cum) < 1e-12


def test_report_json_fields(report1):
    d = json.loads(report1.to_json())
    assert set(d) == {"lhs", "v_k", "r_k", "zero_sum_partials", "residual", "truncations"}
    assert set(d["truncations"]) == {"n_terms", "zero_count", "quad_T", "quad_step"}
    assert d["zero_sum_partials"][0].keys() == {"bracket", "cum"}
    assert isinstance(report1, TheoremReport)


# ------------------------------------------------------------ asymptotics

@pytest.fixture(scope="module")
def sweep(inst10):
    return asymptotic_sweep(inst10, [0.1, 0.03, 0.01])


def test_sweep_within_two_percent(inst10, sweep):
    """[PAPER] alpha^k LHS tends to 90 <F1,F2> / pi^2."""
    assert rel(sweep[-1][1], asymptotic_limit(inst10)) <= SWEEP_RTOL


def test_sweep_within_zero_term_bound(inst10, sweep, zeros100):
    lim = asymptotic_limit(inst10)
    devs = [rel(v, lim) for _, v in sweep]
    bounds = [sweep_deviation_bound(inst10, a, zeros100) for a, _ in sweep]
    assert all(d <= b for d, b in zip(devs, bounds))
    assert all(b < a for a, b in zip(devs, devs[1:]))
    scaled = [d / a ** 1.75 for d, (a, _) in zip(devs, sweep)]
    assert all(b < a for a, b in zip(scaled, scaled[1:]))


def test_sweep_stable_under_more_terms(inst10):
    from siegel_lambert.identity import coefficient_length, ensure_coefficients
    n = coefficient_length(inst10, 0.01, 1e-12)
    big = ensure_coefficients(inst10, 2 * n)
    c = sk_petersson_coeffs(big, 2 * n)
    assert rel(lambert_lhs(c, 0.01, N=n), lambert_lhs(c, 0.01, N=2 * n)) < 1e-12


def test_sweep_rejects_increasing(inst10):
    with pytest.raises(ValueError):
        asymptotic_sweep(inst10, [0.01, 0.1])


def test_asymptotic_limit_is_rk_at_one(inst10):
    assert rel(asymptotic_limit(inst10), residue_Rk(inst10, 1.0)) < 1e-15


# ------------------------------------------------------------ Hardy-Littlewood

def test_hl_antisymmetry():
    """[TRIVIAL] swapping alpha and beta flips the sign of the left side."""
    assert hl_lhs(2.0) == pytest.approx(-hl_lhs(0.5), rel=1e-13)
    assert hl_lhs(1.0) == 0.0


def test_hl_self_dual_partials(zeros100):
    """[DERIVED] at alpha = beta = 1 each bracket term is real part of an imaginary number."""
    parts = hl_rhs_partials(1.0, zeros100, bracket_zeros(zeros100))
    assert abs(parts[-1]) < abs(parts[0]) or parts[0] == 0
    assert max(abs(p) for p in parts) < 1e-17


@pytest.mark.parametrize("alpha", [0.7, 1.5])
def test_hl_identity(alpha, zeros100):
    """[DERIVED] LHS against the bracketed zero sum; the gap sits at the rounding floor."""
    lhs, rhs = hl_identity(alpha, zeros100)
    assert abs(lhs - rhs) < 1e-13
    assert abs(lhs - rhs) < 1e-9 * abs(lhs)


def test_hl_rhs_antisymmetric(zeros100):
    br = bracket_zeros(zeros100)
    a = hl_rhs_partials(2.0, zeros100, br)[-1]
    b = hl_rhs_partials(0.5, zeros100, br)[-1]
    assert a == pytest.approx(-b, rel=1e-10)


# ------------------------------------------------------------ Zagier c0

def _c0_naive(y, N=400):
    t = delta_tau(N)
    return math.fsum(float(t[n]) ** 2 * math.exp(-4 * math.pi * n * y) for n in range(1, N + 1)) * y ** 12


@pytest.mark.parametrize("y", [1.0, 0.5, 0.1, 0.05])
def test_zagier_naive(y):
    """[DERIVED] the naive loop over exact tau(n)^2."""
    assert rel(zagier_c0(y), _c0_naive(y)) < 1e-12


def test_zagier_against_mpmath():
    y = mpmath.mpf("0.1")
    t = delta_tau(300)
    with mpmath.workdps(30):
        ref = y ** 12 * mpmath.fsum(mpmath.mpf(t[n]) ** 2 * mpmath.exp(-4 * mpmath.pi * n * y) for n in range(1, 301))
    assert rel(zagier_c0(0.1), float(ref)) < 1e-12


def test_zagier_y_one():
    """[DERIVED] c0(1) e^{4 pi} - 1 = 576 e^{-4 pi} + O(e^{-8 pi})."""
    q = math.exp(-4 * math.pi)
    assert abs(zagier_c0(1.0) / q - 1 - 576 * q) < 1e-6


def test_zagier_oscillates():
    """[PAPER] c0(y) is not monotone as y -> 0."""
    v = [zagier_c0(y) for y in (0.05, 0.02, 0.01)]
    d = np.diff(v)
    assert d[0] * d[1] < 0


def test_zagier_rejects_nonpositive():
    with pytest.raises(ValueError):
        zagier_c0(0.0)
