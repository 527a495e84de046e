"""Acceptance suite: one test per criterion on the k = 10 instance with C = 1.

Each test records a PASS/FAIL line; the lines are printed in the terminal
summary (see conftest.py) and, when run as a script, to stdout.
"""

import math
import time

import mpmath
import numpy as np
import pytest

from siegel_lambert.config import FE_RTOL, IDENTITY_RTOL, IK_RTOL, MELLIN_RTOL, SWEEP_RTOL
from siegel_lambert.identity import (ZERO_TOL, asymptotic_limit, asymptotic_sweep, hl_rhs_partials,
                                     ik_closed_vs_quadrature, lambert_lhs, mellin_quadrature_lhs,
                                     residue_Rk, residue_Rk_direct, sweep_deviation_bound,
                                     verify_main_identity, zagier_c0, coefficient_length,
                                     ensure_coefficients)
from siegel_lambert.lfunc import (FE_SAMPLES, RESIDUE_OFFSETS, SKInstance, a_series, at_squares,
                                  delta_tau, dirichlet_inverse, dirichlet_mul,
                                  functional_equation_deviation, residue_deviation,
                                  sk_petersson_coeffs)
from siegel_lambert.zeta import bracket_zeros, find_zeros, mobius_sieve, zero_count

RESULTS: dict[int, str] = {}


def record(n: int, ok: bool, detail: str) -> None:
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}"
    RESULTS[n] = line
    print(line)
    assert ok, line


@pytest.fixture(scope="module")
def inst():
    return SKInstance.build(10, 400)


@pytest.fixture(scope="module")
def zeros():
    return find_zeros(100, tol=ZERO_TOL)


def test_criterion_1_mellin_closure(inst):
    gaps, times = [], []
    for alpha in (0.5, 1.0, 2.0):
        t0 = time.perf_counter()
        need = coefficient_length(inst, alpha, 1e-12)
        inst_n = ensure_coefficients(inst, need)
        lhs = lambert_lhs(sk_petersson_coeffs(inst_n, max(need, 60)), alpha)
        q = mellin_quadrature_lhs(inst_n, alpha).value
        times.append(time.perf_counter() - t0)
        gaps.append(abs(lhs - q) / abs(lhs))
    ok = max(gaps) <= MELLIN_RTOL and max(times) < 120
    record(1, ok, f"max rel gap {max(gaps):.2e} (tol {MELLIN_RTOL:g}), slowest {max(times):.1f}s")


def test_criterion_2_whittaker_closure():
    gaps = []
    t0 = time.perf_counter()
    for n in (1, 2, 5):
        for beta in (0.5, 1.0, 2.0):
            q, c = ik_closed_vs_quadrature(n, beta, 10)
            gaps.append(abs(q - c) / abs(c))
    dt = time.perf_counter() - t0
    record(2, max(gaps) <= IK_RTOL and dt < 60, f"max rel gap {max(gaps):.2e} (tol {IK_RTOL:g}), {dt:.1f}s")


def test_criterion_3_functional_equation(inst):
    assert len(FE_SAMPLES) == 5 and all(abs(s.imag) <= 30 for s in FE_SAMPLES)
    devs = [functional_equation_deviation(inst, s) for s in FE_SAMPLES]
    record(3, max(devs) <= FE_RTOL, f"max deviation {max(devs):.2e} (tol {FE_RTOL:g})")


def test_criterion_4_residue(inst):
    devs = [residue_deviation(inst, o) for o in RESIDUE_OFFSETS]
    shrinking = len(devs) == 4 and all(b < a for a, b in zip(RESIDUE_OFFSETS, RESIDUE_OFFSETS[1:]))
    rk = [abs(residue_Rk(inst, a) - residue_Rk_direct(inst, a)) / residue_Rk(inst, a) for a in (0.5, 1.0, 2.0)]
    ok = shrinking and max(devs) <= 1e-6 and max(rk) <= 4 * np.finfo(float).eps
    record(4, ok, f"limit deviations {', '.join(f'{d:.1e}' for d in devs)}; R_k identity {max(rk):.1e}")


def test_criterion_5_zero_census():
    zs = find_zeros(50, tol=ZERO_TOL)
    certified = all(z.certificate() for z in zs)
    below = [z for z in find_zeros(30, tol=1e-10) if z.gamma < 100]
    n_arg = zero_count(100.0)
    with mpmath.workdps(30):
        a, b = mpmath.mpf(14), mpmath.mpf("14.5")
        while b - a > mpmath.mpf("1e-20"):
            m = (a + b) / 2
            if mpmath.siegelz(a) * mpmath.siegelz(m) <= 0:
                b = m
            else:
                a = m
        g1 = float((a + b) / 2)
    err = abs(zs[0].gamma - g1)
    ok = certified and len(zs) == 50 and n_arg == len(below) == 29 and err <= 1e-8
    record(5, ok, f"50 certified={certified}; N(100)={n_arg}, sign changes={len(below)}; gamma_1 error {err:.1e}")


def test_criterion_6_end_to_end(inst, zeros):
    t0 = time.perf_counter()
    r100 = verify_main_identity(inst, 1.0, zeros)
    dt = time.perf_counter() - t0
    r20 = verify_main_identity(inst, 1.0, zeros[:20])
    rel = abs(r100.residual) / abs(r100.lhs)
    ok = rel <= IDENTITY_RTOL and abs(r100.residual) <= abs(r20.residual) and dt < 600
    record(6, ok, f"|residual|/|LHS| {rel:.2e} (tol {IDENTITY_RTOL:g}); "
                  f"|res| 20 zeros {abs(r20.residual):.2e} -> 100 zeros {abs(r100.residual):.2e}; {dt:.1f}s")


def test_criterion_7_corollary_sweep(inst, zeros):
    alphas = [0.1, 0.03, 0.01]
    sweep = asymptotic_sweep(inst, alphas)
    lim = asymptotic_limit(inst)
    devs = [abs(v / lim - 1) for _, v in sweep]
    bounds = [sweep_deviation_bound(inst, a, zeros) for a in alphas]
    scaled = [d / a ** 1.75 for d, a in zip(devs, alphas)]
    ok = (devs[-1] <= SWEEP_RTOL and all(d <= b for d, b in zip(devs, bounds))
          and all(y < x for x, y in zip(devs, devs[1:])) and all(y <= x for x, y in zip(scaled, scaled[1:])))
    record(7, ok, f"deviations {', '.join(f'{d:.2e}' for d in devs)} vs bounds "
                  f"{', '.join(f'{b:.2e}' for b in bounds)}; at 0.01 {devs[-1]:.2%} (tol {SWEEP_RTOL:.0%})")


def test_criterion_8_classical_validators(inst, zeros):
    parts = hl_rhs_partials(1.0, zeros, bracket_zeros(zeros))
    hl_ok = abs(parts[-1]) < abs(parts[0]) and max(map(abs, parts)) < 1e-15

    tau = delta_tau(400)
    naive = lambda y: y ** 12 * math.fsum(float(tau[n]) ** 2 * math.exp(-4 * math.pi * n * y) for n in range(1, 401))
    c0_gap = max(abs(zagier_c0(y) - naive(y)) / naive(y) for y in (1.0, 0.5, 0.1, 0.05))

    N = 100
    mu = [0] + list(mobius_sieve(N).values)
    one = [0] + [1] * N
    mob_ok = dirichlet_inverse(one) == mu and dirichlet_mul(one, mu)[1:] == [1] + [0] * (N - 1)
    a = [0] + list(a_series(inst, N).values)
    back = dirichlet_mul(dirichlet_mul(a, at_squares(N, lambda j: j ** 19)),
                         at_squares(N, lambda j: mu[j] * j ** 16))
    conv_ok = back[1:] == list(sk_petersson_coeffs(inst, N).values)

    ok = hl_ok and c0_gap <= 1e-12 and mob_ok and conv_ok
    record(8, ok, f"HL partials first {parts[0]:.2e} final {parts[-1]:.2e}; c0 gap {c0_gap:.1e}; "
                  f"Moebius {mob_ok}; a<->c roundtrip {conv_ok}")


def test_criterion_9_scale_covariance(inst, zeros):
    r1 = verify_main_identity(inst, 1.0, zeros[:20], oracle=False)
    r2 = verify_main_identity(inst.scaled(2.0), 1.0, zeros[:20], oracle=False)
    pairs = [(r1.lhs, r2.lhs), (r1.v_k, r2.v_k), (r1.r_k, r2.r_k), (r1.residual, r2.residual)]
    pairs += [(p.cum, q.cum) for p, q in zip(r1.zero_sum_partials, r2.zero_sum_partials)]
    worst = max(abs(y - 2 * x) / abs(2 * x) if x else abs(y) for x, y in pairs)
    record(9, worst <= 1e-12, f"worst relative deviation from factor 2: {worst:.1e}")


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
