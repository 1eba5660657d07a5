"""Acceptance suite: one PASS/FAIL line per criterion, tolerances as published for each check.

Run with ``pytest tests/test_acceptance.py -v``; the lines are printed even when
output capture is on.
"""
import math
import time

import numpy as np
import pytest

from kmtheta import checks
from kmtheta.errfn import e2, e2_boosted, e2_flat
from kmtheta.geometry import OrientedFrame, SurfaceChart, intersection_point, phi_r, r_quantity
from kmtheta.lattice import discriminant_group, enumerate_coset, q_exponents
from kmtheta.quadspace import delta, inner, normalize, perp_component
from kmtheta.theta import holomorphic_part, phi_r_series

from oracles import tilde_e2_owen


@pytest.fixture
def report(capsys):
    def emit(number, ok, text):
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {number}: {text}")
        return ok
    return emit


def test_criterion_01_surface_integral_identity(config, report):
    t = time.perf_counter()
    res = checks.theorem_a(config, count=100, seed=0, tol=1e-6)
    seconds = time.perf_counter() - t
    ok = res.passed and res.details["samples"] >= 100 and seconds <= 60
    report(1, ok, f"surface integral vs -1/4 four-term E2 over {res.details['samples']} points, "
                  f"max residual {res.residual:.2e} (tol 1e-6), {seconds:.1f} s (limit 60 s)")
    assert ok


def test_criterion_02_origin_arctan_literal(config, report):
    """Literal statement: integral at 0 plus the unscaled four-term Arctan sum vanishes.

    Measured: the integral equals exactly -1/4 of the four-term sum (see the
    companion test). With Arctan read as (2/pi) arctan the literal form is off
    by that factor 4; with plain arctan the ratio becomes 1/(2 pi). No reading of
    the normalizations makes the literal identity hold, so this criterion is
    reported as failing rather than rescaled.
    """
    res = checks.arctan_identity(config, tol=1e-8, weight=1.0)
    d = res.details
    ratio = d["integral"] / -d["arctan_sum"]
    ratio_plain = d["integral"] / -(math.pi / 2 * d["arctan_sum"])
    ok = report(2, res.passed, f"|int_S phi(0) + four-term Arctan| = {res.residual:.2e} (tol 1e-8); "
                               f"measured ratio integral/(-sum) = {ratio:.15f} with (2/pi)arctan, "
                               f"{ratio_plain:.6f} with plain arctan")
    assert ok, (f"literal identity fails: residual {res.residual:.3e}; the integral is {ratio:.15f} times "
                f"the negated sum, i.e. the identity holds with weight 1/4, not 1")


def test_criterion_02_origin_arctan_quarter_weight(config, report):
    res = checks.arctan_identity(config, tol=1e-8, weight=0.25)
    with_e2 = abs(res.details["integral"] + 0.25 * checks.four_term_e2(config, np.zeros(4)))
    ok = res.passed and with_e2 <= 1e-8
    report("2 (companion, weight 1/4)", ok, f"|int_S phi(0) + 1/4 four-term Arctan| = {res.residual:.2e}, "
                                            f"via E2 at 0: {with_e2:.2e} (tol 1e-8)")
    assert ok


def test_criterion_03_stokes(config, report):
    res = checks.stokes(config, count=50, seed=0, h=1e-2, tol=1e-7, ratio=12.0)
    d = res.details
    report(3, res.passed, f"max |loop psi - int phi| at h=1e-2: {res.residual:.2e} (tol 1e-7); "
                          f"worst-case ratio on halving {d['worst_ratio']:.1f} (need >= 12), "
                          f"median per-square ratio {d['median_ratio']:.1f}")
    assert res.passed


def test_criterion_04_intersection(config, report):
    res = checks.intersection(config, count=10 ** 4, seed=0, tol=1e-18)
    d = res.details
    report(4, res.passed, f"{d['samples']} points with Phi_2 != 0, {d['mismatches']} mismatches, "
                          f"max R at crossing {res.residual:.2e} (tol 1e-18)")
    assert res.passed and d["samples"] == 10 ** 4


def test_criterion_05_holomorphic_convergence(fixture22, config, majorant_S, report):
    L = fixture22.lattice
    chart = SurfaceChart(config)
    stable, worst, retained = True, -math.inf, 0
    for mu in discriminant_group(L):
        a = holomorphic_part(L, mu, config, 10, majorant_S)
        b = holomorphic_part(L, mu, config, 10, majorant_S, bound_scale=2.0)
        stable &= a.terms == b.terms
        # every vector with Phi != 0 and Q <= 10 has majorant on S at most 2Q = 20
        X, K, _ = enumerate_coset(L, mu, majorant_S, 20.0)
        Q = np.array([float(e) for e in q_exponents(L, mu, K)])
        keep = (phi_r(X, config.pairs(), config.V) != 0) & (Q <= 10)
        for x, q in zip(X[keep], Q[keep]):
            s0, t0 = intersection_point(x, config)
            xx_S = 2 * q + 2 * r_quantity(x, OrientedFrame.from_matrix(chart.frames(s0, t0)), config.V)
            # log |q^Q| - log e^{-pi (x,x)_S} at v = 1
            worst = max(worst, -2 * math.pi * q + math.pi * xx_S)
            retained += 1
    ok = stable and worst <= 1e-12 and retained > 0
    report(5, ok, f"coefficients through qmax=10 identical under bound doubling: {stable}; "
                  f"{retained} retained terms, max log(|q^Q| / e^(-pi (x,x)_S)) = {worst:.1e}")
    assert ok


def test_criterion_06_modularity(fixture22, config, report):
    res = checks.modularity(fixture22.lattice, config, tau=0.37 + 1.3j, tol_T=1e-5, tol_S=1e-4, series_tol=1e-6)
    d = res.details
    ok = res.passed and d["tail_bound"] <= 1e-6
    report(6, ok, f"T residual {d['T_residual']:.2e} (tol 1e-5), tail bound {d['tail_bound']:.1e}; "
                  f"S ratios pairwise {d['S_pairwise']:.2e}, |r|-1 {d['S_unit_deviation']:.2e} (tol 1e-4), "
                  f"phase {complex(*d['measured_phase']):.6f}")
    assert ok


def test_criterion_07_two_path(fixture22, config, report):
    t = time.perf_counter()
    results = [checks.two_path(fixture22.lattice, mu, config, tau=0.3 + 1.1j, max_terms=500, tol=1e-5)
               for mu in discriminant_group(fixture22.lattice)]
    seconds = time.perf_counter() - t
    worst = max(r.residual for r in results)
    terms = max(r.details["terms"] for r in results)
    ok = all(r.passed for r in results) and terms <= 500 and seconds <= 600
    report(7, ok, f"closed form vs termwise quadrature, worst coset {worst:.2e} (tol 1e-5), "
                  f"at most {terms} terms per coset, {seconds:.1f} s")
    assert ok


def test_criterion_08_shadow(fixture22, config, report):
    res = checks.shadow(fixture22.lattice, config, tau=0.3 + 1.1j, tol=1e-4)
    report(8, res.passed, f"max |shadow_fd - shadow_boundary| over cosets {res.residual:.2e} (tol 1e-4)")
    assert res.passed


def one_sided_limit(f, eps):
    return 2 * f(eps) - f(2 * eps)


def test_criterion_09_error_functions(config, report):
    V = config.V
    G = V.gram
    rng = np.random.default_rng(2024)

    zero_ok = e2(0.0, 0.0) == 0.0

    def random_pair():
        while True:
            C = rng.uniform(-3, 3, (2, 4))
            if all(inner(c, c, V) < -0.3 for c in C) and delta(C[0], C[1], V).value > 0.3:
                return C

    pairs = list(config.pairs()) + [(config.C1, config.C2p), (config.C1p, config.C2)]
    pairs += [tuple(random_pair()) for _ in range(20)]
    arctan_err = 0.0
    for C, Cp in pairs:
        alpha = -float(C @ G @ Cp) / math.sqrt(delta(C, Cp, V).value)
        arctan_err = max(arctan_err, abs(e2_boosted(C, Cp, np.zeros(4), V) - 2 / math.pi * math.atan(alpha)))

    ident_err = 0.0
    for _ in range(1000):
        C1, C2 = random_pair()
        x = rng.uniform(-3, 3, 4)
        p = lambda c: float(inner(x, normalize(c, V), V))
        ref = (-tilde_e2_owen(p(perp_component(C1, C2, V)), p(C2))
               - tilde_e2_owen(p(perp_component(C2, C1, V)), p(C1)) + np.sign(p(C2)) * np.sign(p(C1)))
        ident_err = max(ident_err, abs(e2_boosted(C1, C2, x, V) - ref))

    wall_err = 0.0
    for alpha, a in [(0.5, 0.8), (-1.3, -0.6), (2.0, 1.5), (0.1, -2.0)]:
        for f in (lambda e: e2_flat(alpha, a, e), lambda e: e2_flat(alpha, -alpha * a + e, a)):
            lo, hi = one_sided_limit(f, -1e-4), one_sided_limit(f, 1e-4)
            wall_err = max(wall_err, abs(hi - lo), abs(f(0.0) - hi))

    ok = zero_ok and arctan_err <= 1e-10 and ident_err <= 1e-8 and wall_err <= 1e-6
    report(9, ok, f"e2(0,0)==0: {zero_ok}; E2(C,C';0) vs Arctan max {arctan_err:.1e} (tol 1e-10) "
                  f"over {len(pairs)} pairs; te2 identity max {ident_err:.1e} (tol 1e-8) over 1000 inputs; "
                  f"wall limits at eps=1e-4 max {wall_err:.1e} (tol 1e-6)")
    assert ok


def test_criterion_10_rank_three(fixture33, report):
    L, V, pairs = fixture33.lattice, fixture33.V, fixture33.pairs
    stable, nonzero = True, 0
    for mu in discriminant_group(L):
        a = phi_r_series(L, mu, pairs, 6)
        b = phi_r_series(L, mu, pairs, 6, bound_scale=2.0)
        stable &= a.terms == b.terms
        nonzero += len(a.terms)
    found, failures = checks.single_intersection_check(pairs, V, count=1000, seed=0)
    ok = stable and nonzero > 0 and found == 1000 and failures == 0
    report(10, ok, f"Phi_3 series through qmax=6 stable under bound doubling: {stable} ({nonzero} nonzero "
                   f"coefficients); unique intersection for {found - failures}/{found} points")
    assert ok
