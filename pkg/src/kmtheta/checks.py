"""Numerical identity checks shared by the command line and the test suite."""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from .errfn import DEFAULT_SPEC, arctan_limit, e2_boosted
from .geometry import (FrameConfig, OrientedFrame, SurfaceChart, intersection_jacobian_sign, intersection_number,
                       intersection_point, phi2,
                       phi_r, phi_values, psi_values, r_quantity, surface_integral_phi)
from .lattice import EvenLattice, discriminant_group, enumerate_coset, majorant_on_S, q_exponents
from .quadrature import integrate_1d
from .theta import (TauPoint, regular_mask, scaled_I, shadow_boundary, shadow_fd, single_intersection, verify_S,
                    verify_T)


@dataclass
class CheckResult:
    name: str
    passed: bool
    residual: float
    tolerance: float
    details: dict = field(default_factory=dict)
    seconds: float = 0.0

    def as_dict(self):
        return {"name": self.name, "passed": self.passed, "residual": self.residual,
                "tolerance": self.tolerance, "details": self.details, "seconds": self.seconds}


def _timed(fn):
    def run(*args, **kwargs):
        t = time.perf_counter()
        res = fn(*args, **kwargs)
        res.seconds = time.perf_counter() - t
        return res
    run.__name__ = fn.__name__
    run.__doc__ = fn.__doc__
    return run


def regular_sample(config: FrameConfig, rng, count, box=3.0, need_phi=False):
    """count uniform vectors in [-box, box]^n that are regular (and optionally have Phi_2 != 0)."""
    out = []
    n = config.V.n
    while sum(len(o) for o in out) < count:
        X = rng.uniform(-box, box, size=(max(4 * count, 1000), n))
        keep = regular_mask(X, config)
        if need_phi:
            keep &= phi_r(X, config.pairs(), config.V) != 0
        out.append(X[keep])
    return np.concatenate(out)[:count]


def four_term_e2(config: FrameConfig, x, spec=DEFAULT_SPEC):
    C1, C2, C1p, C2p = config.vectors
    V = config.V
    return (e2_boosted(C1, C2, x, V, spec) - e2_boosted(C1, C2p, x, V, spec)
            - e2_boosted(C1p, C2, x, V, spec) + e2_boosted(C1p, C2p, x, V, spec))


@_timed
def theorem_a(config: FrameConfig, count=100, seed=0, box=3.0, tol=1e-6):
    """|int_S phi(x / sqrt 2) + 1/4 (four-term E2)(x)| over random regular x."""
    chart = SurfaceChart(config)
    X = regular_sample(config, np.random.default_rng(seed), count, box)
    res = np.array([abs(surface_integral_phi(x / math.sqrt(2), chart) + 0.25 * four_term_e2(config, x)) for x in X])
    return CheckResult("theorem-a", bool(np.all(res <= tol)), float(res.max()), tol, {"samples": len(X)})


def arctan_sum(config: FrameConfig):
    C1, C2, C1p, C2p = config.vectors
    V = config.V
    return (arctan_limit(C1, C2, V) - arctan_limit(C1, C2p, V)
            - arctan_limit(C1p, C2, V) + arctan_limit(C1p, C2p, V))


@_timed
def arctan_identity(config: FrameConfig, tol=1e-8, weight=1.0):
    """|int_S phi(0) + weight * (four-term Arctan)|; weight 1 is the unscaled form, 1/4 the E2 limit."""
    value = surface_integral_phi(np.zeros(config.V.n), SurfaceChart(config), tol=1e-12)
    A = arctan_sum(config)
    r = abs(value + weight * A)
    return CheckResult("arctan", bool(r <= tol), float(r), tol, {"integral": value, "arctan_sum": A,
                                                                "weight": weight})


def _loop_psi(chart: SurfaceChart, x, s0, t0, h):
    """Counter-clockwise line integral of psi(x) around [s0, s0+h] x [t0, t0+h]."""
    G = chart.gram
    edges = [((s0, t0), (h, 0.0)), ((s0 + h, t0), (0.0, h)), ((s0 + h, t0 + h), (-h, 0.0)), ((s0, t0 + h), (0.0, -h))]
    total = 0.0
    for (a, b), (ds, dt) in edges:
        def f(u, a=a, b=b, ds=ds, dt=dt):
            Z, Zs, Zt = chart.frame_derivatives(a + u * ds, b + u * dt)
            return psi_values(x, Z, Zs * ds + Zt * dt, G)
        total += integrate_1d(f, 0.0, 1.0, tol=1e-15).value
    return total


def _midpoint_phi(chart: SurfaceChart, x, s0, t0, h):
    Z, eta, mu = chart.tangents(s0 + h / 2, t0 + h / 2)
    return float(phi_values(x, Z, eta, mu, chart.gram)) * h * h


@_timed
def stokes(config: FrameConfig, count=50, seed=0, h=1e-2, tol=1e-7, ratio=12.0, box=1.0):
    """Loop integral of psi against the midpoint value of phi on small chart squares.

    d psi = phi makes the difference O(h^4): halving h should divide the worst
    residual over all squares by about 16. Per-square ratios are reported too;
    a square whose h^4 coefficient nearly cancels can be pre-asymptotic at this h.
    Squares near D_x (where psi is singular) are skipped. x is drawn from
    [-box, box]^n; large x make both sides underflow towards round-off.
    """
    chart = SurfaceChart(config)
    rng = np.random.default_rng(seed)
    res_h, res_h2 = [], []
    while len(res_h) < count:
        x = rng.uniform(-box, box, config.V.n)
        s0, t0 = rng.uniform(0.05, 0.95 - h, 2)
        p = intersection_point(x, config)
        if p is not None and s0 - 0.05 <= p[0] <= s0 + h + 0.05 and t0 - 0.05 <= p[1] <= t0 + h + 0.05:
            continue
        r1 = abs(_loop_psi(chart, x, s0, t0, h) - _midpoint_phi(chart, x, s0, t0, h))
        r2 = abs(_loop_psi(chart, x, s0, t0, h / 2) - _midpoint_phi(chart, x, s0, t0, h / 2))
        res_h.append(r1)
        res_h2.append(r2)
    res_h, res_h2 = np.array(res_h), np.array(res_h2)
    ratios = (res_h + 1e-300) / (res_h2 + 1e-300)
    worst_ratio = float(res_h.max() / res_h2.max())
    passed = bool(np.all(res_h <= tol) and worst_ratio >= ratio)
    return CheckResult("stokes", passed, float(res_h.max()), tol,
                       {"worst_ratio": worst_ratio, "min_ratio": float(ratios.min()),
                        "median_ratio": float(np.median(ratios)), "below_ratio": int(np.sum(ratios < ratio)),
                        "max_residual_half": float(res_h2.max())})


@_timed
def intersection(config: FrameConfig, count=10 ** 4, seed=0, box=3.0, tol=1e-18):
    """Phi_2(x) against the intersection sign (formula and frame Jacobian), and R(x, z) at the crossing."""
    X = regular_sample(config, np.random.default_rng(seed), count, box, need_phi=True)
    chart = SurfaceChart(config)
    mismatches, worst_R = 0, 0.0
    for x in X:
        p = phi2(x, config)
        if intersection_number(x, config) != p or intersection_jacobian_sign(x, config) != p:
            mismatches += 1
        s0, t0 = intersection_point(x, config)
        worst_R = max(worst_R, r_quantity(x, OrientedFrame.from_matrix(chart.frames(s0, t0)), config.V))
    return CheckResult("intersection", mismatches == 0 and worst_R <= tol, float(worst_R), tol,
                       {"samples": len(X), "mismatches": mismatches})


@_timed
def modularity(L: EvenLattice, config: FrameConfig, tau=0.37 + 1.3j, tol_T=1e-5, tol_S=1e-4, series_tol=1e-6,
               s_tau=None):
    M = majorant_on_S(SurfaceChart(config))
    T = verify_T(L, config, tau, series_tol, majorant=M)
    S = verify_S(L, config, s_tau if s_tau is not None else tau, series_tol, majorant=M)
    ratios = [r for r in S.ratios.values() if r is not None]
    pairwise = max(abs(a - b) for a in ratios for b in ratios) if ratios else float("inf")
    unit = max(abs(abs(r) - 1) for r in ratios) if ratios else float("inf")
    passed = T.residual <= tol_T and pairwise <= tol_S and unit <= tol_S and len(ratios) == len(S.ratios)
    details = {"T_residual": T.residual, "S_pairwise": pairwise, "S_unit_deviation": unit,
               "measured_phase": [S.measured_phase.real, S.measured_phase.imag],
               "ratios": {k: [v.real, v.imag] if v is not None else None for k, v in S.ratios.items()},
               "tail_bound": max(T.tail_bound, S.tail_bound)}
    if S.candidate_phase is not None:
        details["candidate_phase"] = [S.candidate_phase.real, S.candidate_phase.imag]
    return CheckResult("modularity", bool(passed), float(max(T.residual, pairwise)), tol_T, details)


@_timed
def shadow(L: EvenLattice, config: FrameConfig, tau=0.3 + 1.1j, tol=1e-4, series_tol=1e-8):
    M = majorant_on_S(SurfaceChart(config))
    diffs = {}
    for mu in discriminant_group(L):
        a = shadow_fd(L, mu, config, tau, series_tol, majorant=M)
        b = shadow_boundary(L, mu, config, tau, series_tol, majorant=M)
        diffs[str(mu)] = abs(a - b)
    worst = max(diffs.values())
    return CheckResult("shadow", bool(worst <= tol), float(worst), tol, {"per_coset": diffs})


@_timed
def two_path(L: EvenLattice, mu, config: FrameConfig, tau=0.3 + 1.1j, max_terms=500, tol=1e-5):
    """Termwise closed form against termwise surface quadrature on one truncation."""
    tau = TauPoint.of(tau)
    M = majorant_on_S(SurfaceChart(config))
    bound = 1.0
    while len(enumerate_coset(L, mu, M, 2 * bound)[0]) <= max_terms:
        bound *= 2
    X, K, _ = enumerate_coset(L, mu, M, bound)
    Q = np.array([float(e) for e in q_exponents(L, mu, K)])
    ls = 2 * math.pi * tau.v * Q
    phase = np.exp(2j * math.pi * tau.u * Q)
    chart = SurfaceChart(config)
    closed = scaled_I(math.sqrt(tau.v) * X, config, ls) * phase
    quad = np.array([surface_integral_phi(math.sqrt(tau.v) * x, chart, tol=1e-10, log_scale=s)
                     for x, s in zip(X, ls)]) * phase
    a, b = complex(closed.sum()), complex(quad.sum())
    return CheckResult("two-path", bool(abs(a - b) <= tol), float(abs(a - b)), tol,
                       {"terms": len(X), "bound": bound, "closed": [a.real, a.imag], "quadrature": [b.real, b.imag]})


def single_intersection_check(pairs, V, count=1000, seed=0, box=4.0):
    """For random x with Phi_r(x) != 0, the r linear equations have exactly one solution in [0,1]^r."""
    rng = np.random.default_rng(seed)
    found, failures = 0, 0
    while found < count:
        X = rng.uniform(-box, box, size=(20000, V.n))
        X = X[phi_r(X, pairs, V) != 0]
        for x in X[: count - found]:
            s = single_intersection(x, pairs, V)
            if s is None:
                failures += 1
            else:
                B = np.stack([(1 - s[j]) * pairs[j][0] + s[j] * pairs[j][1] for j in range(len(pairs))], axis=1)
                if np.max(np.abs(x @ V.gram @ B)) > 1e-9 * np.linalg.norm(x) * np.linalg.norm(B):
                    failures += 1
            found += 1
    return found, failures
