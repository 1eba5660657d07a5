"""Theta series: holomorphic part, completed theta, modularity, shadows, unary pieces."""
from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from sympy import Matrix, Rational, ilcm
from sympy.matrices.normalforms import smith_normal_decomp

from .errfn import DEFAULT_SPEC, e2_boosted
from .errors import AccuracyError, DegenerateFormError, IncidenceError, InputError
from .geometry import (FrameConfig, HypercubeChart, SurfaceChart, boundary_closed_form, boundary_lifts,
                       phi_r, psi_m_values, validate_incidence)
from .lattice import (Coset, EvenLattice, MajorantForm, coset_norm, discriminant_group, enumerate_coset,
                      enumerate_points, majorant_on_S, pairing, q_exponents)
from .quadrature import integrate_1d, integrate_1d_batch
from .quadspace import InnerProductSpace, inner, normalize, perp_component, signature

TERM_CONSTANT = 3.0
IRREGULAR_OFFSET = 1e-6
TWO_PI = 2 * math.pi


@dataclass(frozen=True)
class TauPoint:
    u: float
    v: float

    def __post_init__(self):
        if not self.v > 0:
            raise InputError("tau must lie in the upper half-plane")

    @classmethod
    def of(cls, tau):
        if isinstance(tau, TauPoint):
            return tau
        tau = complex(tau)
        return cls(tau.real, tau.imag)

    @property
    def tau(self):
        return complex(self.u, self.v)


@dataclass
class QSeries:
    coset: Coset
    terms: dict
    guarantee: float

    def coefficient(self, exponent):
        return self.terms.get(Fraction(exponent), 0)

    def truncated(self, qmax):
        return {k: c for k, c in self.terms.items() if k <= qmax}

    def evaluate(self, tau):
        tau = TauPoint.of(tau).tau
        return sum(c * cmath.exp(2j * math.pi * tau * float(k)) for k, c in self.terms.items())


@dataclass(frozen=True)
class ThetaValue:
    value: complex
    tail_bound: float
    terms: int
    bound: float


@dataclass
class ModularityReport:
    transform: str
    residual: float
    measured_phase: complex | None = None
    ratios: dict = field(default_factory=dict)
    candidate_phase: complex | None = None
    tail_bound: float = 0.0


# ---------------------------------------------------------------- single I


def closed_form_I(y, config: FrameConfig, spec=DEFAULT_SPEC):
    """I(y; S) = -1/4 (E2(C1,C2;x) - E2(C1,C2';x) - E2(C1',C2;x) + E2(C1',C2';x)), x = y sqrt 2."""
    V = config.V
    x = V.vec(y) * math.sqrt(2.0)
    C1, C2, C1p, C2p = config.vectors
    return -0.25 * (e2_boosted(C1, C2, x, V, spec) - e2_boosted(C1, C2p, x, V, spec)
                    - e2_boosted(C1p, C2, x, V, spec) + e2_boosted(C1p, C2p, x, V, spec))


def _transverse_direction(config: FrameConfig):
    # fixed direction with sizeable pairing against every C, used to step off walls
    V = config.V
    units = [normalize(c, V) for c in config.vectors]
    best, score = None, -1.0
    for k in range(64):
        d = np.array([math.sin(1.0 + k * 0.7 + j * 1.3) for j in range(V.n)])
        d /= np.linalg.norm(d)
        s = min(abs(float(inner(d, u, V))) for u in units)
        if s > score:
            best, score = d, s
    return best


def regular_mask(Y, config: FrameConfig, tol=1e-9):
    Y = np.atleast_2d(Y)
    C = np.stack(config.vectors, axis=1)
    P = np.abs(Y @ config.V.gram @ C)
    scale = np.linalg.norm(Y, axis=1) * max(np.linalg.norm(c) for c in config.vectors)
    return (scale > 0) & (np.min(P, axis=1) > tol * scale)


def scaled_I(Y, config: FrameConfig, log_scale=0.0, spec=DEFAULT_SPEC):
    """exp(-log_scale) * I(y; S) for each row y of Y.

    Regular rows use the boundary form I = (boundary integral) - Phi_2 with the
    scale folded into every exponent; rows orthogonal to some C are evaluated
    by continuity (symmetric +-h, +-2h averages with one Richardson step).
    """
    Y = np.atleast_2d(np.asarray(Y, dtype=float))
    N = Y.shape[0]
    ls = np.broadcast_to(np.asarray(log_scale, dtype=float), (N,)).copy()
    out = np.empty(N)
    reg = regular_mask(Y, config)

    def raw(Z, s):
        X = Z * math.sqrt(2.0)
        p2 = np.atleast_1d(phi_r(X, config.pairs(), config.V))
        return boundary_closed_form(Z, config, spec, s) - p2 * np.exp(-s)

    if np.any(reg):
        out[reg] = raw(Y[reg], ls[reg])
    if np.any(~reg):
        Yi, si = Y[~reg], ls[~reg]
        d = _transverse_direction(config)
        h = IRREGULAR_OFFSET * np.maximum(1.0, np.linalg.norm(Yi, axis=1))[:, None]
        stacked = np.concatenate([Yi + h * d, Yi - h * d, Yi + 2 * h * d, Yi - 2 * h * d])
        vals = raw(stacked, np.tile(si, 4)).reshape(4, -1)
        a1 = 0.5 * (vals[0] + vals[1])
        a2 = 0.5 * (vals[2] + vals[3])
        out[~reg] = (4 * a1 - a2) / 3
    return out


# ------------------------------------------------------------- truncation


def _ball_volume(n):
    return math.pi ** (n / 2) / math.gamma(n / 2 + 1)


def tail_bound(basis, M: MajorantForm, v, bound, constant=TERM_CONSTANT, degree=0):
    """Bound on sum over lattice-coset points with (x,x)_M > bound of constant r^degree exp(-pi v r).

    Uses N(r) <= vol(ball of radius sqrt(r) + rho) / covolume with rho the sum
    of basis lengths, and summation by parts: tail <= int_B^inf N(r) |f'(r)| dr.
    """
    basis = np.asarray(basis, dtype=float)
    A = basis.T @ M.matrix @ basis
    m = A.shape[0]
    covol = math.sqrt(np.linalg.det(A))
    rho = float(np.sum(np.sqrt(np.diag(A))))
    w, wt = np.polynomial.laguerre.laggauss(60)
    r = bound + w / (math.pi * v)
    # f(r) = c r^k e^{-pi v r}; |f'| <= c e^{-pi v r} (pi v r^k + k r^{k-1})
    fprime = constant * (math.pi * v * r ** degree + degree * r ** max(degree - 1, 0))
    count = _ball_volume(m) * (np.sqrt(r) + rho) ** m / covol
    return float(math.exp(-math.pi * v * bound) * np.dot(wt, count * fprime) / (math.pi * v))


def choose_bound(basis, M: MajorantForm, v, tol, constant=TERM_CONSTANT, degree=0):
    """Smallest bound (to 1e-3 relative) whose tail estimate is at most tol."""
    lo, hi = 0.0, 1.0
    while tail_bound(basis, M, v, hi, constant, degree) > tol:
        lo, hi = hi, 2 * hi
        if hi > 1e6:
            raise AccuracyError("no truncation bound reaches the tolerance")
    while hi - lo > 1e-3 * hi:
        mid = 0.5 * (lo + hi)
        if tail_bound(basis, M, v, mid, constant, degree) > tol:
            lo = mid
        else:
            hi = mid
    return hi


# ------------------------------------------------------------------ series


def _majorant(config, majorant):
    return majorant if majorant is not None else majorant_on_S(SurfaceChart(config))


def holomorphic_part(L: EvenLattice, mu: Coset, config: FrameConfig, qmax, majorant=None, bound_scale=1.0):
    """sum Phi_2(x) q^{(x,x)/2} over x in L + mu, complete for exponents <= qmax.

    Terms with Phi_2(x) != 0 satisfy (x,x) >= (x,x)_S, so enumerating
    (x,x)_S <= 2 qmax captures every exponent up to qmax.
    """
    M = _majorant(config, majorant)
    return _sign_series(L, mu, config.pairs(), config.V, qmax, M, bound_scale, phi_r)


def _sign_series(L, mu, pairs, V, qmax, M, bound_scale, weight):
    X, K, _ = enumerate_coset(L, mu, M, max(2.0 * qmax * bound_scale, 1e-9))
    w = np.atleast_1d(weight(X, pairs, V)) if len(X) else np.zeros(0)
    keep = w != 0
    exps = q_exponents(L, mu, K[keep])
    terms = {}
    for e, c in zip(exps, w[keep]):
        if e <= qmax:
            terms[e] = terms.get(e, 0.0) + float(c)
    terms = {e: c for e, c in sorted(terms.items()) if c != 0}
    return QSeries(mu, terms, float(qmax))


def theta_terms(L: EvenLattice, mu: Coset, config: FrameConfig, tau, bound, majorant=None, spec=DEFAULT_SPEC):
    """Enumerated vectors, exact exponents and the complex terms I(sqrt(v) x) q^Q."""
    tau = TauPoint.of(tau)
    M = _majorant(config, majorant)
    X, K, _ = enumerate_coset(L, mu, M, bound)
    Q = np.array([float(e) for e in q_exponents(L, mu, K)])
    return X, Q, _terms_at(X, Q, config, tau, spec)


def _terms_at(X, Q, config, tau, spec):
    if len(X) == 0:
        return np.zeros(0, dtype=complex)
    ls = TWO_PI * tau.v * Q
    mag = scaled_I(math.sqrt(tau.v) * X, config, ls, spec)
    return mag * np.exp(1j * TWO_PI * tau.u * Q)


def _sum(values):
    return complex(math.fsum(np.real(values)), math.fsum(np.imag(values)))


def completed_theta(L: EvenLattice, mu: Coset, config: FrameConfig, tau, tol=1e-6, bound=None,
                    majorant=None, spec=DEFAULT_SPEC) -> ThetaValue:
    """I_mu(tau; S) = sum_{x in L+mu} I(sqrt(v) x; S) q^{(x,x)/2}, truncated in (x,x)_S.

    Each term is bounded by 3 exp(-pi v (x,x)_S); the truncation bound is chosen
    (or checked, when given) so the tail estimate is at most tol.
    """
    tau = TauPoint.of(tau)
    M = _majorant(config, majorant)
    if bound is None:
        bound = choose_bound(L.basis, M, tau.v, tol)
    tail = tail_bound(L.basis, M, tau.v, bound)
    if tail > tol:
        raise AccuracyError("tail bound exceeds tolerance", None, tail)
    X, Q, terms = theta_terms(L, mu, config, tau, bound, M, spec)
    return ThetaValue(_sum(terms), tail, len(X), float(bound))


def verify_T(L: EvenLattice, config: FrameConfig, tau, tol=1e-6, multiplier=None, majorant=None) -> ModularityReport:
    """max over cosets of |I_mu(tau + 1) - e(Q(mu)) I_mu(tau)|.

    multiplier(mu) may replace e(Q(mu)) (used for negative controls).
    """
    tau = TauPoint.of(tau)
    M = _majorant(config, majorant)
    residual, tail = 0.0, 0.0
    ratios = {}
    for mu in discriminant_group(L):
        a = completed_theta(L, mu, config, tau, tol, majorant=M)
        b = completed_theta(L, mu, config, TauPoint(tau.u + 1, tau.v), tol, majorant=M)
        mult = multiplier(mu) if multiplier else cmath.exp(2j * math.pi * float(coset_norm(L, mu)))
        residual = max(residual, abs(b.value - mult * a.value))
        ratios[str(mu)] = b.value / a.value if a.value else None
        tail = max(tail, a.tail_bound, b.tail_bound)
    return ModularityReport("T", residual, None, ratios, None, tail)


def verify_S(L: EvenLattice, config: FrameConfig, tau, tol=1e-6, majorant=None) -> ModularityReport:
    """Measure r_mu = I_mu(-1/tau) / (tau^{n/2} |D|^{-1/2} sum_nu e(-(mu,nu)) I_nu(tau)).

    The report carries the mean ratio as measured_phase and the largest
    deviation of any r_mu from it as residual.
    """
    tau = TauPoint.of(tau)
    M = _majorant(config, majorant)
    cosets = discriminant_group(L)
    stau = TauPoint.of(-1 / tau.tau)
    here = {mu: completed_theta(L, mu, config, tau, tol, majorant=M) for mu in cosets}
    there = {mu: completed_theta(L, mu, config, stau, tol, majorant=M) for mu in cosets}
    n = L.n
    norm = tau.tau ** (n / 2) / math.sqrt(len(cosets))
    ratios = {}
    for mu in cosets:
        s = sum(cmath.exp(-2j * math.pi * float(pairing(L, mu, nu))) * here[nu].value for nu in cosets)
        den = norm * s
        if abs(den) < 1e-12:
            ratios[str(mu)] = None
            continue
        ratios[str(mu)] = there[mu].value / den
    vals = [r for r in ratios.values() if r is not None]
    if not vals:
        return ModularityReport("S", float("inf"), None, ratios)
    phase = sum(vals) / len(vals)
    residual = max(abs(r - phase) for r in vals)
    if len(vals) < len(ratios):
        residual = float("inf")
    p, q = _signature_of(config.V)
    candidate = cmath.exp(2j * math.pi * (4 - n) / 8) if (p, q) == (n - 2, 2) else None
    tail = max(t.tail_bound for t in list(here.values()) + list(there.values()))
    return ModularityReport("S", residual, phase, ratios, candidate, tail)


def _signature_of(V):
    return signature(V)


# ---------------------------------------------------------------- shadows


def shadow_fd(L: EvenLattice, mu: Coset, config: FrameConfig, tau, tol=1e-6, h=1e-4, majorant=None,
              spec=DEFAULT_SPEC):
    """-2 i v^2 d/d(tau bar) I_mu by central differences in u and v with one Richardson step.

    All evaluations share one enumeration so the truncation does not move.
    """
    tau = TauPoint.of(tau)
    M = _majorant(config, majorant)
    bound = choose_bound(L.basis, M, tau.v - 2 * h, tol)
    X, K, _ = enumerate_coset(L, mu, M, bound)
    Q = np.array([float(e) for e in q_exponents(L, mu, K)])

    def F(u, v):
        return _sum(_terms_at(X, Q, config, TauPoint(u, v), spec))

    return lowering_operator(F, tau, h)


def lowering_operator(F, tau, h=1e-4):
    """-2 i v^2 dF/d(tau bar) for F(u, v), using central differences with one Richardson step."""
    tau = TauPoint.of(tau)

    def d(step):
        du = (F(tau.u + step, tau.v) - F(tau.u - step, tau.v)) / (2 * step)
        dv = (F(tau.u, tau.v + step) - F(tau.u, tau.v - step)) / (2 * step)
        return du, dv

    du1, dv1 = d(h / 2)
    du2, dv2 = d(h)
    du = (4 * du1 - du2) / 3
    dv = (4 * dv1 - dv2) / 3
    return -1j * tau.v ** 2 * (du + 1j * dv)


def shadow_terms(X, Q, config: FrameConfig, tau, spec=DEFAULT_SPEC, edges=None):
    """v q^Q int_{dS} Psi_M^o(x sqrt v) for each row of X (optionally a subset of edges)."""
    tau = TauPoint.of(tau)
    X = np.atleast_2d(X)
    N = X.shape[0]
    Y = math.sqrt(tau.v) * X
    ls = TWO_PI * tau.v * Q
    total = np.zeros(N)
    lifts = boundary_lifts(config)
    for k, (sign, lift) in enumerate(lifts):
        if edges is not None and k not in edges:
            continue

        def f(t, idx, lift=lift):
            Z, dZ = lift(t)
            return psi_m_values(Y[idx][:, None, :], Z, dZ, config.V.gram, ls[idx][:, None])
        vals, errs, ok = integrate_1d_batch(f, np.zeros(N), np.ones(N), tol=spec.abs_tol,
                                            cap=spec.max_subdivisions)
        if not np.all(ok):
            raise AccuracyError("shadow line integral did not converge", vals, errs)
        total += sign * vals
    return tau.v * total * np.exp(1j * TWO_PI * tau.u * Q)


def shadow_boundary(L: EvenLattice, mu: Coset, config: FrameConfig, tau, tol=1e-6, majorant=None,
                    spec=DEFAULT_SPEC, bound=None):
    """v int_{dS} theta_mu(tau, Psi_M), summed termwise along the four boundary lifts."""
    tau = TauPoint.of(tau)
    M = _majorant(config, majorant)
    if bound is None:
        # terms carry an extra factor v (x,x) over the completed-theta terms
        bound = choose_bound(L.basis, M, tau.v, tol, constant=TERM_CONSTANT * tau.v, degree=1)
    X, K, _ = enumerate_coset(L, mu, M, bound)
    Q = np.array([float(e) for e in q_exponents(L, mu, K)])
    return _sum(shadow_terms(X, Q, config, tau, spec))


# ---------------------------------------------------- unary factorization


def unary_theta(g0, lambda0, C1, tau, V: InnerProductSpace, tol=1e-16):
    """sum over x0 in lambda0 + Z g0 of (x0, und C1) q^{-(x0,x0)/2}.

    g0 spans L0 = L cap Q C1 and lambda0 lies on the same line.
    """
    tau = TauPoint.of(tau)
    g0 = V.vec(g0)
    if not np.any(g0):
        raise DegenerateFormError("L0 is trivial")
    u = normalize(C1, V)
    step = float(inner(g0, u, V))
    a0 = float(inner(V.vec(lambda0), u, V))
    # q^{-(x0,x0)/2} = q^{a^2/2} with a = (x0, und C1)
    amax = math.sqrt(max(0.0, -math.log(tol) / (math.pi * tau.v))) + abs(step) + abs(a0)
    kmax = int(math.ceil(amax / abs(step))) + 1
    total = 0j
    for k in range(-kmax, kmax + 1):
        a = a0 + k * step
        total += a * cmath.exp(1j * math.pi * tau.tau * a * a)
    return total


def zwegers_line_integral(x1, C, Cp, V: InnerProductSpace, tau, spec=DEFAULT_SPEC):
    """v^{1/2} int_0^1 (x1, nu'(t)) exp(-2 pi v (x1, nu(t))^2) dt along nu(t) = und((1-t) C + t C').

    This is the (n-2,1) Schwartz form on the geodesic without its factor q^{(x1,x1)/2}.
    """
    tau = TauPoint.of(tau)
    C, Cp, x1 = V.vec(C), V.vec(Cp), V.vec(x1)
    if not (inner(C, C, V) < 0 and inner(Cp, Cp, V) < 0 and inner(C, Cp, V) < 0):
        raise InputError("C and C' must be negative vectors in the same component")
    G = V.gram
    dC = Cp - C

    def f(t):
        B = C + t[:, None] * dC
        nb = -np.einsum("ij,jk,ik->i", B, G, B)
        rho = np.sqrt(nb)
        drho = -(B @ G @ dC) / rho
        nu = B / rho[:, None]
        dnu = dC / rho[:, None] - B * (drho / rho ** 2)[:, None]
        w = nu @ G @ x1
        return (dnu @ G @ x1) * np.exp(-2 * math.pi * tau.v * w * w)

    res = integrate_1d(f, 0.0, 1.0, tol=spec.abs_tol, cap=spec.max_subdivisions)
    if not res.converged:
        raise AccuracyError("line integral did not converge", res.value, res.error_estimate)
    return math.sqrt(tau.v) * res.value


@dataclass
class UnarySplit:
    """L0 = L cap Q C1, L1 = L cap C1^perp and representatives of L / (L0 + L1)."""
    g0: np.ndarray
    k0: np.ndarray
    L1_basis: np.ndarray
    K1: np.ndarray
    reps: list


def _rational(v, limit=10 ** 6):
    return Rational(Fraction(float(v)).limit_denominator(limit))


def _integer_direction(L: EvenLattice, C1):
    """Primitive integer coordinates of the lattice direction through C1."""
    B = Matrix([[_rational(b) for b in row] for row in L.basis])
    k = B.inv() * Matrix([_rational(c) for c in C1])
    den = ilcm(*[q.q for q in k], 1)
    ints = [int(q * den) for q in k]
    g = math.gcd(*ints)
    return np.array([i // g for i in ints], dtype=np.int64)


def unary_split(L: EvenLattice, C1) -> UnarySplit:
    V = L.V
    k0 = _integer_direction(L, C1)
    if not np.any(k0):
        raise DegenerateFormError("C1 is not a rational direction")
    row = V.vec(C1) @ V.gram @ L.basis
    scale = 1
    while np.max(np.abs(row * scale - np.rint(row * scale))) > 1e-9:
        scale += 1
        if scale > 10 ** 6:
            raise InputError("C1 is not rational")
    w = Matrix([[int(v) for v in np.rint(row * scale)]])
    D, U, W = smith_normal_decomp(w)
    K1 = np.array(W.tolist(), dtype=np.int64)[:, 1:]
    Mk = np.concatenate([k0[:, None], K1], axis=1)
    D2, U2, W2 = smith_normal_decomp(Matrix(Mk.tolist()))
    d = [int(D2[i, i]) for i in range(L.n)]
    Uinv = np.array(U2.inv().tolist(), dtype=np.int64)
    reps = [Uinv @ np.array(c, dtype=np.int64) for c in itertools.product(*[range(abs(di)) for di in d])]
    return UnarySplit(L.basis @ k0, k0, L.basis @ K1, K1, reps)


def shadow_gamma1_direct(L: EvenLattice, mu: Coset, config: FrameConfig, tau, bound, majorant=None,
                         spec=DEFAULT_SPEC):
    """v int_{gamma_1} theta_mu(tau, Psi_M), summed directly over L + mu."""
    M = _majorant(config, majorant)
    X, K, _ = enumerate_coset(L, mu, M, bound)
    Q = np.array([float(e) for e in q_exponents(L, mu, K)])
    return _sum(shadow_terms(X, Q, config, tau, spec, edges={0}))


def shadow_gamma1_factorized(L: EvenLattice, mu: Coset, config: FrameConfig, tau, bound, majorant=None,
                             spec=DEFAULT_SPEC):
    """sum_lambda v^{3/2} conj(theta_{0,lambda0}(tau)) * (Zwegers-type series for lambda1)."""
    tau = TauPoint.of(tau)
    V = config.V
    M = _majorant(config, majorant)
    C1, C2, C2p = config.C1, config.C2, config.C2p
    split = unary_split(L, C1)
    A, Ap = perp_component(C2, C1, V), perp_component(C2p, C1, V)
    c11 = float(inner(C1, C1, V))
    total = 0j
    for rep in split.reps:
        lam = L.ambient(mu.as_float() + rep)
        lam0 = float(inner(lam, C1, V)) / c11 * C1
        lam1 = lam - lam0
        theta0 = unary_theta(split.g0, lam0, C1, tau, V)
        off = np.linalg.lstsq(split.L1_basis, lam1, rcond=None)[0]
        X1, _, _ = enumerate_points(split.L1_basis, off, M, bound)
        z = 0j
        for x1 in X1:
            q1 = 0.5 * float(inner(x1, x1, V))
            line = zwegers_line_integral(x1, A, Ap, V, tau, spec)
            z += line * cmath.exp(2j * math.pi * tau.tau * q1)
        total += tau.v ** 1.5 * theta0.conjugate() * z
    return total


# ------------------------------------------------------- r-pair geometry


@dataclass
class PairsReport:
    negative_planes: bool
    distinct: bool
    same_component: bool
    projections: bool
    chart: bool

    @property
    def passed(self):
        return self.negative_planes and self.distinct and self.same_component and self.projections and self.chart


def _corner_matrices(pairs):
    r = len(pairs)
    out = []
    for I in itertools.product((0, 1), repeat=r):
        out.append(np.stack([pairs[j][I[j]] for j in range(r)], axis=1))
    return out


def _projected_ok(pairs, V):
    r = len(pairs)
    if r == 1:
        c, cp = pairs[0]
        return bool(inner(c, c, V) < 0 and inner(cp, cp, V) < 0 and inner(c, cp, V) < 0)
    if r == 2:
        (c1, c1p), (c2, c2p) = pairs
        return validate_incidence(c1, c2, c1p, c2p, V).passed
    for j in range(r):
        for c in pairs[j]:
            if not inner(c, c, V) < 0:
                return False
            rest = [(perp_component(a, c, V), perp_component(b, c, V)) for k, (a, b) in enumerate(pairs) if k != j]
            if not _projected_ok(rest, V):
                return False
    return True


def validate_pairs(pairs, V: InnerProductSpace) -> PairsReport:
    """Conditions on r pairs {C_j, C_j'}: negative corner r-planes, distinct, one component.

    For r >= 3 the projected collections must satisfy the same conditions one
    level down (ending with the 2-pair incidence test).
    """
    pairs = [(V.vec(a), V.vec(b)) for a, b in pairs]
    r = len(pairs)
    corners = _corner_matrices(pairs)
    G = V.gram
    neg = all(np.max(np.linalg.eigvalsh(B.T @ G @ B)) < 0 for B in corners)
    if not neg:
        return PairsReport(False, False, False, False, False)
    distinct = all(np.linalg.matrix_rank(np.concatenate([corners[a], corners[b]], axis=1)) > r
                   for a in range(len(corners)) for b in range(a))

    def frame(B):
        w, U = np.linalg.eigh(-(B.T @ G @ B))
        return B @ U @ np.diag(w ** -0.5) @ U.T

    f0 = frame(corners[0])
    want = (-1) ** r
    same = all(np.sign(np.linalg.det(f0.T @ G @ frame(B))) == want for B in corners)
    proj = _projected_ok(pairs, V) if r >= 2 else True
    try:
        HypercubeChart(pairs, V, grid=9 if r <= 2 else 7)
        chart = True
    except Exception:
        chart = False
    return PairsReport(bool(neg), bool(distinct), bool(same), bool(proj), chart)


def single_intersection(x, pairs, V: InnerProductSpace):
    """Solve (x, B_j(s_j)) = 0 for each j; returns s in [0,1]^r or None."""
    x = V.vec(x)
    s = []
    for c, cp in pairs:
        a, ap = float(inner(x, c, V)), float(inner(x, cp, V))
        if a == ap:
            return None
        sj = a / (a - ap)
        if not 0 <= sj <= 1:
            return None
        s.append(sj)
    return np.array(s)


def phi_r_series(L: EvenLattice, mu: Coset, pairs, qmax, majorant=None, bound_scale=1.0):
    """sum Phi_r(x) q^{(x,x)/2} over L + mu through qmax, enumerated under the hypercube majorant."""
    V = L.V
    if majorant is None:
        report = validate_pairs(pairs, V)
        if not report.passed:
            raise IncidenceError(f"pair configuration fails validation: {report}")
        majorant = majorant_on_S(HypercubeChart(pairs, V), grid=9 if len(pairs) <= 2 else 7)
    return _sign_series(L, mu, pairs, V, qmax, majorant, bound_scale, phi_r)
