"""Error functions E1, M1, e2, tilde-e2 and the generalized error function E2.

tilde-e2 is evaluated in angular form: substituting v = b cot(phi) in

    (2/pi) b exp(-pi b^2) int_0^a exp(-pi v^2) / (b^2 + v^2) dv

gives sgn(ab) (2/pi) int_{arctan|b/a|}^{pi/2} exp(-pi b^2 / sin^2 phi) dphi,
a bounded integrand on a finite interval for every b != 0. Measuring the
angle from the v-axis keeps the integrand accurate when |b| << |a|.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from .errors import AccuracyError, IncidenceError, InputError, NullVectorError
from .quadrature import integrate_1d, integrate_1d_batch
from .quadspace import InnerProductSpace, delta, inner, normalize, perp_component

WALL_OFFSET = 1e-6
WALL_TOL = 1e-9
SQRT_PI = math.sqrt(math.pi)
ANGULAR_PIECES = 18


@dataclass(frozen=True)
class QuadratureSpec:
    abs_tol: float = 1e-12
    max_subdivisions: int = 200

    def __post_init__(self):
        if not self.abs_tol > 0:
            raise InputError("abs_tol must be positive")
        if self.max_subdivisions < 1:
            raise InputError("max_subdivisions must be >= 1")


DEFAULT_SPEC = QuadratureSpec()


@dataclass(frozen=True)
class BoostArgs:
    alpha: float
    u1: float
    u2: float
    u1p: float
    u2p: float

    @classmethod
    def from_flat(cls, alpha, u1, u2):
        r = math.sqrt(1 + alpha * alpha)
        return cls(alpha, u1, u2, (u2 - alpha * u1) / r, (u1 + alpha * u2) / r)


def e1(u):
    """E1(u) = sgn(u) Erf(|u| sqrt(pi)) = Erf(u sqrt(pi))."""
    if np.ndim(u):
        return special.erf(np.asarray(u, dtype=float) * SQRT_PI)
    return math.erf(u * SQRT_PI)


def m1(u):
    """M1(u) = -sgn(u) Erfc(|u| sqrt(pi)), zero at u = 0."""
    if np.ndim(u):
        u = np.asarray(u, dtype=float)
        return -np.sign(u) * special.erfc(np.abs(u) * SQRT_PI)
    return -float(np.sign(u)) * math.erfc(abs(u) * SQRT_PI)


def angular_integral(phi0, phi1, b, log_scale=0.0, spec=DEFAULT_SPEC):
    """(2/pi) int_{phi0}^{phi1} exp(-pi b^2 / sin^2(phi) - log_scale) dphi, vectorized.

    Returns (values, error_bounds). Raises AccuracyError if any integral
    exhausts its subdivision budget.
    """
    phi0, phi1, b, log_scale = np.broadcast_arrays(
        *(np.asarray(t, dtype=float) for t in (phi0, phi1, b, log_scale)))
    shape = phi0.shape
    p0, p1 = phi0.ravel(), phi1.ravel()
    bb = (b * b).ravel() * math.pi
    ls = log_scale.ravel()
    lo, hi = np.minimum(p0, p1), np.maximum(p0, p1)

    N = lo.size
    # the integrand climbs from 0 to 1 near phi ~ |b| and then approaches 1 like b^2 / phi^2;
    # geometric breakpoints 16 |b| 10^k keep both features visible to the adaptive rule
    cuts = 16 * np.abs(b.ravel())[None, :] * 10.0 ** np.arange(ANGULAR_PIECES - 1)[:, None]
    edges = np.concatenate([lo[None, :], np.clip(cuts, lo, hi), hi[None, :]])

    def f(t, idx):
        j = idx % N
        s = np.sin(t)
        c = np.broadcast_to(bb[j, None], t.shape)
        with np.errstate(divide="ignore", over="ignore"):
            ratio = np.divide(c, s * s, out=np.zeros(t.shape), where=c > 0)
            return np.exp(-ratio - ls[j, None])

    pv, pe, pok = integrate_1d_batch(f, edges[:-1].ravel(), edges[1:].ravel(),
                                     tol=spec.abs_tol / ANGULAR_PIECES, cap=spec.max_subdivisions)
    vals = pv.reshape(ANGULAR_PIECES, N).sum(axis=0)
    errs = pe.reshape(ANGULAR_PIECES, N).sum(axis=0)
    ok = pok.reshape(ANGULAR_PIECES, N).all(axis=0)
    vals = np.where(p1 >= p0, vals, -vals) * (2 / math.pi)
    errs = errs * (2 / math.pi)
    if not np.all(ok):
        raise AccuracyError("angular integral did not converge", vals.reshape(shape), errs.reshape(shape))
    return vals.reshape(shape), errs.reshape(shape)


def _polar(a, b):
    # tilde-e2(a, b) = sgn(ab) * (2/pi) int_{phi}^{pi/2} exp(-pi b^2 / sin^2) with phi = arctan(|b|/|a|)
    return np.sign(a) * np.sign(b), np.arctan2(np.abs(b), np.abs(a))


def tilde_e2_array(a, b, spec=DEFAULT_SPEC, log_scale=0.0):
    """Vectorized tilde-e2, optionally multiplied by exp(-log_scale); zero where b == 0."""
    a, b, ls = np.broadcast_arrays(*(np.asarray(t, dtype=float) for t in (a, b, log_scale)))
    sign, phi = _polar(a, b)
    out = np.zeros(a.shape)
    nz = sign != 0
    if np.any(nz):
        out[nz] = sign[nz] * angular_integral(phi[nz], math.pi / 2, b[nz], ls[nz], spec)[0]
    return out


def tilde_e2_difference(a, ap, b, spec=DEFAULT_SPEC, log_scale=0.0):
    """exp(-log_scale) * (tilde-e2(a, b) - tilde-e2(ap, b)), vectorized.

    When both terms carry the same sign they are merged into a single
    integral between the two angles, avoiding cancellation.
    """
    a, ap, b, ls = np.broadcast_arrays(*(np.asarray(t, dtype=float) for t in (a, ap, b, log_scale)))
    sa, pa = _polar(a, b)
    sp, pp = _polar(ap, b)
    out = np.zeros(a.shape)
    live = b != 0
    same = live & (sa == sp) & (sa != 0)
    if np.any(same):
        out[same] = sa[same] * angular_integral(pa[same], pp[same], b[same], ls[same], spec)[0]
    first = live & ~same & (sa != 0)
    if np.any(first):
        out[first] += sa[first] * angular_integral(pa[first], math.pi / 2, b[first], ls[first], spec)[0]
    second = live & ~same & (sp != 0)
    if np.any(second):
        out[second] -= sp[second] * angular_integral(pp[second], math.pi / 2, b[second], ls[second], spec)[0]
    return out


def tilde_e2(a, b, spec=DEFAULT_SPEC):
    """tilde-e2(a, b); by convention 0 at b = 0, where it jumps between -+sgn(a)."""
    if b == 0 or a == 0:
        return 0.0
    return float(tilde_e2_array(a, b, spec))


def e2_direct(u1, u2, spec=DEFAULT_SPEC):
    """e2 from its defining integral 2 u2 int_0^1 exp(-pi t^2 u2^2) E1(t u1) dt."""
    if u2 == 0 or u1 == 0:
        return 0.0
    res = integrate_1d(lambda t: np.exp(-math.pi * (t * u2) ** 2) * e1(t * u1), 0.0, 1.0,
                       tol=spec.abs_tol, cap=spec.max_subdivisions)
    if not res.converged:
        raise AccuracyError("e2 did not converge", 2 * u2 * res.value, 2 * abs(u2) * res.error_estimate)
    return 2 * u2 * res.value


def e2(u1, u2, spec=DEFAULT_SPEC):
    """e2(u1, u2) = (2/pi) arctan(u1/u2) - tilde-e2(u1, u2)."""
    if u2 == 0:
        return e2_direct(u1, u2, spec)
    return 2 / math.pi * math.atan(u1 / u2) - tilde_e2(u1, u2, spec)


def _e2_flat_raw(args: BoostArgs, spec):
    return (-tilde_e2(args.u1, args.u2, spec) - tilde_e2(args.u1p, args.u2p, spec)
            + float(np.sign(args.u2) * np.sign(args.u2p)))


def _wall_direction(alpha):
    # unit direction in the (u1, u2) plane crossing both walls u2 = 0 and u2' = 0 transversally
    best, best_score = None, -1.0
    r = math.sqrt(1 + alpha * alpha)
    for k in range(12):
        phi = math.pi * (k + 0.5) / 12
        c, s = math.cos(phi), math.sin(phi)
        score = min(abs(s), abs(c + alpha * s) / r)
        if score > best_score:
            best, best_score = (c, s), score
    return best


def on_wall(args: BoostArgs):
    scale = max(abs(args.u1), abs(args.u2), 1e-300)
    return abs(args.u2) <= WALL_TOL * scale or abs(args.u2p) <= WALL_TOL * scale


def e2_flat(alpha, u1, u2, spec=DEFAULT_SPEC):
    """E2(alpha; u1, u2) = -te2(u1,u2) - te2(u1',u2') + sgn(u2) sgn(u2').

    On a wall (u2 = 0 or u2' = 0, including the origin) the function is
    evaluated as the symmetric average of nearby values at offsets +-h and
    +-2h along a direction crossing both walls, Richardson-combined so the
    error is O(h^4) with h = WALL_OFFSET.
    """
    args = BoostArgs.from_flat(alpha, u1, u2)
    if not on_wall(args):
        return _e2_flat_raw(args, spec)
    d1, d2 = _wall_direction(alpha)

    def avg(h):
        plus = BoostArgs.from_flat(alpha, u1 + h * d1, u2 + h * d2)
        minus = BoostArgs.from_flat(alpha, u1 - h * d1, u2 - h * d2)
        return 0.5 * (_e2_flat_raw(plus, spec) + _e2_flat_raw(minus, spec))

    h = WALL_OFFSET
    return (4 * avg(h) - avg(2 * h)) / 3


def boost_parameter(C1, C2, V: InnerProductSpace):
    """alpha = -(C1, C2) / sqrt(Delta(C1, C2)).

    The minus sign converts to pairings where the C's are negative vectors;
    with it the flat coordinates u1', u2' become the pairings of x with the
    normalized C_{2 perp 1} and C_1.
    """
    d = delta(C1, C2, V)
    if not d.positive:
        raise IncidenceError("Delta(C1, C2) must be positive")
    return -float(inner(C1, C2, V)) / math.sqrt(d.value)


def boosted_coordinates(C1, C2, x, V: InnerProductSpace):
    """(alpha, u1, u2) with u1 = (x, und C_{1 perp 2}), u2 = (x, und C_2)."""
    for c in (C1, C2):
        if inner(c, c, V) == 0:
            raise NullVectorError("configuration vectors must be non-null")
    alpha = boost_parameter(C1, C2, V)
    u1 = float(inner(x, normalize(perp_component(C1, C2, V), V), V))
    u2 = float(inner(x, normalize(C2, V), V))
    return alpha, u1, u2


def e2_boosted(C1, C2, x, V: InnerProductSpace, spec=DEFAULT_SPEC):
    """Boosted generalized error function E2(C1, C2; x)."""
    alpha, u1, u2 = boosted_coordinates(C1, C2, x, V)
    return e2_flat(alpha, u1, u2, spec)


def arctan_limit(C1, C2, V: InnerProductSpace):
    """Value of E2(C1, C2; 0): (2/pi) arctan of the boost parameter."""
    return 2 / math.pi * math.atan(boost_parameter(C1, C2, V))
