"""Negative planes, frames, the Schwartz form and its primitive, the surface S.

Conventions
-----------
Frames are stored as n x r matrices whose columns are zeta_1, ..., zeta_r with
(zeta, zeta) = -1_r. Tangent vectors at a frame are n x r matrices as well;
horizontal ones have every column orthogonal to the plane.

The surface S is parametrized by (s, t) in [0, 1]^2 through
span{B1(s), B2(t)}. Its boundary runs gamma_1 + gamma_2' - gamma_1' - gamma_2,
which traverses the parameter square clockwise, so integrals over S carry
the orientation ds ^ dt with a minus sign:

    int_S omega = - int int omega(d/ds, d/dt) ds dt.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .errfn import DEFAULT_SPEC, QuadratureSpec, tilde_e2_difference
from .errors import (AccuracyError, IncidenceError, InputError, NotNegativePlaneError,
                     RegularityError, SingularLocusError)
from .quadrature import integrate_1d_batch, integrate_2d
from .quadspace import InnerProductSpace, delta, delta_gram, inner, normalize, perp_component

REGULARITY_TOL = 1e-9
SINGULAR_R = 1e-12
FOUR_PI = 4 * math.pi


@dataclass(frozen=True)
class OrientedFrame:
    zeta1: np.ndarray
    zeta2: np.ndarray

    @property
    def matrix(self):
        return np.stack([self.zeta1, self.zeta2], axis=1)

    @classmethod
    def from_matrix(cls, Z):
        Z = np.asarray(Z, dtype=float)
        return cls(Z[:, 0].copy(), Z[:, 1].copy())


@dataclass(frozen=True)
class TangentPair:
    """Horizontal tangent vectors eta = [eta1, eta2], mu = [mu1, mu2] as n x 2 matrices."""
    eta: np.ndarray
    mu: np.ndarray


@dataclass(frozen=True)
class IncidenceReport:
    negative: tuple
    deltas: tuple
    projections: tuple
    delta4: float
    same_component: bool
    passed: bool

    @property
    def failures(self):
        out = []
        if not all(self.negative):
            out.append("non-negative input vector")
        if not all(d > 0 for d in self.deltas):
            out.append("pair determinants must be positive")
        if not all(p < 0 for p in self.projections):
            out.append("projected pairings must be negative")
        if not self.delta4 > 0:
            out.append("four-vector Gram determinant must be positive")
        if not self.same_component:
            out.append("corner planes not on one component")
        return out


def _pos_plane(b1, b2, V):
    B = np.stack([b1, b2], axis=1)
    P = -(B.T @ V.gram @ B)
    return B, P


def validate_incidence(C1, C2, C1p, C2p, V: InnerProductSpace) -> IncidenceReport:
    """Check the incidence conditions on {C1, C2, C1', C2'} and the component test."""
    Cs = [V.vec(c) for c in (C1, C2, C1p, C2p)]
    C1, C2, C1p, C2p = Cs
    negative = tuple(bool(inner(c, c, V) < 0) for c in Cs)
    pairs = [(C1, C2), (C1p, C2), (C1, C2p), (C1p, C2p)]
    deltas = tuple(delta(a, b, V).value for a, b in pairs)
    projections = (float("nan"),) * 4
    same = False
    if all(negative):
        projections = (
            float(inner(perp_component(C2, C1, V), perp_component(C2p, C1, V), V)),
            float(inner(perp_component(C2, C1p, V), perp_component(C2p, C1p, V), V)),
            float(inner(perp_component(C1, C2, V), perp_component(C1p, C2, V), V)),
            float(inner(perp_component(C1, C2p, V), perp_component(C1p, C2p, V), V)),
        )
        if all(d > 0 for d in deltas):
            frames = [orthonormal_frame(a, b, V) for a, b in pairs]
            try:
                same = all(same_component(frames[0], f, V) for f in frames[1:])
            except NotNegativePlaneError:
                same = False
    d4 = delta_gram([C1, C1p, C2, C2p], V)
    passed = (all(negative) and all(d > 0 for d in deltas) and all(p < 0 for p in projections)
              and d4 > 0 and same)
    return IncidenceReport(negative, deltas, projections, d4, bool(same), bool(passed))


@dataclass(frozen=True)
class FrameConfig:
    C1: np.ndarray
    C2: np.ndarray
    C1p: np.ndarray
    C2p: np.ndarray
    V: InnerProductSpace = field(repr=False)
    validation: IncidenceReport = field(repr=False)

    @classmethod
    def build(cls, C1, C2, C1p, C2p, V: InnerProductSpace, require_valid=True):
        vecs = [np.array(V.vec(c), dtype=float) for c in (C1, C2, C1p, C2p)]
        report = validate_incidence(*vecs, V)
        if require_valid and not report.passed:
            raise IncidenceError("configuration fails: " + ", ".join(report.failures))
        return cls(*vecs, V, report)

    @property
    def vectors(self):
        return (self.C1, self.C2, self.C1p, self.C2p)

    def pairs(self):
        return [(self.C1, self.C1p), (self.C2, self.C2p)]


def orthonormal_frame(b1, b2, V: InnerProductSpace) -> OrientedFrame:
    """[b1, b2] P^{-1/2} with P = -(B, B) and the symmetric square root."""
    B, P = _pos_plane(V.vec(b1), V.vec(b2), V)
    if not (P[0, 0] > 0 and np.linalg.det(P) > 0):
        raise NotNegativePlaneError("vectors do not span a negative 2-plane")
    return OrientedFrame.from_matrix(B @ _inv_sqrt_2x2(P))


def _inv_sqrt_2x2(P):
    # for positive 2x2 P: sqrt(P) = (P + sqrt(det) I) / sqrt(tr + 2 sqrt(det))
    d = np.sqrt(P[..., 0, 0] * P[..., 1, 1] - P[..., 0, 1] * P[..., 1, 0])
    rho = np.sqrt(P[..., 0, 0] + P[..., 1, 1] + 2 * d)
    S = (P + d[..., None, None] * np.eye(2)) / rho[..., None, None]
    det_s = d  # det sqrt(P) = sqrt(det P)
    Si = np.empty_like(S)
    Si[..., 0, 0] = S[..., 1, 1]
    Si[..., 1, 1] = S[..., 0, 0]
    Si[..., 0, 1] = -S[..., 0, 1]
    Si[..., 1, 0] = -S[..., 1, 0]
    return Si / det_s[..., None, None]


def _d_inv_sqrt_2x2(P, dP):
    """Derivative of P^{-1/2} along dP, from the closed-form square root."""
    d = P[..., 0, 0] * P[..., 1, 1] - P[..., 0, 1] * P[..., 1, 0]
    sd = np.sqrt(d)
    rho = np.sqrt(P[..., 0, 0] + P[..., 1, 1] + 2 * sd)
    dd = (dP[..., 0, 0] * P[..., 1, 1] + P[..., 0, 0] * dP[..., 1, 1]
          - dP[..., 0, 1] * P[..., 1, 0] - P[..., 0, 1] * dP[..., 1, 0])
    dsd = dd / (2 * sd)
    drho = (dP[..., 0, 0] + dP[..., 1, 1] + 2 * dsd) / (2 * rho)
    S = (P + sd[..., None, None] * np.eye(2)) / rho[..., None, None]
    dS = (dP + dsd[..., None, None] * np.eye(2)) / rho[..., None, None] - S * (drho / rho)[..., None, None]
    Si = _inv_sqrt_2x2(P)
    return -Si @ dS @ Si


def horizontal(zeta, eta, gram):
    """Project the columns of eta onto the orthogonal complement of span(zeta)."""
    # (zeta, zeta) = -1, so eta - zeta (zeta,zeta)^{-1} (zeta, eta) = eta + zeta (zeta, eta)
    return eta + zeta @ (np.swapaxes(zeta, -1, -2) @ gram @ eta)


class SurfaceChart:
    """The geodesic square phi(s, t) = span{B1(s), B2(t)} over [0, 1]^2."""

    GRID = 17

    def __init__(self, config: FrameConfig, check=True):
        self.config = config
        self.V = config.V
        self.gram = config.V.gram
        self._B0 = np.stack([config.C1, config.C2], axis=1)
        self._dB1 = config.C1p - config.C1
        self._dB2 = config.C2p - config.C2
        if check:
            g = np.linspace(0.0, 1.0, self.GRID)
            S, T = np.meshgrid(g, g, indexing="ij")
            P = self._P(S, T)
            if not (np.all(P[..., 0, 0] > 0) and np.all(np.linalg.det(P) > 0)):
                raise NotNegativePlaneError("chart leaves the space of negative planes")

    def basis(self, s, t):
        s = np.asarray(s, dtype=float)
        t = np.asarray(t, dtype=float)
        b1 = self.config.C1 + s[..., None] * self._dB1
        b2 = self.config.C2 + t[..., None] * self._dB2
        return np.stack([b1, b2], axis=-1)

    def _P(self, s, t):
        B = self.basis(s, t)
        return -(np.swapaxes(B, -1, -2) @ self.gram @ B)

    def frames(self, s, t):
        """Orthonormal frames zeta(s, t), shape (..., n, 2)."""
        B = self.basis(s, t)
        P = -(np.swapaxes(B, -1, -2) @ self.gram @ B)
        return B @ _inv_sqrt_2x2(P)

    def frame_derivatives(self, s, t):
        """zeta and its raw partial derivatives d zeta/ds, d zeta/dt."""
        B = self.basis(s, t)
        G = self.gram
        Bt = np.swapaxes(B, -1, -2)
        P = -(Bt @ G @ B)
        Si = _inv_sqrt_2x2(P)
        out = [B @ Si]
        for k, dv in ((0, self._dB1), (1, self._dB2)):
            dB = np.zeros_like(B)
            dB[..., :, k] = dv
            dP = -(np.swapaxes(dB, -1, -2) @ G @ B + Bt @ G @ dB)
            out.append(dB @ Si + B @ _d_inv_sqrt_2x2(P, dP))
        return out

    def tangents(self, s, t):
        """zeta with horizontal tangent matrices eta = d/ds, mu = d/dt."""
        Z, Zs, Zt = self.frame_derivatives(s, t)
        return Z, horizontal(Z, Zs, self.gram), horizontal(Z, Zt, self.gram)

    def grid_frames(self, m):
        g = np.linspace(0.0, 1.0, m)
        S, T = np.meshgrid(g, g, indexing="ij")
        return self.frames(S.ravel(), T.ravel())

    def center_frame(self):
        return self.frames(0.5, 0.5)


class HypercubeChart:
    """phi(s_1..s_r) = span{B_1(s_1), ..., B_r(s_r)} with B_j(s) = (1-s) C_j + s C_j'."""

    def __init__(self, pairs, V: InnerProductSpace, grid=9, check=True):
        self.V = V
        self.gram = V.gram
        self.C = np.stack([V.vec(c) for c, _ in pairs], axis=1)
        self.Cp = np.stack([V.vec(cp) for _, cp in pairs], axis=1)
        self.r = len(pairs)
        if check:
            P = -self._gram_of(self.basis(self.grid_points(grid)))
            if np.any(np.linalg.eigvalsh(P)[..., 0] <= 0):
                raise NotNegativePlaneError("hypercube chart leaves the space of negative planes")

    def grid_points(self, m):
        g = np.linspace(0.0, 1.0, m)
        return np.array(list(itertools.product(g, repeat=self.r)))

    def basis(self, s):
        s = np.asarray(s, dtype=float)
        return self.C + s[..., None, :] * (self.Cp - self.C)

    def _gram_of(self, B):
        return np.swapaxes(B, -1, -2) @ self.gram @ B

    def frames(self, s):
        B = self.basis(s)
        w, U = np.linalg.eigh(-self._gram_of(B))
        return B @ (U * (w ** -0.5)[..., None, :]) @ np.swapaxes(U, -1, -2)

    def grid_frames(self, m):
        return self.frames(self.grid_points(m))

    def center_frame(self):
        return self.frames(np.full(self.r, 0.5))


def chart_point(chart: SurfaceChart, s, t) -> OrientedFrame:
    if not (0 <= s <= 1 and 0 <= t <= 1):
        raise InputError("(s, t) must lie in the unit square")
    return OrientedFrame.from_matrix(chart.frames(s, t))


def tangent_frames(chart: SurfaceChart, s, t) -> TangentPair:
    if not (0 <= s <= 1 and 0 <= t <= 1):
        raise InputError("(s, t) must lie in the unit square")
    _, eta, mu = chart.tangents(s, t)
    return TangentPair(eta, mu)


def r_quantity(x, frame: OrientedFrame, V: InnerProductSpace):
    """R(x, z) = (x, zeta_1)^2 + (x, zeta_2)^2."""
    p = V.vec(x) @ V.gram @ frame.matrix
    return float(p @ p)


def majorant_matrix(Z, gram):
    """Matrix of the majorant (x,x)_z = (x,x) + 2 R(x,z) for frames Z (..., n, r)."""
    GZ = gram @ Z
    return gram + 2 * GZ @ np.swapaxes(GZ, -1, -2)


def majorant(x, frame: OrientedFrame, V: InnerProductSpace):
    x = V.vec(x)
    return float(inner(x, x, V) + 2 * r_quantity(x, frame, V))


def phi_values(X, Z, eta, mu, gram, log_scale=0.0):
    """The Schwartz 2-form phi^o(x)(eta, mu) for arrays; X (..., n) broadcast against frames (..., n, 2)."""
    X = np.asarray(X, dtype=float)
    xG = (X @ gram)[..., None, :]
    pz = (xG @ Z)[..., 0, :]
    pe = (xG @ eta)[..., 0, :]
    pm = (xG @ mu)[..., 0, :]
    R = np.sum(pz * pz, axis=-1)
    wedge = pe[..., 0] * pm[..., 1] - pe[..., 1] * pm[..., 0]
    eg = np.swapaxes(eta, -1, -2) @ gram @ mu
    omega = eg[..., 0, 1] - eg[..., 1, 0]
    return 2 * (wedge - omega / FOUR_PI) * np.exp(-2 * np.pi * R - log_scale)


def _check_horizontal(frame_matrix, T, gram, tol=1e-10):
    scale = max(1.0, float(np.max(np.abs(T))))
    if np.max(np.abs(frame_matrix.T @ gram @ T)) > tol * scale:
        raise InputError("tangent components must be orthogonal to the plane")


def phi_km_o(x, frame: OrientedFrame, tp: TangentPair, V: InnerProductSpace):
    """2 (omega_1 ^ omega_2 - Omega / 4 pi) exp(-2 pi R) on the pair (eta, mu)."""
    Z = frame.matrix
    _check_horizontal(Z, tp.eta, V.gram)
    _check_horizontal(Z, tp.mu, V.gram)
    return float(phi_values(V.vec(x), Z, tp.eta, tp.mu, V.gram))


def psi_values(X, Z, dZ, gram, log_scale=0.0):
    """psi(x) on lifted tangents dZ at frames Z (no horizontal projection)."""
    X = np.asarray(X, dtype=float)
    xG = (X @ gram)[..., None, :]
    pz = (xG @ Z)[..., 0, :]
    pd = (xG @ dZ)[..., 0, :]
    R = np.sum(pz * pz, axis=-1)
    z2d1 = np.einsum("...i,ij,...j->...", Z[..., :, 1], gram, dZ[..., :, 0])
    with np.errstate(divide="ignore", invalid="ignore"):
        core = (pz[..., 0] * pd[..., 1] - pz[..., 1] * pd[..., 0]) / R - z2d1
    return -np.exp(-2 * np.pi * R - log_scale) * core / (2 * np.pi)


def psi_o(x, frame: OrientedFrame, eta, V: InnerProductSpace):
    """Primitive 1-form psi(x) evaluated on the tangent [eta1, eta2] (n x 2)."""
    Z = frame.matrix
    x = V.vec(x)
    R = r_quantity(x, frame, V)
    if R < SINGULAR_R:
        raise SingularLocusError("R(x, z) vanishes: z lies on D_x")
    return float(psi_values(x, Z, np.asarray(eta, dtype=float), V.gram))


def psi_m_values(X, Z, dZ, gram, log_scale=0.0):
    """Psi_M^o(x) = exp(-2 pi R) ((x,zeta_1)(x,dzeta_2) - (x,zeta_2)(x,dzeta_1))."""
    X = np.asarray(X, dtype=float)
    xG = (X @ gram)[..., None, :]
    pz = (xG @ Z)[..., 0, :]
    pd = (xG @ dZ)[..., 0, :]
    R = np.sum(pz * pz, axis=-1)
    return np.exp(-2 * np.pi * R - log_scale) * (pz[..., 0] * pd[..., 1] - pz[..., 1] * pd[..., 0])


def surface_integral_phi(x, chart: SurfaceChart, tol=1e-9, cap=4096, log_scale=0.0):
    """I(x; S) = int_S phi^o(x), by adaptive quad-tree quadrature.

    log_scale multiplies the integrand by exp(-log_scale), which keeps
    theta-series terms with large negative (x, x) in floating range.
    """
    x = chart.V.vec(x)
    G = chart.gram

    def f(S, T):
        Z, eta, mu = chart.tangents(S, T)
        return phi_values(x, Z, eta, mu, G, log_scale)

    res = integrate_2d(f, tol=tol, cap=cap)
    if not res.converged:
        raise AccuracyError("surface integral did not converge", -res.value, res.error_estimate)
    return -res.value


# ---------------------------------------------------------------- boundary


def _unit_path(P0, P1, G):
    """t -> und((1-t) P0 + t P1) and its t-derivative, for negative P(t)."""
    dP = P1 - P0

    def path(t):
        B = P0 + t[..., None] * dP
        nb = -np.einsum("...i,ij,...j->...", B, G, B)
        rho = np.sqrt(nb)
        drho = -np.einsum("...i,ij,j->...", B, G, dP) / rho
        u = B / rho[..., None]
        du = dP / rho[..., None] - B * (drho / rho ** 2)[..., None]
        return u, du
    return path


def boundary_lifts(config: FrameConfig):
    """The four boundary geodesics with their canonical horizontal lifts.

    Returns a list of (sign, lift) where lift(t) gives (Z, dZ) of shape
    (..., n, 2); signs realize dS = gamma_1 + gamma_2' - gamma_1' - gamma_2.
    """
    V, G = config.V, config.V.gram
    C1, C2, C1p, C2p = config.vectors

    def first_fixed(C, A, Ap):
        u0 = normalize(C, V)
        path = _unit_path(perp_component(A, C, V), perp_component(Ap, C, V), G)

        def lift(t):
            u, du = path(np.asarray(t, dtype=float))
            Z = np.stack([np.broadcast_to(u0, u.shape), u], axis=-1)
            dZ = np.stack([np.zeros_like(du), du], axis=-1)
            return Z, dZ
        return lift

    def second_fixed(C, A, Ap):
        u0 = normalize(C, V)
        path = _unit_path(perp_component(A, C, V), perp_component(Ap, C, V), G)

        def lift(s):
            u, du = path(np.asarray(s, dtype=float))
            Z = np.stack([u, np.broadcast_to(u0, u.shape)], axis=-1)
            dZ = np.stack([du, np.zeros_like(du)], axis=-1)
            return Z, dZ
        return lift

    return [
        (1.0, first_fixed(C1, C2, C2p)),     # gamma_1
        (1.0, second_fixed(C2p, C1, C1p)),   # gamma_2'
        (-1.0, first_fixed(C1p, C2, C2p)),   # gamma_1'
        (-1.0, second_fixed(C2, C1, C1p)),   # gamma_2
    ]


def boundary_line_integrals(X, config: FrameConfig, form, log_scale=0.0, spec=DEFAULT_SPEC):
    """Signed sum over dS of int form(x, Z, dZ) dt for each row of X.

    form(X, Z, dZ, log_scale) must broadcast like psi_values.
    """
    X = np.atleast_2d(np.asarray(X, dtype=float))
    N = X.shape[0]
    ls = np.broadcast_to(np.asarray(log_scale, dtype=float), (N,))
    total = np.zeros(N)
    for sign, lift in boundary_lifts(config):
        def f(t, idx, lift=lift):
            Z, dZ = lift(t)
            return form(X[idx][:, None, :], Z, dZ, config.V.gram, ls[idx][:, None])
        vals, errs, ok = integrate_1d_batch(f, np.zeros(N), np.ones(N), tol=spec.abs_tol,
                                            cap=spec.max_subdivisions)
        if not np.all(ok):
            raise AccuracyError("boundary integral did not converge", vals, errs)
        total += sign * vals
    return total


def is_regular(x, config: FrameConfig):
    x = config.V.vec(x)
    pairings = np.abs(np.array([inner(x, c, config.V) for c in config.vectors]))
    scale = np.linalg.norm(x) * max(np.linalg.norm(c) for c in config.vectors)
    return bool(scale > 0 and np.min(pairings) > REGULARITY_TOL * scale)


def boundary_integral_psi(x, chart: SurfaceChart, spec=DEFAULT_SPEC):
    """Signed line integral of psi(x) over dS along the canonical lifts."""
    config = chart.config
    x = config.V.vec(x)
    if not is_regular(x, config):
        raise RegularityError("boundary integral needs (x, C) != 0 for all four C")
    return float(boundary_line_integrals(x[None, :], config, psi_values, 0.0, spec)[0])


def boundary_closed_form(Y, config: FrameConfig, spec=DEFAULT_SPEC, log_scale=0.0):
    """Eight-term tilde-e2 value of the psi boundary integral at y (rows of Y).

    With x = y sqrt(2), each boundary geodesic contributes a difference of two
    tilde-e2 values whose second argument is the pairing of x with the fixed
    normalized vector. Multiplied by exp(-log_scale).
    """
    V = config.V
    Y = np.atleast_2d(np.asarray(Y, dtype=float))
    X = Y * math.sqrt(2.0)
    C1, C2, C1p, C2p = config.vectors

    def pair(c):
        return X @ V.gram @ normalize(c, V)

    def edge(C, A, Ap):
        return tilde_e2_difference(pair(perp_component(A, C, V)), pair(perp_component(Ap, C, V)),
                                   pair(C), spec, log_scale)

    total = (edge(C1, C2, C2p) - edge(C2p, C1, C1p) - edge(C1p, C2, C2p) + edge(C2, C1, C1p))
    return total / 4


# ------------------------------------------------------- intersection data


def phi2(x, config: FrameConfig):
    """Phi_2(x) = 1/4 [sgn(x,C1) - sgn(x,C1')][sgn(x,C2) - sgn(x,C2')]."""
    return phi_r(x, config.pairs(), config.V)


def phi_r(x, pairs, V: InnerProductSpace):
    """2^{-r} prod_j [sgn(x, C_j) - sgn(x, C_j')]; broadcasts over rows of x."""
    X = np.asarray(x, dtype=float)
    out = np.ones(X.shape[:-1])
    for c, cp in pairs:
        out = out * (np.sign(X @ V.gram @ V.vec(c)) - np.sign(X @ V.gram @ V.vec(cp))) / 2
    return float(out) if out.ndim == 0 else out


def intersection_point(x, config: FrameConfig):
    """(s0, t0) with x orthogonal to span{B1(s0), B2(t0)}, or None."""
    V = config.V
    x = V.vec(x)
    out = []
    for c, cp in config.pairs():
        a, ap = float(inner(x, c, V)), float(inner(x, cp, V))
        if a == ap:
            return None
        s = a / (a - ap)
        if not 0 <= s <= 1:
            return None
        out.append(s)
    return tuple(out)


def intersection_number(x, config: FrameConfig):
    """sgn((x,C1') - (x,C1)) * sgn((x,C2') - (x,C2)) for regular x with Phi_2(x) != 0."""
    V = config.V
    x = V.vec(x)
    if not is_regular(x, config) or phi2(x, config) == 0:
        raise RegularityError("intersection number needs regular x with Phi_2(x) != 0")
    C1, C2, C1p, C2p = config.vectors
    return int(np.sign(inner(x, C1p, V) - inner(x, C1, V)) * np.sign(inner(x, C2p, V) - inner(x, C2, V)))


def intersection_jacobian_sign(x, config: FrameConfig):
    """Sign of the Jacobian of (s, t) -> ((x, zeta_1), (x, zeta_2)) at the crossing with D_x.

    Uses the analytic frame derivatives of the chart, independently of the
    sign formula in intersection_number.
    """
    V = config.V
    x = V.vec(x)
    p = intersection_point(x, config)
    if p is None:
        raise RegularityError("S does not meet D_x")
    _, Zs, Zt = SurfaceChart(config, check=False).frame_derivatives(*p)
    xg = x @ V.gram
    return int(np.sign(np.linalg.det(np.array([xg @ Zs, xg @ Zt]).T)))


def same_component(f1: OrientedFrame, f2: OrientedFrame, V: InnerProductSpace, tol=1e-12):
    """Sign test on det((f1, f2)) for oriented negative 2-planes."""
    d = float(np.linalg.det(V.pairing_matrix(f1.matrix, f2.matrix)))
    if abs(d) < tol:
        raise NotNegativePlaneError("pairing determinant vanishes; planes are not comparable")
    return d > 0
