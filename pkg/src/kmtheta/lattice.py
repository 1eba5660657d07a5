"""Even lattices, discriminant groups and enumeration under a majorant."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from sympy import Matrix
from sympy.matrices.normalforms import smith_normal_decomp

from .errors import DegenerateFormError, InputError
from .geometry import majorant_matrix
from .quadspace import InnerProductSpace


class EvenLattice:
    """Lattice spanned by the columns of basis, with integral even Gram matrix."""

    def __init__(self, basis, V: InnerProductSpace):
        basis = np.array(basis, dtype=float)
        if basis.shape != (V.n, V.n):
            raise InputError("lattice basis must be n x n")
        g = basis.T @ V.gram @ basis
        gi = np.rint(g)
        if np.max(np.abs(g - gi)) > 1e-9:
            raise InputError("lattice Gram matrix is not integral")
        gi = gi.astype(np.int64)
        if np.any(gi.diagonal() % 2):
            raise InputError("lattice is not even")
        if round(abs(np.linalg.det(gi))) == 0:
            raise DegenerateFormError("lattice Gram matrix is singular")
        self.basis = basis
        self.V = V
        self.gram = gi
        self.n = V.n

    @property
    def discriminant(self):
        return int(round(abs(np.linalg.det(self.gram))))

    def ambient(self, coords):
        """Ambient vectors for (rational or float) lattice coordinates."""
        return np.asarray(coords, dtype=float) @ self.basis.T


@dataclass(frozen=True)
class Coset:
    """mu in L^dual / L, stored as lattice coordinates reduced to [0, 1)."""
    mu: tuple

    @classmethod
    def of(cls, coords):
        return cls(tuple(Fraction(c) % 1 for c in coords))

    @property
    def denominator(self):
        return math.lcm(*(f.denominator for f in self.mu))

    def as_float(self):
        return np.array([float(f) for f in self.mu])

    def __neg__(self):
        return Coset.of([-f for f in self.mu])

    def __str__(self):
        return "(" + ",".join(str(f) for f in self.mu) + ")"


@dataclass(frozen=True)
class MajorantForm:
    matrix: np.ndarray

    def __post_init__(self):
        M = np.asarray(self.matrix, dtype=float)
        if M.ndim != 2 or M.shape[0] != M.shape[1] or not np.allclose(M, M.T):
            raise InputError("majorant must be a symmetric matrix")
        np.linalg.cholesky(M)  # raises LinAlgError unless positive definite

    def norm(self, X):
        X = np.asarray(X, dtype=float)
        return np.einsum("...i,ij,...j->...", X, self.matrix, X)


def _snf(M):
    D, U, W = smith_normal_decomp(Matrix(M))
    return D, U, W


def discriminant_group(L: EvenLattice):
    """Representatives of L^dual / L in lattice coordinates, via the Smith form of the Gram matrix."""
    D, U, W = _snf(L.gram.tolist())
    # U gram W = D, so gram mu in Z^n  <=>  mu = W D^{-1} k with k integral
    d = [int(D[i, i]) for i in range(L.n)]
    out = set()
    grids = np.indices(d).reshape(L.n, -1).T
    for k in grids:
        mu = [sum(Fraction(int(W[i, j]) * int(k[j]), d[j]) for j in range(L.n)) for i in range(L.n)]
        out.add(Coset.of(mu))
    return sorted(out, key=lambda c: c.mu)


def pairing(L: EvenLattice, mu: Coset, nu: Coset) -> Fraction:
    return sum(mu.mu[i] * int(L.gram[i, j]) * nu.mu[j] for i in range(L.n) for j in range(L.n))


def coset_norm(L: EvenLattice, mu: Coset) -> Fraction:
    """Q(mu) = (mu, mu)/2, well defined modulo 1."""
    return pairing(L, mu, mu) / 2


def majorant_on_S(chart, grid=9, safety=0.9) -> MajorantForm:
    """A positive form below every majorant (x,x)_z, z in S.

    The reference form is the majorant at the chart centre; the returned form is
    safety * (min over grid points of the smallest relative eigenvalue) * reference.
    """
    G = chart.gram
    ref = majorant_matrix(chart.center_frame(), G)
    w, U = np.linalg.eigh(ref)
    half = U @ np.diag(w ** -0.5) @ U.T
    Ms = majorant_matrix(chart.grid_frames(grid), G)
    nu = float(np.min(np.linalg.eigvalsh(half @ Ms @ half)[:, 0]))
    if nu <= 0:
        raise InputError("majorants on the grid are not uniformly positive")
    return MajorantForm(safety * nu * ref)


def enumerate_points(basis, offset, M: MajorantForm, bound):
    """All x = basis @ (offset + k), k integral, with (x,x)_M <= bound.

    Fincke-Pohst style: coordinates are fixed from last to first using the
    Cholesky factor of basis^T M basis. Returns (X, K, norms) sorted by norm,
    then lexicographically by k.
    """
    basis = np.asarray(basis, dtype=float)
    offset = np.asarray(offset, dtype=float)
    m = basis.shape[1]
    A = basis.T @ M.matrix @ basis
    R = np.linalg.cholesky(A).T  # A = R^T R, R upper triangular
    slack = 1e-9 * max(1.0, bound)
    K = np.zeros((1, 0), dtype=np.int64)
    partial = np.zeros(1)          # sum of squared rows already fixed
    lin = np.zeros((1, m))          # running R[i, j>i] y_j contributions per row i
    for i in range(m - 1, -1, -1):
        rii = R[i, i]
        c = -lin[:, i] / rii
        rem = np.maximum(bound + slack - partial, 0.0)
        w = np.sqrt(rem) / rii
        lo = np.ceil(c - w - offset[i]).astype(np.int64)
        hi = np.floor(c + w - offset[i]).astype(np.int64)
        cnt = np.maximum(hi - lo + 1, 0)
        rows = np.repeat(np.arange(len(lo)), cnt)
        start = np.repeat(lo - np.concatenate([[0], np.cumsum(cnt)[:-1]]), cnt)
        ki = start + np.arange(rows.size)
        yi = offset[i] + ki
        partial = partial[rows] + (rii * yi + lin[rows, i]) ** 2
        lin = lin[rows] + np.outer(yi, R[:, i])
        K = np.concatenate([ki[:, None], K[rows]], axis=1)
    Y = offset + K
    X = Y @ basis.T
    norms = np.einsum("ij,jk,ik->i", X, M.matrix, X)
    keep = norms <= bound + slack
    X, K, norms = X[keep], K[keep], norms[keep]
    order = np.lexsort(tuple(K[:, j] for j in range(m - 1, -1, -1)) + (np.round(norms, 9),))
    return X[order], K[order], norms[order]


def enumerate_coset(L: EvenLattice, mu: Coset, M: MajorantForm, bound):
    """All x in L + mu with (x,x)_M <= bound; returns (X ambient, K lattice coords, norms)."""
    if not bound > 0:
        raise InputError("bound must be positive")
    return enumerate_points(L.basis, mu.as_float(), M, bound)


def q_exponents(L: EvenLattice, mu: Coset, K):
    """Exact exponents (x,x)/2 for x = mu + k, as Fractions."""
    N = mu.denominator
    num = np.array([int(f * N) for f in mu.mu], dtype=np.int64)
    Y = num[None, :] + N * np.asarray(K, dtype=np.int64)
    twice = np.einsum("ij,jk,ik->i", Y, L.gram, Y)
    den = 2 * N * N
    return [Fraction(int(t), den) for t in twice]


def q_exponent(L: EvenLattice, coords) -> Fraction:
    """(x,x)/2 for x given by rational lattice coordinates; x must lie in L^dual."""
    y = [Fraction(c) for c in coords]
    g = [sum(int(L.gram[i, j]) * y[j] for j in range(L.n)) for i in range(L.n)]
    if any(gi.denominator != 1 for gi in g):
        raise InputError("vector is not in the dual lattice")
    return sum(y[i] * g[i] for i in range(L.n)) / 2
