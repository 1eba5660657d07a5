"""Real quadratic spaces: pairings, signature, Delta determinants, projections."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateFormError, InputError, NullVectorError

DEGENERACY_TOL = 1e-10


@dataclass(frozen=True)
class DeltaReport:
    value: float
    positive: bool


class InnerProductSpace:
    """R^n with the symmetric bilinear form x^T gram y."""

    def __init__(self, gram, check_signature=None):
        gram = np.array(gram, dtype=float)
        if gram.ndim != 2 or gram.shape[0] != gram.shape[1] or gram.shape[0] == 0:
            raise InputError("gram must be a nonempty square matrix")
        scale = max(1.0, float(np.max(np.abs(gram))))
        if not np.allclose(gram, gram.T, rtol=0, atol=1e-12 * scale):
            raise InputError("gram must be symmetric")
        gram = 0.5 * (gram + gram.T)
        gram.setflags(write=False)
        self.gram = gram
        self.n = gram.shape[0]
        if check_signature is not None:
            sig = signature(self)
            if sig != tuple(check_signature):
                raise InputError(f"expected signature {tuple(check_signature)}, got {sig}")

    def __repr__(self):
        return f"InnerProductSpace(n={self.n})"

    def vec(self, x):
        x = np.asarray(x, dtype=float)
        if x.shape[-1] != self.n:
            raise InputError(f"vector length {x.shape[-1]} does not match dimension {self.n}")
        return x

    def inner(self, x, y):
        return inner(x, y, self)

    def pairing_matrix(self, xs, ys):
        """Matrix ((x_i, y_j)) for column-stacked xs (n x a) and ys (n x b)."""
        return np.asarray(xs).T @ self.gram @ np.asarray(ys)


def inner(x, y, V: InnerProductSpace):
    """(x, y) = x^T gram y; broadcasts over leading axes."""
    x = V.vec(x)
    y = V.vec(y)
    return np.einsum("...i,ij,...j->...", x, V.gram, y)


def signature(V: InnerProductSpace, tol=DEGENERACY_TOL):
    w = np.linalg.eigvalsh(V.gram)
    scale = np.linalg.norm(V.gram, 2)
    if np.min(np.abs(w)) < tol * scale:
        raise DegenerateFormError("bilinear form is degenerate")
    return int(np.sum(w > 0)), int(np.sum(w < 0))


def delta(C, Cp, V: InnerProductSpace) -> DeltaReport:
    """Delta(C, C') = (C,C)(C',C') - (C,C')^2."""
    value = float(inner(C, C, V) * inner(Cp, Cp, V) - inner(C, Cp, V) ** 2)
    return DeltaReport(value, value > 0)


def delta_gram(vs, V: InnerProductSpace):
    """Determinant of the Gram matrix of the list vs."""
    A = np.stack([V.vec(v) for v in vs], axis=1)
    return float(np.linalg.det(A.T @ V.gram @ A))


def perp_component(C, C0, V: InnerProductSpace):
    """C minus its projection to the line through C0."""
    c00 = inner(C0, C0, V)
    if c00 == 0:
        raise NullVectorError("cannot project against a null vector")
    return V.vec(C) - (inner(C, C0, V) / c00) * V.vec(C0)


def normalize(C, V: InnerProductSpace):
    """C / sqrt|(C, C)|."""
    c = inner(C, C, V)
    if c == 0:
        raise NullVectorError("cannot normalize a null vector")
    return V.vec(C) / np.sqrt(abs(c))


def sgn(x):
    """Sign with sgn(0) = 0 (numpy convention), as float."""
    return np.sign(x).astype(float) if isinstance(x, np.ndarray) else float(np.sign(x))
