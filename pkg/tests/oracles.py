"""Reference values computed without the package's own kernels."""
import math

import mpmath
import numpy as np
from scipy import integrate, special


def erf_series(z):
    """Maclaurin series of erf, summed in mpmath at 60 digits until the terms are negligible."""
    with mpmath.workdps(60):
        z = mpmath.mpf(z)
        s, k = mpmath.mpf(0), 0
        while True:
            t = (-1) ** k * z ** (2 * k + 1) / (mpmath.factorial(k) * (2 * k + 1))
            s += t
            if k > z * z and abs(t) < mpmath.mpf(10) ** -40:
                break
            k += 1
        return float(2 / mpmath.sqrt(mpmath.pi) * s)


def tilde_e2_direct(a, b):
    """(2/pi) b exp(-pi b^2) int_0^a exp(-pi v^2) / (b^2 + v^2) dv."""
    if b == 0:
        return 0.0
    val = integrate.quad(lambda v: math.exp(-math.pi * v * v) / (b * b + v * v), 0, a,
                         epsabs=1e-15, epsrel=1e-13, limit=400)[0]
    return 2 / math.pi * b * math.exp(-math.pi * b * b) * val


def tilde_e2_mp(a, b):
    """The defining integral in mpmath, split at multiples of |b| so the Lorentzian peak is resolved."""
    if b == 0 or a == 0:
        return 0.0
    with mpmath.workdps(30):
        a, b = mpmath.mpf(a), mpmath.mpf(b)
        pts = [mpmath.mpf(0)]
        step = abs(b)
        while step < abs(a):
            pts.append(step)
            step *= 10
        pts.append(abs(a))
        f = lambda v: mpmath.exp(-mpmath.pi * v * v) / (b * b + v * v)
        val = mpmath.quad(f, pts) * mpmath.sign(a)
        return float(2 / mpmath.pi * b * mpmath.exp(-mpmath.pi * b * b) * val)


def tilde_e2_owen(a, b):
    """Same function through Owen's T."""
    if b == 0:
        return 0.0
    return 4 * float(special.owens_t(math.sqrt(2 * math.pi) * b, a / b))


def e2_defining(u1, u2):
    """2 u2 int_0^1 exp(-pi t^2 u2^2) E1(t u1) dt with mpmath erf."""
    f = lambda t: math.exp(-math.pi * t * t * u2 * u2) * float(mpmath.erf(t * u1 * mpmath.sqrt(mpmath.pi)))
    return 2 * u2 * integrate.quad(f, 0, 1, epsabs=1e-15, epsrel=1e-13)[0]


def e2_flat_gaussian(alpha, u1, u2):
    """int sgn(w2) sgn(w1 + alpha w2) exp(-pi |w - u|^2) dw, with the w1 integral done in closed form."""
    f = lambda w: math.exp(-math.pi * (w - u2) ** 2) * math.erf(math.sqrt(math.pi) * (u1 + alpha * w))
    lo = integrate.quad(f, -np.inf, 0, epsabs=1e-14, limit=400)[0]
    hi = integrate.quad(f, 0, np.inf, epsabs=1e-14, limit=400)[0]
    return hi - lo


def box_radius(basis, M, bound):
    """Integer box half-width containing every coefficient vector of norm <= bound."""
    A = basis.T @ M @ basis
    return int(np.ceil(np.sqrt(bound * np.max(np.diag(np.linalg.inv(A)))))) + 1


def box_scan(basis, offset, M, bound, radius=None):
    """Brute-force enumeration over an integer box."""
    import itertools
    m = basis.shape[1]
    if radius is None:
        radius = box_radius(basis, M, bound)
    pts = np.array(list(itertools.product(range(-radius, radius + 1), repeat=m)), dtype=float)
    X = (pts + offset) @ basis.T
    norms = np.einsum("ij,jk,ik->i", X, M, X)
    return X[norms <= bound + 1e-9]
