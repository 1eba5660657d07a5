"""Gauss-Legendre rules, adaptive 1-D/2-D drivers and difference quotients."""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import InputError

DEFAULT_ORDER = 8


@dataclass(frozen=True)
class Rule1D:
    nodes: np.ndarray
    weights: np.ndarray
    order: int


@dataclass(frozen=True)
class AdaptiveResult:
    value: float
    error_estimate: float
    cells_used: int
    converged: bool


@lru_cache(maxsize=None)
def gauss_legendre(m: int) -> Rule1D:
    """m-point Gauss-Legendre rule on [-1, 1] by Newton iteration on P_m."""
    if not 1 <= m <= 64:
        raise InputError("order must lie in 1..64")
    k = np.arange(1, m + 1)
    x = np.cos(np.pi * (k - 0.25) / (m + 0.5))
    for _ in range(100):
        p0 = np.ones_like(x)
        p1 = x.copy()
        for j in range(2, m + 1):
            p0, p1 = p1, ((2 * j - 1) * x * p1 - (j - 1) * p0) / j
        dp = m * (x * p1 - p0) / (x * x - 1)
        dx = p1 / dp
        x = x - dx
        if np.max(np.abs(dx)) < 1e-16:
            break
    p0 = np.ones_like(x)
    p1 = x.copy()
    for j in range(2, m + 1):
        p0, p1 = p1, ((2 * j - 1) * x * p1 - (j - 1) * p0) / j
    dp = m * (x * p1 - p0) / (x * x - 1)
    w = 2.0 / ((1 - x * x) * dp * dp)
    order = np.argsort(x)
    nodes, weights = x[order], w[order]
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return Rule1D(nodes, weights, m)


def _cell_rules(order):
    lo, hi = gauss_legendre(order), gauss_legendre(2 * order)
    return lo, hi


def integrate_1d(f, a, b, tol=1e-12, cap=200, order=DEFAULT_ORDER) -> AdaptiveResult:
    """Adaptive bisection with an (order, 2*order) Gauss-Legendre pair per cell.

    f must accept a 1-D array of abscissae and return values of the same shape.
    """
    if b < a:
        raise InputError("need a <= b")
    if a == b:
        return AdaptiveResult(0.0, 0.0, 0, True)
    r1, r2 = _cell_rules(order)
    total = b - a
    stack = [(a, b)]
    accepted = []
    err_total = 0.0
    cells = 0
    converged = True
    while stack:
        lo, hi = stack.pop()
        cells += 1
        c, h = 0.5 * (lo + hi), 0.5 * (hi - lo)
        i1 = h * np.dot(r1.weights, f(c + h * r1.nodes))
        i2 = h * np.dot(r2.weights, f(c + h * r2.nodes))
        err = abs(i2 - i1)
        local = tol * (hi - lo) / total
        if err <= local or err <= 4e-16 * abs(i2) or cells + len(stack) >= cap:
            if err > local and err > 4e-16 * abs(i2):
                converged = False
            accepted.append((lo, float(i2)))
            err_total += err
        else:
            stack.append((c, hi))
            stack.append((lo, c))
    accepted.sort()
    value = math.fsum(v for _, v in accepted)
    return AdaptiveResult(value, float(err_total), cells, bool(converged and err_total <= tol))


def integrate_1d_batch(f, a, b, tol=1e-12, cap=200, order=DEFAULT_ORDER):
    """Vectorized adaptive integration of many integrals at once.

    f(t, idx) receives node abscissae t of shape (N, k) together with the
    integral index idx of shape (N,) and returns values of shape (N, k).
    Returns (values, error_estimates, converged) arrays of length len(a).
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    K = a.size
    values = np.zeros(K)
    errors = np.zeros(K)
    cells = np.zeros(K, dtype=int)
    ok = np.ones(K, dtype=bool)
    width = np.abs(b - a)
    r1, r2 = _cell_rules(order)
    idx = np.flatnonzero(width > 0)
    lo, hi = a[idx], b[idx]
    while idx.size:
        c, h = 0.5 * (lo + hi), 0.5 * (hi - lo)
        i1 = h * (f(c[:, None] + h[:, None] * r1.nodes, idx) @ r1.weights)
        i2 = h * (f(c[:, None] + h[:, None] * r2.nodes, idx) @ r2.weights)
        err = np.abs(i2 - i1)
        np.add.at(cells, idx, 1)
        local = tol * np.abs(hi - lo) / width[idx]
        done = (err <= local) | (err <= 4e-16 * np.abs(i2))
        out_of_budget = ~done & (cells[idx] >= cap)
        ok[idx[out_of_budget]] = False
        fin = done | out_of_budget
        np.add.at(values, idx[fin], i2[fin])
        np.add.at(errors, idx[fin], err[fin])
        keep = ~fin
        idx, lo, hi, c = idx[keep], lo[keep], hi[keep], c[keep]
        idx = np.concatenate([idx, idx])
        lo, hi = np.concatenate([lo, c]), np.concatenate([c, hi])
        order_ = np.argsort(idx, kind="stable")
        idx, lo, hi = idx[order_], lo[order_], hi[order_]
    return values, errors, ok & (errors <= tol)


def integrate_2d(f, tol=1e-9, cap=4096, order=DEFAULT_ORDER, domain=((0.0, 1.0), (0.0, 1.0))) -> AdaptiveResult:
    """Quad-tree adaptive tensor Gauss-Legendre over a rectangle.

    f(S, T) is called on arrays of equal shape and returns values of that shape.
    Cells are refined level by level; the final sum runs in cell order.
    """
    (s0, s1), (t0, t1) = domain
    area = (s1 - s0) * (t1 - t0)
    if area == 0:
        return AdaptiveResult(0.0, 0.0, 0, True)
    r1, r2 = _cell_rules(order)
    w1 = np.outer(r1.weights, r1.weights)
    w2 = np.outer(r2.weights, r2.weights)
    cells = np.array([[s0, s1, t0, t1]])
    parts = []
    err_total = 0.0
    used = 0
    converged = True
    while len(cells):
        used += len(cells)
        cs, hs = 0.5 * (cells[:, 0] + cells[:, 1]), 0.5 * (cells[:, 1] - cells[:, 0])
        ct, ht = 0.5 * (cells[:, 2] + cells[:, 3]), 0.5 * (cells[:, 3] - cells[:, 2])
        vals = []
        for rule, w in ((r1, w1), (r2, w2)):
            S = cs[:, None, None] + hs[:, None, None] * rule.nodes[None, :, None]
            T = ct[:, None, None] + ht[:, None, None] * rule.nodes[None, None, :]
            S, T = np.broadcast_arrays(S, T)
            vals.append(hs * ht * np.einsum("kij,ij->k", f(S, T), w))
        i1, i2 = vals
        err = np.abs(i2 - i1)
        local = tol * (4 * hs * ht) / area
        done = (err <= local) | (err <= 4e-16 * np.abs(i2))
        if used + 4 * np.count_nonzero(~done) > cap:
            converged = converged and bool(np.all(done))
            done[:] = True
        for cell, val, e in zip(cells[done], i2[done], err[done]):
            parts.append((tuple(cell), float(val)))
            err_total += float(e)
        rest = cells[~done]
        if len(rest) == 0:
            break
        ms = 0.5 * (rest[:, 0] + rest[:, 1])
        mt = 0.5 * (rest[:, 2] + rest[:, 3])
        cells = np.concatenate([
            np.stack([rest[:, 0], ms, rest[:, 2], mt], 1),
            np.stack([rest[:, 0], ms, mt, rest[:, 3]], 1),
            np.stack([ms, rest[:, 1], rest[:, 2], mt], 1),
            np.stack([ms, rest[:, 1], mt, rest[:, 3]], 1),
        ])
    parts.sort()
    value = math.fsum(v for _, v in parts)
    return AdaptiveResult(value, float(err_total), used, bool(converged and err_total <= tol))


def central_diff(f, x0, h):
    """Symmetric difference quotient, error O(h^2)."""
    return (f(x0 + h) - f(x0 - h)) / (2 * h)


def richardson(f, x0, h):
    """One Richardson step on central differences, error O(h^4)."""
    return (4 * central_diff(f, x0, h / 2) - central_diff(f, x0, h)) / 3
