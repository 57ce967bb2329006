"""Composite Gauss-Legendre quadrature on (a, b) with power-law end closures.

Panels are linear between nearby breakpoints and geometric (one panel per
decade, Gauss nodes in the log variable) across wide ranges.  Ends at 0 and
at infinity are closed by fitting a local power exponent over the last
decade and integrating the fitted tail analytically.
"""

from __future__ import annotations

import math
from typing import Callable, NamedTuple

import numpy as np

__all__ = ["QuadResult", "integrate", "gauss_nodes", "log_panels", "fit_exponent"]

_CACHE: dict = {}
# exponents this close to -1 are treated as non-integrable
_CRIT = 1e-6


def gauss_nodes(m: int):
    if m not in _CACHE:
        _CACHE[m] = np.polynomial.legendre.leggauss(m)
    return _CACHE[m]


class QuadResult(NamedTuple):
    value: float
    tail_fraction: float
    exponent_zero: float
    exponent_infinity: float


def linear_panels(lo: float, hi: float, m: int, panels: int = 1):
    x, w = gauss_nodes(m)
    edges = np.linspace(lo, hi, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


def log_panels(lo: float, hi: float, m: int, per_decade: float = 1.0):
    """Nodes/weights for dx on [lo, hi] via x = exp(u), panels of equal log width."""
    x, w = gauss_nodes(m)
    ulo, uhi = math.log(lo), math.log(hi)
    k = max(1, int(math.ceil((uhi - ulo) / math.log(10) * per_decade)))
    edges = np.linspace(ulo, uhi, k + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    u = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    wu = (half[:, None] * w[None, :]).ravel()
    nodes = np.exp(u)
    return nodes, wu * nodes


def fit_exponent(g: Callable, x0: float, x1: float) -> float:
    """Log-log slope of |g| between x0 and x1."""
    g0, g1 = float(g(np.array([x0]))[0]), float(g(np.array([x1]))[0])
    if g0 <= 0 or g1 <= 0 or not (math.isfinite(g0) and math.isfinite(g1)):
        return math.nan
    return math.log(g1 / g0) / math.log(x1 / x0)


def _sum(g, nodes, weights):
    vals = np.asarray(g(nodes), dtype=float)
    if np.any(np.isinf(vals) & (weights > 0)):
        return math.inf
    vals = np.where(np.isnan(vals), 0.0, vals)
    return float(np.dot(vals, weights))


def integrate(g: Callable, a: float, b: float = math.inf, breaks=(), m: int = 20,
              zero_decades: float = 30.0, tail_rtol: float = 1e-4,
              max_decades: float = 600.0, per_decade: float = 1.0) -> QuadResult:
    """Integral of a vectorized nonnegative g over (a, b).

    Returns +inf when an end closure detects a non-integrable power.
    """
    pts = [a] + sorted(x for x in set(breaks) if a < x < b)
    if math.isfinite(b):
        pts.append(b)
    nodes, weights = [], []
    e0 = e_inf = math.nan
    zero_tail = 0.0
    for lo, hi in zip(pts[:-1], pts[1:]):
        if lo == 0:
            start = hi * 10.0 ** (-zero_decades)
            x, w = log_panels(start, hi, m, per_decade)
            e0 = fit_exponent(g, start, start * 10)
            g0 = float(np.asarray(g(np.array([start])), dtype=float)[0])
            if g0 > 0:
                if not (e0 > -1 + _CRIT):
                    return QuadResult(math.inf, 1.0, e0, e_inf)
                zero_tail = g0 * start / (e0 + 1)
        elif hi / lo > 10:
            x, w = log_panels(lo, hi, m, per_decade)
        else:
            x, w = linear_panels(lo, hi, m)
        nodes.append(x)
        weights.append(w)
    total = zero_tail
    if nodes:
        total += _sum(g, np.concatenate(nodes), np.concatenate(weights))
    if math.isinf(total):
        return QuadResult(math.inf, 1.0, e0, e_inf)
    tail_frac = zero_tail / total if total > 0 else 0.0
    if math.isfinite(b):
        return QuadResult(total, tail_frac, e0, e_inf)
    lo = pts[-1] if pts[-1] > 0 else 1.0
    if pts[-1] == 0:
        start = 10.0 ** (-zero_decades)
        x, w = log_panels(start, 1.0, m, per_decade)
        e0 = fit_exponent(g, start, start * 10)
        g0 = float(np.asarray(g(np.array([start])), dtype=float)[0])
        if g0 > 0 and not (e0 > -1 + _CRIT):
            return QuadResult(math.inf, 1.0, e0, e_inf)
        total += _sum(g, x, w) + (g0 * start / (e0 + 1) if g0 > 0 else 0.0)
    decades = 0.0
    chunk = 10.0
    prev_g, prev_e = math.nan, math.nan
    while True:
        hi = lo * 10.0 ** chunk
        x, w = log_panels(lo, hi, m, per_decade)
        part = _sum(g, x, w)
        if math.isinf(part):
            return QuadResult(math.inf, 1.0, e0, e_inf)
        total += part
        decades += chunk
        e_inf = fit_exponent(g, hi / 10, hi)
        ghi = float(np.asarray(g(np.array([hi])), dtype=float)[0])
        if ghi == 0 or math.isnan(ghi):
            # an underflowing power tail is not a support end
            if prev_g < 1e-250 and not (prev_e < -1 - _CRIT):
                return QuadResult(math.inf, 1.0, e0, prev_e)
            return QuadResult(total, 0.0, e0, e_inf)
        prev_g, prev_e = ghi, e_inf
        if e_inf < -1 - _CRIT:
            tail = ghi * hi / (-e_inf - 1)
            if tail <= tail_rtol * max(total, 1e-300):
                total += tail
                return QuadResult(total, tail / total if total > 0 else 0.0, e0, e_inf)
        elif decades >= 40:
            return QuadResult(math.inf, 1.0, e0, e_inf)
        if decades >= max_decades:
            return QuadResult(math.inf, 1.0, e0, e_inf)
        lo = hi
