"""Rearrangements, maximal averages and Orlicz norms on (0, inf)."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple, Sequence

import numpy as np

from . import young
from ._quadrature import integrate
from .young import DomainError, YoungFunction

__all__ = [
    "SampledFunction",
    "StepFunction",
    "decreasing_rearrangement",
    "double_star",
    "modular",
    "luxemburg_norm",
    "char_norm",
    "DualPairing",
    "monotone_dual_pairing",
    "LemmaReport",
    "lemma_rinorm_equivalence",
    "double_star_power_indicator",
]


@dataclass(frozen=True, eq=False)
class SampledFunction:
    """Piecewise-constant nonnegative data on (0, inf).

    values[i] holds on [grid[i], grid[i+1]); the last value holds on
    [grid[-1], support_bound).  Without a support bound the last cell has
    zero width.
    """

    grid: np.ndarray
    values: np.ndarray
    monotone_flag: str = "none"
    support_bound: float | None = None

    def __post_init__(self):
        g = np.asarray(self.grid, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if g.ndim != 1 or g.shape != v.shape or g.size == 0:
            raise DomainError("grid and values must be 1-d arrays of equal length")
        if np.any(np.diff(g) <= 0) or g[0] < 0:
            raise DomainError("grid must be nonnegative and strictly increasing")
        if not np.all(np.isfinite(v)):
            raise DomainError("values must be finite")
        if self.monotone_flag not in ("none", "non_increasing"):
            raise DomainError(f"unknown monotone flag {self.monotone_flag!r}")
        if self.monotone_flag == "non_increasing" and np.any(np.diff(v) > 0):
            raise DomainError("values are flagged non-increasing but increase")
        if self.support_bound is not None and self.support_bound < g[-1]:
            raise DomainError("support bound lies inside the grid")
        object.__setattr__(self, "grid", g)
        object.__setattr__(self, "values", v)

    @property
    def edges(self) -> np.ndarray:
        end = self.grid[-1] if self.support_bound is None else self.support_bound
        return np.append(self.grid, end)

    @property
    def widths(self) -> np.ndarray:
        return np.diff(self.edges)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        e = self.edges
        idx = np.searchsorted(e, x, side="right") - 1
        inside = (idx >= 0) & (idx < self.values.size) & (x < e[-1])
        out = np.zeros_like(x)
        out[inside] = self.values[idx[inside]]
        return out

    def cumulative(self, r) -> np.ndarray:
        """Exact integral of the step data over (grid[0], r)."""
        r = np.asarray(r, dtype=float)
        e = self.edges
        cum = np.concatenate([[0.0], np.cumsum(self.values * np.diff(e))])
        return np.interp(r, e, cum, left=0.0, right=cum[-1])

    def to_dict(self) -> dict:
        return {"grid": self.grid.tolist(), "values": self.values.tolist(),
                "monotone_flag": self.monotone_flag, "support_bound": self.support_bound}


@dataclass(frozen=True, eq=False)
class StepFunction:
    """Non-increasing step profile: levels[i] on (breakpoints[i], breakpoints[i+1]).

    breakpoints starts at 0 and the function vanishes past breakpoints[-1].
    """

    breakpoints: np.ndarray
    levels: np.ndarray

    def __post_init__(self):
        b = np.asarray(self.breakpoints, dtype=float)
        lv = np.asarray(self.levels, dtype=float)
        if b.ndim != 1 or b.size != lv.size + 1 or lv.size == 0:
            raise DomainError("need len(breakpoints) == len(levels) + 1 >= 2")
        if b[0] != 0 or np.any(np.diff(b) <= 0) or not np.isfinite(b[-1]):
            raise DomainError("breakpoints must start at 0, increase strictly and stay finite")
        if np.any(lv < 0) or np.any(np.diff(lv) > 0) or not np.all(np.isfinite(lv)):
            raise DomainError("levels must be finite, nonnegative and non-increasing")
        object.__setattr__(self, "breakpoints", b)
        object.__setattr__(self, "levels", lv)

    @classmethod
    def indicator(cls, length: float, level: float = 1.0) -> "StepFunction":
        return cls(np.array([0.0, length]), np.array([level]))

    @property
    def support(self) -> float:
        return float(self.breakpoints[-1])

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        idx = np.searchsorted(self.breakpoints, r, side="right") - 1
        ok = (idx >= 0) & (idx < self.levels.size)
        out = np.zeros_like(r)
        out[ok] = self.levels[idx[ok]]
        return out

    def to_sampled(self) -> SampledFunction:
        return SampledFunction(self.breakpoints[:-1], self.levels, "non_increasing",
                               float(self.breakpoints[-1]))

    def scaled(self, c: float) -> "StepFunction":
        return StepFunction(self.breakpoints, c * self.levels)

    def power_integral(self, a: float, lo, hi=math.inf):
        """int_lo^hi f(r) r**a dr, vectorized over lo and hi."""
        lo = np.asarray(lo, dtype=float)
        hi = np.broadcast_to(np.asarray(hi, dtype=float), lo.shape)
        b = self.breakpoints
        left = np.maximum(lo[..., None], b[:-1])
        right = np.minimum(hi[..., None], b[1:])
        right = np.maximum(right, left)
        if a == -1:
            with np.errstate(divide="ignore", invalid="ignore"):
                piece = np.where(right > left, np.log(right) - np.log(left), 0.0)
        else:
            with np.errstate(divide="ignore", invalid="ignore"):
                piece = np.where(right > left, (right ** (a + 1) - left ** (a + 1)) / (a + 1), 0.0)
        return np.sum(piece * self.levels, axis=-1)

    def to_dict(self) -> dict:
        return {"breakpoints": self.breakpoints.tolist(), "levels": self.levels.tolist()}


# ---------------------------------------------------------------------------
# rearrangements

def decreasing_rearrangement(u, weights=None) -> SampledFunction:
    """Right-continuous non-increasing rearrangement of weighted samples.

    ``u`` is a SampledFunction (cell widths are the weights) or an array of
    sample values paired with ``weights``.  The output is a step function
    on (0, total measure) with equal level-set measures.
    """
    if isinstance(u, StepFunction):
        u = u.to_sampled()
    if isinstance(u, SampledFunction):
        vals = np.abs(u.values)
        w = u.widths if weights is None else np.asarray(weights, dtype=float)
    else:
        vals = np.abs(np.asarray(u, dtype=float)).ravel()
        if weights is None:
            raise DomainError("weights are required for raw sample arrays")
        w = np.broadcast_to(np.asarray(weights, dtype=float), vals.shape).ravel()
    if np.any(w < 0) or not np.all(np.isfinite(w)):
        raise DomainError("weights must be finite and nonnegative")
    keep = w > 0
    vals, w = vals[keep], w[keep]
    if vals.size == 0:
        return SampledFunction(np.array([0.0]), np.array([0.0]), "non_increasing", 0.0)
    order = np.argsort(-vals, kind="mergesort")
    vals, w = vals[order], w[order]
    # merge equal levels so the output is canonical (and idempotent)
    uniq, start = np.unique(-vals, return_index=True)
    levels = -uniq
    measures = np.add.reduceat(w, start)
    edges = np.concatenate([[0.0], np.cumsum(measures)])
    # cells narrower than the float spacing of their offset carry no measure
    wide = np.diff(edges) > 0
    levels, edges = levels[wide], np.concatenate([[0.0], edges[1:][wide]])
    return SampledFunction(edges[:-1], levels, "non_increasing", float(edges[-1]))


def double_star(f, r=None) -> SampledFunction:
    """Running average f**(r) = (1/r) int_0^r f*, exact for step data.

    Non-monotone input is rearranged first.  ``r`` defaults to the cell
    edges of f* extended by three decades past its support.
    """
    if isinstance(f, StepFunction):
        f = f.to_sampled()
    if f.monotone_flag != "non_increasing" or f.grid[0] != 0:
        f = decreasing_rearrangement(f)
    if r is None:
        e = f.edges
        pos = e[e > 0]
        top = pos[-1] if pos.size else 1.0
        r = np.unique(np.concatenate([pos, top * np.logspace(0, 3, 31)]))
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0):
        raise DomainError("double_star is evaluated at r > 0")
    vals = f.cumulative(r) / r
    vals = np.minimum.accumulate(vals) if vals.size else vals
    return SampledFunction(r, vals, "non_increasing", None)


def double_star_power_indicator(beta: float, r: float, rho):
    """Closed form of ((.)**beta chi_(0,r))** at rho (beta > -1)."""
    rho = np.asarray(rho, dtype=float)
    b1 = beta + 1
    inside = rho < r
    out = np.empty_like(rho)
    ri = rho[inside]
    if beta >= 0:
        # r^b1 - (r - rho)^b1 without cancellation at small rho
        out[inside] = -r ** b1 * np.expm1(b1 * np.log1p(-ri / r)) / (b1 * ri)
    else:
        out[inside] = ri ** beta / b1
    out[~inside] = r ** b1 / (b1 * rho[~inside])
    return out


# ---------------------------------------------------------------------------
# Orlicz norms

def _measure_and_sup(f):
    return float(np.sum(f.widths[f.values > 0])), float(np.max(f.values))


def modular(f, A: YoungFunction, lam: float, interval=None, breaks=()) -> float:
    """int A(|f| / lam) over the support of f (or over ``interval``)."""
    if isinstance(f, StepFunction):
        f = f.to_sampled()
    if isinstance(f, SampledFunction):
        w = f.widths
        mask = w > 0
        vals = np.asarray(A(np.abs(f.values[mask]) / lam))
        if np.any(np.isinf(vals) & (w[mask] > 0)):
            return math.inf
        return float(np.dot(vals, w[mask]))
    if interval is None:
        raise DomainError("closed-form integrands need an interval")
    a, b = interval

    def g(x):
        return np.asarray(A(np.abs(np.asarray(f(x), dtype=float)) / lam), dtype=float)

    return integrate(g, float(a), float(b), breaks=breaks).value


def luxemburg_norm(f, A: YoungFunction, interval=None, breaks=(), rtol: float = 1e-13) -> float:
    """inf{lam > 0 : int A(|f| / lam) <= 1}, by bisection on log lam.

    ``f`` is step data (SampledFunction / StepFunction) or a vectorized
    callable integrated over ``interval`` (improper ends allowed).  Returns
    +inf when the modular is infinite for every lam, and 0 for f = 0.
    """
    if isinstance(f, StepFunction):
        f = f.to_sampled()
    if isinstance(f, SampledFunction):
        if not np.any((np.abs(f.values) > 0) & (f.widths > 0)):
            return 0.0
        meas, top = _measure_and_sup(f)
        guess = top * char_norm(A, meas)
    else:
        a, b = interval
        guess = None
        if math.isfinite(b):
            xs = np.linspace(a, b, 257)[1:-1]
            top = float(np.max(np.abs(np.asarray(f(xs), dtype=float))))
            if top == 0:
                return 0.0
            guess = top * char_norm(A, b - a)
        if guess is None or not math.isfinite(guess) or guess <= 0:
            guess = 1.0

    def Lam(lam):
        return modular(f, A, lam, interval, breaks)

    hi = guess
    tries = 0
    # past ~1e80 the modular values underflow and divergence becomes invisible
    while not Lam(hi) <= 1:
        hi *= 16.0
        tries += 1
        if tries > 66:
            return math.inf
    lo = hi
    tries = 0
    while Lam(lo) <= 1:
        lo /= 16.0
        tries += 1
        if tries > 260:
            return 0.0
    for _ in range(200):
        if hi / lo - 1 <= rtol:
            break
        mid = math.sqrt(lo * hi) if hi / lo > 1.5 else 0.5 * (lo + hi)
        if Lam(mid) <= 1:
            hi = mid
        else:
            lo = mid
    return hi


def char_norm(A: YoungFunction, measure: float) -> float:
    """Luxemburg norm of an indicator of the given measure: 1 / A^{-1}(1/measure)."""
    if not measure > 0:
        raise DomainError("measure must be positive")
    inv = young.inverse(A, 1.0 / measure)
    return math.inf if inv == 0 else 1.0 / inv


class DualPairing(NamedTuple):
    lower: float
    upper: float
    norm: float
    fraction: float
    certified: bool
    best_trial: str


def monotone_dual_pairing(f, A: YoungFunction, interval=None, trial_family_size: int = 24,
                          breaks=()) -> DualPairing:
    """Finite-family estimate of sup_{g decreasing} int f g / ||g||_A.

    ``lower`` is the best value over the trial family (an under-estimate of
    the true supremum); ``upper`` is 2 ||f|| in the conjugate norm.  The
    pairing is certified when lower >= ||f||.
    """
    At = young.conjugate(A)
    if isinstance(f, StepFunction):
        f = f.to_sampled()
    if isinstance(f, SampledFunction):
        if not np.any(f.values > 0):
            return DualPairing(0.0, 0.0, 0.0, math.nan, True, "zero")
        norm = luxemburg_norm(f, At)
        scale = float(f.edges[-1])
        lo_end = float(f.edges[1]) if f.edges.size > 1 else scale
        brk = tuple(f.edges.tolist())

        def fx(x):
            return f(x)

        a, b = 0.0, scale
    else:
        a, b = interval
        norm = luxemburg_norm(f, At, interval, breaks)
        if norm == 0:
            return DualPairing(0.0, 0.0, 0.0, math.nan, True, "zero")
        scale = b if math.isfinite(b) else max(10.0 * max(a, 1.0), 1.0)
        lo_end = max(a, scale * 1e-6) if a > 0 else scale * 1e-6
        brk = tuple(breaks)
        fx = f
    ms = np.geomspace(max(lo_end, scale * 1e-6), scale * (1.0 if math.isfinite(b) else 1e3),
                      trial_family_size)
    best, label = 0.0, ""
    for m in ms:
        for gamma in (0.0, 0.25, 0.5, 0.75):
            def g(x, m=m, gamma=gamma):
                x = np.asarray(x, dtype=float)
                with np.errstate(divide="ignore"):
                    return np.where(x < m, np.maximum(x, 1e-300) ** (-gamma), 0.0)

            gnorm = luxemburg_norm(g, A, (0.0, float(m)))
            if not (gnorm > 0 and math.isfinite(gnorm)):
                continue
            pts = tuple(sorted({m, *[x for x in brk if 0 < x < m]}))

            def prod(x, g=g):
                return np.asarray(fx(x), dtype=float) * g(x)

            val = integrate(prod, 0.0, float(m), breaks=pts).value / gnorm
            if val > best:
                best, label = val, f"x^-{gamma} on (0,{m:.3g})"
    return DualPairing(best, 2 * norm, norm, best / norm if norm > 0 else math.nan,
                       best >= norm * (1 - 1e-9), label)


class LemmaReport(NamedTuple):
    lhs: float
    rhs: float
    ratio: float
    band: tuple
    within: bool
    finite: bool


def lemma_rinorm_equivalence(alpha: float, beta: float, r: float, A: YoungFunction,
                             space: str = "conjugate") -> LemmaReport:
    """Compare ||rho^alpha (x^beta chi_(0,r))**|| with r^(beta+1) ||rho^(alpha-1) chi_(r,inf)||.

    Norms are taken in L^X with X the conjugate of A (``space="conjugate"``)
    or A itself (``space="direct"``).  The band is the explicit constant
    pair from the two-sided estimate: [1/(b+1), 2 + 1/(b+1)] for b >= 0
    and [1/(b+1), (2^(b+1) + 1)/(b+1)] for -1 < b < 0.
    """
    if not alpha > 0 or not beta > -1 or alpha + beta < 0 or not r > 0:
        raise DomainError("need alpha > 0, beta > -1, alpha + beta >= 0, r > 0")
    X = young.conjugate(A) if space == "conjugate" else A
    b1 = beta + 1
    band = (1 / b1, 2 + 1 / b1) if beta >= 0 else (1 / b1, (2 ** b1 + 1) / b1)

    def lhs_fn(rho):
        rho = np.asarray(rho, dtype=float)
        return rho ** alpha * double_star_power_indicator(beta, r, rho)

    def rhs_fn(rho):
        rho = np.asarray(rho, dtype=float)
        return rho ** (alpha - 1)

    lhs = luxemburg_norm(lhs_fn, X, (0.0, math.inf), breaks=(r, 2 * r))
    rhs = r ** b1 * luxemburg_norm(rhs_fn, X, (r, math.inf), breaks=(2 * r,))
    finite = math.isfinite(lhs) and math.isfinite(rhs)
    ratio = lhs / rhs if finite and rhs > 0 else math.nan
    within = finite and band[0] * (1 - 1e-9) <= ratio <= band[1] * (1 + 1e-9)
    return LemmaReport(lhs, rhs, ratio, band, within, finite)
