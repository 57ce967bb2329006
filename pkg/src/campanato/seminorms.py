"""Gagliardo-Orlicz and Campanato seminorms, and the embedding experiments.

The Gagliardo modular
    J(lambda) = int int A(|D u(x) - D u(y)| / (lambda |x-y|^sigma)) dx dy / |x-y|^n,
with D = grad^[s] and sigma = {s}, is evaluated on the pairs (x, x + h w)
with x in the support S of D:
    J = int_S dx int_{S^{n-1}} dw int_0^inf A(...) (2 - chi_S(x + h w)) dh/h.
The h-integral runs in log h; both ends are closed by fitting a local power.
For n <= 2 all integrals are tensor Gauss rules; n >= 3 uses seeded
Monte Carlo with standard errors.

Campanato oscillations use the moment-matched projection onto polynomials
of degree <= k; the sup over balls is taken over a finite family.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import NamedTuple

import numpy as np
from scipy.optimize import brentq

from . import young
from ._quadrature import gauss_nodes, integrate
from .analysis import luxemburg_norm
from .extremals import make_normalized_f, make_uf, uf_lower_bound
from .gauges import EmbeddingParams, Gauge, phi_sA
from .testfunctions import (Constant, Polynomial, TestFunction, _as_points, ball_volume,
                            multi_indices, sphere_area)
from .young import DomainError, YoungFunction

__all__ = [
    "TestFunction",
    "BallFamily",
    "ExperimentReport",
    "ModularResult",
    "SeminormResult",
    "ball_quadrature",
    "gagliardo_modular",
    "fractional_seminorm",
    "polynomial_projection",
    "oscillation",
    "campanato_seminorm",
    "embedding_ratio_experiment",
    "optimality_experiment",
    "necessity_scaling_experiment",
    "poincare_check",
]


@dataclass(frozen=True)
class BallFamily:
    """Balls with the given radii; origin-centered unless centers are given."""

    radii: tuple
    centers: tuple | None = None

    def __post_init__(self):
        r = np.asarray(self.radii, dtype=float)
        if r.ndim != 1 or r.size == 0 or np.any(r <= 0) or np.any(np.diff(r) <= 0):
            raise DomainError("radii must be positive and strictly increasing")
        object.__setattr__(self, "radii", tuple(r.tolist()))
        if self.centers is not None and len(self.centers) != r.size:
            raise DomainError("one center per radius")

    @classmethod
    def geometric(cls, r_min: float, r_max: float, points: int) -> "BallFamily":
        return cls(tuple(np.geomspace(r_min, r_max, points)))

    def center(self, i: int, n: int) -> np.ndarray:
        return np.zeros(n) if self.centers is None else np.asarray(self.centers[i], dtype=float)

    def to_dict(self) -> dict:
        return {"radii": list(self.radii),
                "centers": None if self.centers is None else [list(map(float, c)) for c in self.centers]}


@dataclass
class ExperimentReport:
    kind: str
    per_ball: list = field(default_factory=list)
    seminorm: float | None = None
    sup_ratio: float | None = None
    slopes: dict = field(default_factory=dict)
    errors: dict = field(default_factory=dict)
    seed: int | None = None
    meta: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)

    def csv_rows(self) -> list:
        if not self.per_ball:
            return []
        keys = list(self.per_ball[0])
        return [keys] + [[row[k] for k in keys] for row in self.per_ball]


class ModularResult(NamedTuple):
    value: float
    error: float
    method: str
    divergent: bool


class SeminormResult(NamedTuple):
    value: float
    error: float
    method: str
    divergent: bool


# ---------------------------------------------------------------------------
# ball quadrature


def _radial_panels(radius: float, breaks, m: int, pieces: int):
    edges = sorted({0.0, radius, *(b for b in breaks if 0 < b < radius)})
    fine = []
    for lo, hi in zip(edges[:-1], edges[1:]):
        fine.extend(np.linspace(lo, hi, pieces + 1)[:-1])
    fine.append(radius)
    x, w = gauss_nodes(m)
    e = np.asarray(fine)
    half = 0.5 * np.diff(e)
    mid = 0.5 * (e[1:] + e[:-1])
    return (mid[:, None] + half[:, None] * x).ravel(), (half[:, None] * w).ravel()


def ball_quadrature(n: int, center, radius: float, level: int = 1, radial_breaks=(),
                    kinks=(), seed: int = 0):
    """Nodes (N, n) and weights (N,) on the ball; weights sum to |B|."""
    center = np.zeros(n) if center is None else np.asarray(center, dtype=float)
    if n == 1:
        c = float(center[0])
        edges = sorted({c - radius, c + radius, *(k for k in kinks if abs(k - c) < radius)})
        x, w = gauss_nodes(16 * level)
        nodes, weights = [], []
        for lo, hi in zip(edges[:-1], edges[1:]):
            sub = np.linspace(lo, hi, 2 * level + 1)
            for a, b in zip(sub[:-1], sub[1:]):
                nodes.append(0.5 * (a + b) + 0.5 * (b - a) * x)
                weights.append(0.5 * (b - a) * w)
        return np.concatenate(nodes)[:, None], np.concatenate(weights)
    rho, wr = _radial_panels(radius, radial_breaks, 12 * level, 2 * level)
    if n == 2:
        k = 32 * level
        phi = 2 * np.pi * np.arange(k) / k
        dirs = np.stack([np.cos(phi), np.sin(phi)], axis=1)
        wa = np.full(k, 2 * np.pi / k)
        pts = rho[:, None, None] * dirs[None, :, :]
        wts = (wr * rho)[:, None] * wa[None, :]
        return center + pts.reshape(-1, 2), wts.ravel()
    if n == 3:
        mu, wm = gauss_nodes(12 * level)
        k = 24 * level
        phi = 2 * np.pi * np.arange(k) / k
        st = np.sqrt(1 - mu ** 2)
        dirs = np.stack([np.outer(st, np.cos(phi)), np.outer(st, np.sin(phi)),
                         np.repeat(mu[:, None], k, axis=1)], axis=-1).reshape(-1, 3)
        wa = np.outer(wm, np.full(k, 2 * np.pi / k)).ravel()
        pts = rho[:, None, None] * dirs[None, :, :]
        wts = (wr * rho ** 2)[:, None] * wa[None, :]
        return center + pts.reshape(-1, 3), wts.ravel()
    rng = np.random.default_rng(seed)
    N = 20000 * level
    g = rng.standard_normal((N, n))
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    r = radius * rng.random(N) ** (1 / n)
    return center + g * r[:, None], np.full(N, ball_volume(n) * radius ** n / N)


# ---------------------------------------------------------------------------
# polynomial projection and oscillation


class Projection(NamedTuple):
    polynomial: Polynomial
    condition: float


def _ball_nodes_for(u: TestFunction, center, radius, level, seed=0):
    center = np.zeros(u.n) if center is None else np.asarray(center, dtype=float)
    breaks = ()
    if u.radial is not None and not np.any(center):
        omega = ball_volume(u.n)
        breaks = tuple((b / omega) ** (1 / u.n) for b in u.radial_breaks)
    return ball_quadrature(u.n, center, radius, level, breaks, u.kinks, seed)


def polynomial_projection(u: TestFunction, center, radius: float, k: int, level: int = 1,
                          nodes=None) -> Projection:
    """Polynomial P of degree <= k with int_B d^beta(u - P) = 0 for |beta| <= k.

    Coefficients are solved from the top degree down: the moment system is
    block triangular with diagonal beta!.
    """
    if not 0 <= k <= 3:
        raise DomainError("projection order must lie in 0..3")
    n = u.n
    center = np.zeros(n) if center is None else np.asarray(center, dtype=float)
    x, w = nodes if nodes is not None else _ball_nodes_for(u, center, radius, level)
    vol = w.sum()
    y = x - center
    coeffs = {}
    for deg in range(k, -1, -1):
        for beta in multi_indices(n, deg):
            target = float(np.dot(u.partial(x, beta), w)) / vol
            # subtract contributions of already-fixed higher coefficients
            for gamma, c in coeffs.items():
                if all(b <= g for b, g in zip(beta, gamma)) and sum(gamma) > deg:
                    f = math.prod(math.perm(g, b) for b, g in zip(beta, gamma))
                    mon = np.prod(y ** (np.asarray(gamma) - np.asarray(beta)), axis=1)
                    target -= c * f * float(np.dot(mon, w)) / vol
            coeffs[beta] = target / math.prod(math.factorial(b) for b in beta)
    cond = float(math.factorial(k) if k > 1 else 1.0)
    return Projection(Polynomial(n, coeffs, center), cond)


def _radial_oscillation(u: TestFunction, measure: float) -> float:
    """(1/|B|) int_0^{|B|} |U(v) - mean| dv for radial u on an origin-centered ball."""
    U = u.radial
    breaks = tuple(b for b in u.radial_breaks if 0 < b < measure)

    def g(v):
        return np.asarray(U(np.asarray(v, dtype=float)), dtype=float)

    mean = integrate(g, 0.0, measure, breaks=breaks).value / measure
    grid = np.geomspace(measure * 1e-12, measure, 400)
    diff = g(grid) - mean
    crossings = []
    for i in np.flatnonzero(np.sign(diff[:-1]) * np.sign(diff[1:]) < 0):
        crossings.append(brentq(lambda v: float(g(np.array([v]))[0]) - mean, grid[i], grid[i + 1],
                                xtol=1e-14 * measure))
    dev = integrate(lambda v: np.abs(g(v) - mean), 0.0, measure, breaks=breaks + tuple(crossings))
    return dev.value / measure


def oscillation(u: TestFunction, center, radius: float, k: int = 0, level: int = 1,
                seed: int = 0) -> float:
    """Mean distance of u from its degree-k projection over the ball."""
    center = np.zeros(u.n) if center is None else np.asarray(center, dtype=float)
    if k == 0 and u.radial is not None and not np.any(center):
        return _radial_oscillation(u, ball_volume(u.n) * radius ** u.n)
    x, w = _ball_nodes_for(u, center, radius, level, seed)
    P = polynomial_projection(u, center, radius, k, nodes=(x, w)).polynomial
    return float(np.dot(np.abs(u(x) - P(x)), w) / w.sum())


def campanato_seminorm(u: TestFunction, gauge: Gauge, k: int, balls: BallFamily,
                       level: int = 1, seed: int = 0) -> ExperimentReport:
    """sup over the family of osc_B / (gauge(|B|^{1/n}) |B|^{k/n})."""
    n = u.n
    omega = ball_volume(n)
    rows = []
    for i, r in enumerate(balls.radii):
        c = balls.center(i, n)
        osc = oscillation(u, c, r, k, level, seed)
        meas = omega * r ** n
        gv = float(gauge(meas ** (1 / n)))
        rows.append({"radius": r, "measure": meas, "oscillation": osc, "gauge": gv,
                     "normalized": osc / (gv * meas ** (k / n))})
    sup = max(row["normalized"] for row in rows)
    return ExperimentReport("campanato", rows, seminorm=sup, seed=seed,
                            meta={"k": k, "level": level, "balls": balls.to_dict(), "gauge": gauge.label})


# ---------------------------------------------------------------------------
# Gagliardo modular


@dataclass
class _PairSample:
    d: np.ndarray          # difference quotients, rows = h values
    wx: np.ndarray         # spatial weights per row
    wh: np.ndarray         # log-h weights for the main rows
    h_main: int            # number of main rows; the rest are closure probes
    probe_h: np.ndarray
    method: str
    mc_terms: np.ndarray | None = None


def _nodes(base: int, level: int) -> int:
    """Node count at a refinement level; each level adds half the base count."""
    return int(round(base * (1 + 0.5 * (level - 1))))


def _difference_rows(u: TestFunction, order: int, sigma: float, h: np.ndarray, level: int):
    """d (H, X) and wx (H, X) for n = 1 and n = 2."""
    n, R = u.n, u.support_radius
    D = lambda pts: u.derivative_tensor(pts, order)  # noqa: E731
    if n == 1:
        x, w = gauss_nodes(_nodes(12, level))
        kinks = np.asarray([k for k in u.kinks if abs(k) < R], dtype=float)
        rows_d, rows_w = [], []
        for sign in (1.0, -1.0):
            hs = sign * h
            shifted = np.clip(kinks[None, :] - hs[:, None], -R, R)
            edges = np.sort(np.concatenate([np.full((h.size, 1), -R), np.full((h.size, 1), R),
                                            np.repeat(kinks[None, :], h.size, axis=0), shifted], axis=1),
                            axis=1)
            half = 0.5 * np.diff(edges, axis=1)
            mid = 0.5 * (edges[:, 1:] + edges[:, :-1])
            xs = (mid[..., None] + half[..., None] * x).reshape(h.size, -1)
            ws = (half[..., None] * w).reshape(h.size, -1)
            ys = xs + hs[:, None]
            dx = D(xs.ravel())
            dy = D(ys.ravel())
            dy[np.abs(ys.ravel()) > R] = 0.0
            diff = np.linalg.norm(dx - dy, axis=1).reshape(h.size, -1)
            rows_d.append(diff / np.abs(h)[:, None] ** sigma)
            rows_w.append(ws * np.where(np.abs(ys) <= R, 1.0, 2.0))
        return np.concatenate(rows_d, axis=1), np.concatenate(rows_w, axis=1)
    omega = ball_volume(n)
    breaks = tuple((b / omega) ** (1 / n) for b in u.radial_breaks)
    rho, wr = _radial_panels(R, breaks, _nodes(8, level), 2)
    nt = _nodes(32, level)
    th = 2 * np.pi * (np.arange(nt) + 0.5) / nt
    dirs = np.stack([np.cos(th), np.sin(th)], axis=1)
    wt = np.full(nt, 2 * np.pi / nt)
    if u.radial is not None and order == 0:
        xs = np.stack([rho, np.zeros_like(rho)], axis=1)
        wxs = 2 * np.pi * rho * wr
    else:
        xs = (rho[:, None, None] * dirs[None, :, :]).reshape(-1, 2)
        wxs = np.outer(rho * wr, wt).ravel()
    dx = D(xs)
    ys = xs[None, :, None, :] + h[:, None, None, None] * dirs[None, None, :, :]
    yflat = ys.reshape(-1, 2)
    inside = np.linalg.norm(yflat, axis=1) <= R
    dy = np.zeros((yflat.shape[0], dx.shape[1]))
    if np.any(inside):
        dy[inside] = D(yflat[inside])
    dy = dy.reshape(h.size, xs.shape[0], nt, -1)
    diff = np.linalg.norm(dx[None, :, None, :] - dy, axis=-1) / h[:, None, None] ** sigma
    wgt = wxs[None, :, None] * wt[None, None, :] * np.where(inside.reshape(h.size, xs.shape[0], nt), 1.0, 2.0)
    return diff.reshape(h.size, -1), wgt.reshape(h.size, -1)


def _pair_sample(u: TestFunction, params: EmbeddingParams, level: int, seed: int,
                 method: str) -> _PairSample:
    R = u.support_radius
    if not math.isfinite(R):
        raise DomainError("the Gagliardo modular needs a test function with bounded support")
    order, sigma = params.floor, params.frac
    n = u.n
    h_lo, h_hi = 2 * R * 1e-8, 2 * R * 1e3
    probes = np.array([h_lo, h_lo * 10 ** 0.5, h_hi / 10 ** 0.5, h_hi])
    if method == "auto":
        method = "quadrature" if n <= 2 else "montecarlo"
    if method == "quadrature":
        if n > 2:
            raise DomainError("tensor quadrature is available for n <= 2")
        x, w = gauss_nodes(_nodes(6, level))
        edges = np.linspace(math.log(h_lo), math.log(h_hi), int(round(math.log10(h_hi / h_lo))) + 1)
        half = 0.5 * np.diff(edges)
        mid = 0.5 * (edges[1:] + edges[:-1])
        logs = (mid[:, None] + half[:, None] * x).ravel()
        wh = (half[:, None] * w).ravel()
        hs = np.concatenate([np.exp(logs), probes])
        d, wx = _difference_rows(u, order, sigma, hs, level)
        return _PairSample(d, wx, wh, logs.size, probes, "quadrature")
    # Monte Carlo: x uniform in S, direction uniform, log h uniform
    rng = np.random.default_rng(seed)
    N = 40000 * level
    g = rng.standard_normal((N, n))
    dirs = g / np.linalg.norm(g, axis=1, keepdims=True)
    g2 = rng.standard_normal((N, n))
    xs = g2 / np.linalg.norm(g2, axis=1, keepdims=True) * (R * rng.random(N) ** (1 / n))[:, None]
    ul, uh = math.log(h_lo), math.log(h_hi)
    logs = ul + (uh - ul) * rng.random(N)
    scale = ball_volume(n) * R ** n * sphere_area(n)
    D = lambda pts: u.derivative_tensor(pts, order)  # noqa: E731
    dx = D(xs)

    def rows(hv):
        ys = xs + hv[:, None] * dirs
        inside = np.linalg.norm(ys, axis=1) <= R
        dy = np.zeros_like(dx)
        if np.any(inside):
            dy[inside] = D(ys[inside])
        return np.linalg.norm(dx - dy, axis=1) / hv ** sigma, np.where(inside, 1.0, 2.0)

    d_main, w_main = rows(np.exp(logs))
    pd, pw = [], []
    m = min(N, 8000 * level)
    for hp in probes:
        dd, ww = rows(np.full(N, hp))
        # only the first m samples carry weight in a probe row
        pd.append(dd)
        pw.append(np.where(np.arange(N) < m, ww * scale / m, 0.0))
    d = np.concatenate([d_main[None, :]] + [p[None, :] for p in pd])
    wx = np.concatenate([(w_main * scale * (uh - ul) / N)[None, :]] + [p[None, :] for p in pw])
    return _PairSample(d, wx, np.array([1.0]), 1, probes, "montecarlo",
                       mc_terms=w_main * scale * (uh - ul))


def _modular_from_sample(S: _PairSample, A: YoungFunction, lam: float):
    with np.errstate(over="ignore", invalid="ignore"):
        vals = np.asarray(A(S.d / lam), dtype=float)
    G = np.sum(np.where(S.wx > 0, vals * S.wx, 0.0), axis=1)
    main = float(np.dot(G[: S.h_main], S.wh))
    if not math.isfinite(main):
        return math.inf, True
    g0, g1, g2, g3 = G[S.h_main:]
    step = math.log(S.probe_h[1] / S.probe_h[0])
    tails = 0.0
    if g0 > 0:
        a = math.log(g1 / g0) / step if g1 > 0 else -math.inf
        if not a > 1e-3:
            return math.inf, True
        tails += g0 / a
    if g3 > 0:
        b = math.log(g2 / g3) / step if g2 > 0 else -math.inf
        if not b > 1e-3:
            return math.inf, True
        tails += g3 / b
    return main + tails, False


def _is_constant(u):
    return isinstance(u, Constant) or (isinstance(u, Polynomial) and u.degree == 0)


def gagliardo_modular(u: TestFunction, params: EmbeddingParams, A: YoungFunction, lam: float,
                      level: int = 1, seed: int = 0, method: str = "auto") -> ModularResult:
    """J_{{s},A}(grad^[s] u / lam) with an error estimate.

    Quadrature error is the change against the next coarser rule; Monte
    Carlo error is one standard error.  A non-integrable closure returns
    +inf with ``divergent`` set.
    """
    if not lam > 0:
        raise DomainError("lambda must be positive")
    if _is_constant(u):
        return ModularResult(0.0, 0.0, "exact", False)
    S = _pair_sample(u, params, level, seed, method)
    val, div = _modular_from_sample(S, A, lam)
    if div:
        return ModularResult(math.inf, math.nan, S.method, True)
    if S.method == "montecarlo":
        with np.errstate(over="ignore"):
            terms = np.asarray(A(S.d[0] / lam), dtype=float) * S.mc_terms
        err = float(np.std(terms) / math.sqrt(terms.size))
    else:
        other_level = level + 1 if level == 1 else level - 1
        other, _ = _modular_from_sample(_pair_sample(u, params, other_level, seed, method), A, lam)
        err = abs(other - val)
    return ModularResult(val, err, S.method, False)


def _solve_unit_modular(S: _PairSample, A: YoungFunction, rtol: float = 1e-7) -> float:
    J = lambda lam: _modular_from_sample(S, A, lam)[0]  # noqa: E731
    lo = hi = 1.0
    if J(1.0) > 1:
        while J(hi) > 1:
            hi *= 4
            if hi > 1e300:
                return math.inf
        lo = hi / 4
    else:
        while J(lo) <= 1:
            lo /= 4
            if lo < 1e-300:
                return 0.0
        hi = lo * 4
    while hi / lo - 1 > rtol:
        mid = math.sqrt(lo * hi)
        if J(mid) > 1:
            lo = mid
        else:
            hi = mid
    return math.sqrt(lo * hi)


def fractional_seminorm(u: TestFunction, params: EmbeddingParams, A: YoungFunction,
                        level: int = 1, seed: int = 0, method: str = "auto") -> SeminormResult:
    """inf{lam : J(grad^[s] u / lam) <= 1}; error from a coarser rule or a second seed."""
    if _is_constant(u):
        return SeminormResult(0.0, 0.0, "exact", False)
    S = _pair_sample(u, params, level, seed, method)
    val = _solve_unit_modular(S, A)
    if math.isinf(val):
        return SeminormResult(math.inf, math.nan, S.method, True)
    if S.method == "montecarlo":
        other = _solve_unit_modular(_pair_sample(u, params, level, seed + 1, method), A)
    else:
        other = _solve_unit_modular(_pair_sample(u, params, level + 1 if level == 1 else level - 1,
                                                 seed, method), A)
    return SeminormResult(val, abs(other - val), S.method, False)


# ---------------------------------------------------------------------------
# experiments


def embedding_ratio_experiment(u: TestFunction, params: EmbeddingParams, A: YoungFunction,
                               gauge: Gauge, balls: BallFamily, k: int | None = None,
                               level: int = 1, seed: int = 0) -> ExperimentReport:
    """R(u) = Campanato seminorm / fractional seminorm over the ball family.

    For u_f inputs each ball also gets the closed-form lower bound
    (1/|B|) int_0^{|B|/2} f r^{s/n} dr divided by gauge * ||f||_A.
    """
    k = params.k if k is None else k
    camp = campanato_seminorm(u, gauge, k, balls, level, seed)
    semi = fractional_seminorm(u, params, A, level, seed)
    rows = []
    fnorm = None
    f = getattr(u, "f", None)
    if u.label == "u_f" and f is not None:
        fnorm = luxemburg_norm(f, A)
    for row in camp.per_ball:
        row = dict(row)
        row["ratio"] = row["normalized"] / semi.value if semi.value > 0 else math.inf
        if fnorm:
            lb = uf_lower_bound(f, params, row["measure"]) / row["measure"]
            row["lower_bound_ratio"] = lb / (row["gauge"] * fnorm)
        rows.append(row)
    sup = max(r["ratio"] for r in rows)
    return ExperimentReport("embedding_ratio", rows, seminorm=semi.value, sup_ratio=sup,
                            errors={"seminorm": semi.error, "method": semi.method,
                                    "divergent": semi.divergent},
                            seed=seed, meta={"params": params.to_dict(), "young": A.to_dict(),
                                             "k": k, "level": level, "balls": balls.to_dict(),
                                             "gauge": gauge.label})


def optimality_experiment(params: EmbeddingParams, A: YoungFunction, gauge: Gauge,
                          balls: BallFamily, with_seminorms: bool = False,
                          level: int = 1) -> ExperimentReport:
    """Per-ball optimality quotients for a candidate gauge (0 < s < 1).

    gauge_quotient     phi_sA(|B|^{1/n}) / gauge(|B|^{1/n})
    extremal_quotient  (1/|B|) int_0^{|B|/2} f_B r^{s/n} dr / gauge(|B|^{1/n}),
                       f_B the unit-norm step A^{-1}(2/|B|) on (0, |B|/2)
    ratio              (optional) osc_B(u_{f_B}) / (gauge * |u_{f_B}|_{s,A})
    """
    params.require_fractional()
    n = params.n
    omega = ball_volume(n)
    rows = []
    for r in balls.radii:
        meas = omega * r ** n
        rho = meas ** (1 / n)
        gv = float(gauge(rho))
        fB = make_normalized_f(A, meas)
        row = {"radius": r, "measure": meas, "gauge": gv,
               "gauge_quotient": float(phi_sA(params, A, rho)) / gv,
               "extremal_quotient": uf_lower_bound(fB, params, meas) / meas / gv}
        if with_seminorms:
            u = make_uf(fB, params)
            osc = oscillation(u, None, r, 0, level)
            semi = fractional_seminorm(u, params, A, level)
            row["ratio"] = osc / (gv * semi.value)
        rows.append(row)
    return ExperimentReport("optimality", rows, meta={"params": params.to_dict(), "young": A.to_dict(),
                                                      "gauge": gauge.label, "balls": balls.to_dict()})


def necessity_scaling_experiment(params: EmbeddingParams, A: YoungFunction, xi: TestFunction,
                                 j_grid, k: int | None = None, level: int = 1) -> ExperimentReport:
    """Unit-ball order-k oscillation of u_j = j^{s-n} xi(x/j) and its log-log slope in j."""
    from .extremals import make_uj

    k = params.k if k is None else k
    js = [int(j) for j in j_grid]
    rows = []
    for j in js:
        u = make_uj(xi, params, j)
        rows.append({"j": j, "quotient": oscillation(u, None, 1.0, k, level)})
    q = np.array([r["quotient"] for r in rows])
    slope = float(np.polyfit(np.log(js), np.log(q), 1)[0])
    expected = params.s - params.n - k - 1
    return ExperimentReport("necessity", rows, slopes={"fitted": slope, "expected": expected},
                            meta={"params": params.to_dict(), "young": A.to_dict(), "k": k,
                                  "xi": xi.label, "j_grid": js, "embedding_possible": expected < 0})


def poincare_check(u: TestFunction, k: int, balls: BallFamily, level: int = 1) -> ExperimentReport:
    """osc_B(u, P^{k-1}) / (|B|^{k/n} mean_B |grad^k u|) per ball."""
    if k < 1:
        raise DomainError("k must be at least 1")
    n = u.n
    rows = []
    for i, r in enumerate(balls.radii):
        c = balls.center(i, n)
        x, w = _ball_nodes_for(u, c, r, level)
        P = polynomial_projection(u, c, r, k - 1, nodes=(x, w)).polynomial
        osc = float(np.dot(np.abs(u(x) - P(x)), w) / w.sum())
        grad = float(np.dot(np.linalg.norm(u.derivative_tensor(x, k), axis=1), w) / w.sum())
        meas = w.sum()
        rows.append({"radius": r, "oscillation": osc, "gradient_mean": grad,
                     "constant": osc / (meas ** (k / n) * grad)})
    cs = np.array([row["constant"] for row in rows])
    return ExperimentReport("poincare", rows, sup_ratio=float(cs.max()),
                            meta={"k": k, "spread": float(cs.max() / cs.min())})
