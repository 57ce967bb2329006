"""Extremal test families for the Campanato embeddings.

u_f(x)  = int_{omega|x|^n}^inf f(r) r^{-1+s/n} dr                          (0 < s < 1)
v_f(x)  = x_1 int_{omega|x|^n}^inf f(r) r^{a} (r - omega|x|^n)^[s] dr       a = -[s]-1+(s-1)/n
w_f(x)  = H(x)/[s]! int_{omega|x|^n}^inf f(r) r^{a_k} (r - omega|x|^n)^[s] dr
u_j(x)  = j^{s-n} xi(x/j)

f is a non-increasing step function with bounded support, so every profile
is a finite sum of power antiderivatives.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import young
from .analysis import StepFunction, luxemburg_norm
from .gauges import EmbeddingParams, PreconditionError, check_integral_condition
from .testfunctions import Composite, Dilated, Jet, Polynomial, TestFunction, ball_volume
from .young import DomainError, YoungFunction

__all__ = [
    "ExtremalSpec",
    "harmonic_catalogue",
    "make_uf",
    "uf_rearrangement",
    "uf_lower_bound",
    "make_normalized_f",
    "make_vf",
    "make_wf",
    "vf_lower_bound_rhs",
    "wf_lower_bound_rhs",
    "bump",
    "make_uj",
]

MAX_FLOOR = 3


def harmonic_catalogue(n: int) -> dict:
    """Harmonic homogeneous polynomials by degree."""
    if n < 1:
        raise DomainError("n must be positive")
    z = [0] * n

    def mono(**pows):
        e = list(z)
        for k, v in pows.items():
            e[int(k[1:]) - 1] = v
        return tuple(e)

    cat = {1: [Polynomial(n, {mono(x1=1): 1.0}, label="x1")]}
    if n >= 2:
        cat[2] = [Polynomial(n, {mono(x1=1, x2=1): 1.0}, label="x1*x2"),
                  Polynomial(n, {mono(x1=2): 1.0, mono(x2=2): -1.0}, label="x1^2-x2^2")]
        cat[3] = [Polynomial(n, {mono(x1=3): 1.0, mono(x1=1, x2=2): -3.0}, label="x1^3-3*x1*x2^2")]
    return cat


def _default_H(n: int, degree: int) -> Polynomial:
    cat = harmonic_catalogue(n)
    if degree not in cat:
        raise DomainError(f"no harmonic homogeneous polynomial of degree {degree} in dimension {n}")
    return cat[degree][0]


def _check_f(f: StepFunction):
    if not isinstance(f, StepFunction):
        raise DomainError("f must be a StepFunction")


def _kinks_1d(f: StepFunction, omega: float):
    b = [x / omega for x in f.breakpoints[1:]]
    return tuple(sorted({0.0, *b, *(-x for x in b)}))


# ---------------------------------------------------------------------------
# u_f


def uf_rearrangement(f: StepFunction, params: EmbeddingParams, r):
    """u_f^*(r) = int_r^inf f(rho) rho^{-1+s/n} drho."""
    return f.power_integral(-1 + params.s / params.n, np.asarray(r, dtype=float))


def uf_lower_bound(f: StepFunction, params: EmbeddingParams, measure: float) -> float:
    """int_0^{|B|/2} f(r) r^{s/n} dr, the mean-oscillation lower bound over a ball of measure |B|."""
    return float(f.power_integral(params.s / params.n, 0.0, measure / 2))


def make_uf(f: StepFunction, params: EmbeddingParams) -> TestFunction:
    _check_f(f)
    params.require_fractional()
    n, s = params.n, params.s
    a = -1 + s / n
    omega = ball_volume(n)

    def g(m, order):
        m = np.maximum(np.asarray(m, dtype=float), 1e-300)
        out = [f.power_integral(a, m)]
        fm = f(m)
        if order >= 1:
            out.append(-fm * m ** a)
        if order >= 2:
            out.append(-fm * a * m ** (a - 1))
        if order >= 3:
            out.append(-fm * a * (a - 1) * m ** (a - 2))
        return out + [np.zeros_like(m)] * (4 - len(out))

    u = Composite(n, g, omega=omega, e=float(n), support_radius=(f.support / omega) ** (1 / n),
                  kinks=_kinks_1d(f, omega) if n == 1 else (), label="u_f",
                  radial=lambda v: f.power_integral(a, np.asarray(v, dtype=float)),
                  radial_breaks=tuple(f.breakpoints[1:]))
    u.f, u.params = f, params
    return u


def make_normalized_f(A: YoungFunction, ball_measure: float, tol: float = 1e-6) -> StepFunction:
    """A^{-1}(2/|B|) on (0, |B|/2): unit Luxemburg norm by construction."""
    if not ball_measure > 0:
        raise DomainError("ball measure must be positive")
    level = float(young.inverse(A, 2.0 / ball_measure))
    f = StepFunction.indicator(ball_measure / 2, level)
    norm = luxemburg_norm(f, A)
    if abs(norm - 1) > tol:
        raise ArithmeticError(f"normalized f has Luxemburg norm {norm!r}")
    return f


# ---------------------------------------------------------------------------
# v_f and w_f


def _fubini_profile(f: StepFunction, a: float, K: int, c: float):
    """g(m) = c int_m^inf f(r) r^a (r-m)^K dr and its m-derivatives (order <= 3)."""

    def I(m, j):
        # int_m^inf f r^a (r-m)^j dr by binomial expansion
        total = np.zeros_like(m)
        for l in range(j + 1):
            total = total + math.comb(j, l) * (-m) ** (j - l) * f.power_integral(a + l, m)
        return total

    def g(m, order):
        m = np.maximum(np.asarray(m, dtype=float), 1e-200)
        out = []
        for i in range(order + 1):
            if i <= K:
                out.append(c * (-1) ** i * math.perm(K, i) * I(m, K - i))
            else:
                # past K the profile derivative is the step f times powers of m
                d = i - K - 1
                coef = c * (-1) ** (K + 1) * math.factorial(K)
                falling = 1.0
                for t in range(d):
                    falling *= a - t
                out.append(coef * falling * f(m) * m ** (a - d))
        return out + [np.zeros_like(m)] * (4 - len(out))

    return g


def _fubini_function(f, params, H, k, c, label):
    n, s = params.n, params.s
    K = params.floor
    if K > MAX_FLOOR:
        raise DomainError(f"[s] = {K} exceeds the supported maximum {MAX_FLOOR}")
    a = -K - 1 + (s - (k + 1)) / n
    omega = ball_volume(n)
    u = Composite(n, _fubini_profile(f, a, K, c), H=H, omega=omega, e=float(n),
                  support_radius=(f.support / omega) ** (1 / n),
                  kinks=_kinks_1d(f, omega) if n == 1 else (), label=label,
                  odd_x1=all(e[0] % 2 == 1 for e in H.coeffs))
    u.f, u.params, u.k, u.profile_exponent = f, params, k, a
    return u


def make_vf(f: StepFunction, params: EmbeddingParams) -> TestFunction:
    """x_1 times the Fubini profile with exponent -[s]-1+(s-1)/n."""
    _check_f(f)
    params.require_higher(0)
    H = _default_H(params.n, 1)
    return _fubini_function(f, params, H, 0, 1.0, "v_f")


def make_wf(f: StepFunction, H: Polynomial | None, params: EmbeddingParams, k: int,
            A: YoungFunction | None = None) -> TestFunction:
    """H/[s]! times the Fubini profile with exponent -[s]-1+(s-(k+1))/n.

    With A given, the order-k integrability of Ã at zero is checked first.
    """
    _check_f(f)
    if not 0 <= k <= params.floor - 1:
        raise PreconditionError("order_below_floor", f"need 0 <= k <= [s]-1, got k={k}")
    params.require_higher(k)
    if H is None:
        H = _default_H(params.n, k + 1)
    if not (H.is_harmonic() and H.is_homogeneous() and H.degree == k + 1):
        raise DomainError("H must be harmonic and homogeneous of degree k+1")
    if A is not None:
        q = params.exponent(k)
        if check_integral_condition(A, q, "zero", "dual_tail").verdict == "divergent":
            raise PreconditionError("integrability_at_zero_order_k",
                                    f"int_0 Ã(t)/t^(2+q) dt diverges for q={q:.6g}")
    return _fubini_function(f, params, H, k, 1.0 / math.factorial(params.floor), "w_f")


def vf_lower_bound_rhs(f: StepFunction, params: EmbeddingParams, measure: float) -> float:
    """|B|^{1+1/n} int_{|B|}^inf f(r) r^{-1+(s-1)/n} dr."""
    n, s = params.n, params.s
    return float(measure ** (1 + 1 / n) * f.power_integral(-1 + (s - 1) / n, measure))


def wf_lower_bound_rhs(f: StepFunction, params: EmbeddingParams, k: int, measure: float) -> float:
    """|B|^{(k+1)/n} int_{|B|}^inf f(r) r^{-1+(s-(k+1))/n} dr (mean-oscillation scale)."""
    n, s = params.n, params.s
    return float(measure ** ((k + 1) / n) * f.power_integral(-1 + (s - (k + 1)) / n, measure))


# ---------------------------------------------------------------------------
# scaled bumps


def _psi(t: Jet) -> list:
    """exp(-1/t) for t > 0 (0 otherwise) and its derivatives at t's value."""
    v = t.d[0]
    pos = v > 0
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        w = np.where(pos, v, 1.0)
        e = np.where(pos, np.exp(-1 / w), 0.0)
        return [e, e / w ** 2, e * (1 / w ** 4 - 2 / w ** 3), e * (1 / w ** 6 - 6 / w ** 5 + 6 / w ** 4)]


def _plateau(m, order, inner=0.25, outer=1.0):
    """Smooth cutoff in m = |x|^2: 1 for m <= inner, 0 for m >= outer."""
    m = np.asarray(m, dtype=float)
    t = (Jet.variable(m) - outer) * (-1.0 / (outer - inner))
    a = t.compose(_psi(t))
    one_minus = 1.0 - t
    b = one_minus.compose(_psi(one_minus))
    out = a / (a + b)
    return out.d


def _gaussian(m, order):
    e = np.exp(-np.asarray(m, dtype=float))
    return [e, -e, e, -e]


def bump(n: int, shape: str = "tilted", k: int = 0, cutoff: str = "plateau", H: Polynomial | None = None):
    """Reference shape xi = P(x) * cutoff(|x|^2).

    shape "tilted": P = 1 + x_1/2 (nonnegative on the support, gradient at 0 nonzero).
    shape "harmonic": P = H, harmonic homogeneous of degree k+1 (catalogue default).
    cutoff "plateau" is compactly supported and equals 1 on |x| <= 1/2;
    "gaussian" is exp(-|x|^2).
    """
    z = (0,) * n
    if shape == "tilted":
        e1 = tuple(1 if i == 0 else 0 for i in range(n))
        P = Polynomial(n, {z: 1.0, e1: 0.5}, label="1+x1/2")
    elif shape == "harmonic":
        P = H if H is not None else _default_H(n, k + 1)
    else:
        raise DomainError(f"unknown bump shape {shape!r}")
    if cutoff == "plateau":
        g, radius = _plateau, 1.0
    elif cutoff == "gaussian":
        g, radius = _gaussian, math.inf
    else:
        raise DomainError(f"unknown cutoff {cutoff!r}")
    xi = Composite(n, g, H=P, omega=1.0, e=2.0, support_radius=radius, label=f"xi[{P.label},{cutoff}]")
    xi.polynomial, xi.cutoff = P, cutoff
    return xi


def make_uj(xi: TestFunction, params: EmbeddingParams, j: int) -> TestFunction:
    """j^{s-n} xi(x/j)."""
    if int(j) != j or j < 1:
        raise DomainError("j must be a positive integer")
    return Dilated(xi, j, float(j) ** (params.s - params.n), label=f"u_j[j={j}]")


@dataclass(frozen=True)
class ExtremalSpec:
    """Serializable description of an extremal test function."""

    family: str
    params: EmbeddingParams
    f: StepFunction | None = None
    H: Polynomial | None = None
    j: int | None = None
    xi: str = "tilted"
    cutoff: str = "plateau"

    def build(self) -> TestFunction:
        if self.family == "u_f":
            return make_uf(self.f, self.params)
        if self.family == "v_f":
            return make_vf(self.f, self.params)
        if self.family == "w_f":
            return make_wf(self.f, self.H, self.params, self.params.k)
        if self.family == "u_j":
            xi = bump(self.params.n, self.xi, self.params.k, self.cutoff, self.H)
            return make_uj(xi, self.params, self.j or 1)
        raise DomainError(f"unknown family {self.family!r}")

    def to_dict(self) -> dict:
        return {"family": self.family, "params": self.params.to_dict(),
                "f": None if self.f is None else self.f.to_dict(),
                "H": None if self.H is None else self.H.to_dict(),
                "j": self.j, "xi": self.xi, "cutoff": self.cutoff}
