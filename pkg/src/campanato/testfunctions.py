"""Scalar test functions on R^n with partial derivatives up to order 3.

Most functions here have the shape u(x) = H(x) g(omega |x|^e) with H a
polynomial and g a scalar profile whose derivatives are supplied; partial
derivatives then follow from the chain and product rules exactly.  Anything
else falls back to 4th-order central differences.
"""

from __future__ import annotations

import itertools
import math
from typing import Callable

import numpy as np

from .young import DomainError

__all__ = [
    "ball_volume",
    "sphere_area",
    "Jet",
    "Polynomial",
    "TestFunction",
    "Composite",
    "Dilated",
    "Constant",
    "tent",
    "multi_indices",
]


def ball_volume(n: int) -> float:
    """Lebesgue measure omega_n of the unit ball in R^n."""
    return math.pi ** (n / 2) / math.gamma(n / 2 + 1)


def sphere_area(n: int) -> float:
    return n * ball_volume(n)


def multi_indices(n: int, order: int):
    """All multi-indices of length n with |alpha| = order, lexicographic."""
    out = []
    for combo in itertools.combinations_with_replacement(range(n), order):
        a = [0] * n
        for i in combo:
            a[i] += 1
        out.append(tuple(a))
    return sorted(set(out), reverse=True)


def _multinomial(alpha) -> int:
    return math.factorial(sum(alpha)) // math.prod(math.factorial(a) for a in alpha)


def _as_points(x, n: int) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if n == 1 and x.ndim <= 1:
        return x.reshape(-1, 1)
    if x.ndim == 1:
        x = x.reshape(1, -1)
    if x.shape[-1] != n:
        raise DomainError(f"points must have {n} coordinates")
    return x


# ---------------------------------------------------------------------------


class Jet:
    """Value and first three derivatives of a scalar function, elementwise."""

    __slots__ = ("d",)

    def __init__(self, d):
        self.d = [np.asarray(v, dtype=float) for v in d]

    @classmethod
    def variable(cls, x):
        x = np.asarray(x, dtype=float)
        return cls([x, np.ones_like(x), np.zeros_like(x), np.zeros_like(x)])

    @classmethod
    def const(cls, c, like):
        z = np.zeros_like(np.asarray(like, dtype=float))
        return cls([z + c, z, z, z])

    def __add__(self, other):
        other = other if isinstance(other, Jet) else Jet.const(other, self.d[0])
        return Jet([a + b for a, b in zip(self.d, other.d)])

    __radd__ = __add__

    def __neg__(self):
        return Jet([-a for a in self.d])

    def __sub__(self, other):
        return self + (-other if isinstance(other, Jet) else -other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Jet):
            return Jet([a * other for a in self.d])
        f, g = self.d, other.d
        return Jet([f[0] * g[0],
                    f[1] * g[0] + f[0] * g[1],
                    f[2] * g[0] + 2 * f[1] * g[1] + f[0] * g[2],
                    f[3] * g[0] + 3 * f[2] * g[1] + 3 * f[1] * g[2] + f[0] * g[3]])

    __rmul__ = __mul__

    def compose(self, outer):
        """outer(self) where outer = [f, f', f'', f'''] evaluated at self's value."""
        f0, f1, f2, f3 = outer
        g = self.d
        return Jet([f0,
                    f1 * g[1],
                    f2 * g[1] ** 2 + f1 * g[2],
                    f3 * g[1] ** 3 + 3 * f2 * g[1] * g[2] + f1 * g[3]])

    def reciprocal(self):
        v = self.d[0]
        with np.errstate(divide="ignore"):
            return self.compose([1 / v, -1 / v ** 2, 2 / v ** 3, -6 / v ** 4])

    def __truediv__(self, other):
        if not isinstance(other, Jet):
            return self * (1.0 / other)
        return self * other.reciprocal()


# ---------------------------------------------------------------------------


class TestFunction:
    """Scalar function on R^n.

    Attributes used by the seminorm code: ``support_radius`` (inf if
    unbounded), ``kinks`` (1-d breakpoints for quadrature), ``radial``
    (callable U with u(x) = U(omega_n |x|^n), or None) and ``odd_x1``.
    """

    __test__ = False  # keep pytest from collecting the class

    n: int = 1
    support_radius: float = math.inf
    kinks: tuple = ()
    radial: Callable | None = None
    radial_breaks: tuple = ()
    odd_x1: bool = False
    label: str = "function"

    def _values(self, x: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def __call__(self, x):
        return self._values(_as_points(x, self.n))

    def partial(self, x, alpha) -> np.ndarray:
        x = _as_points(x, self.n)
        if len(alpha) != self.n:
            raise DomainError("multi-index length must equal n")
        return self._partial_fd(x, tuple(alpha))

    def _partial_fd(self, x, alpha):
        if sum(alpha) == 0:
            return self._values(x)
        i = next(j for j, a in enumerate(alpha) if a)
        lower = list(alpha)
        lower[i] -= 1
        lower = tuple(lower)
        scale = self.support_radius if math.isfinite(self.support_radius) else 1.0
        h = 2e-3 * scale
        e = np.zeros(self.n)
        e[i] = h
        f = lambda y: self._partial_fd(y, lower)  # noqa: E731
        return (-f(x + 2 * e) + 8 * f(x + e) - 8 * f(x - e) + f(x - 2 * e)) / (12 * h)

    def derivative_tensor(self, x, order: int) -> np.ndarray:
        """All order-th partials, weighted so the row norm is the tensor norm."""
        x = _as_points(x, self.n)
        if order == 0:
            return self._values(x)[:, None]
        cols = []
        for alpha in multi_indices(self.n, order):
            cols.append(math.sqrt(_multinomial(alpha)) * self.partial(x, alpha))
        return np.stack(cols, axis=1)


class Polynomial(TestFunction):
    """Polynomial as {exponent tuple: coefficient}, optionally centered at ``center``."""

    def __init__(self, n: int, coeffs: dict, center=None, label: str = "polynomial"):
        self.n = int(n)
        self.coeffs = {tuple(int(e) for e in k): float(v) for k, v in coeffs.items() if v != 0}
        for k in self.coeffs:
            if len(k) != self.n:
                raise DomainError("exponent tuples must have length n")
        self.center = np.zeros(self.n) if center is None else np.asarray(center, dtype=float)
        self.label = label

    @property
    def degree(self) -> int:
        return max((sum(k) for k in self.coeffs), default=0)

    def _values(self, x):
        y = x - self.center
        out = np.zeros(x.shape[0])
        for k, c in self.coeffs.items():
            out += c * np.prod(y ** np.asarray(k), axis=1)
        return out

    def derivative(self, alpha) -> "Polynomial":
        out = {}
        for k, c in self.coeffs.items():
            if all(a <= b for a, b in zip(alpha, k)):
                f = math.prod(math.perm(b, a) for a, b in zip(alpha, k))
                e = tuple(b - a for a, b in zip(alpha, k))
                out[e] = out.get(e, 0.0) + c * f
        return Polynomial(self.n, out, self.center)

    def partial(self, x, alpha):
        return self.derivative(tuple(alpha))(x)

    def laplacian(self) -> "Polynomial":
        out = {}
        for i in range(self.n):
            a = [0] * self.n
            a[i] = 2
            for k, c in self.derivative(tuple(a)).coeffs.items():
                out[k] = out.get(k, 0.0) + c
        return Polynomial(self.n, out, self.center)

    def is_harmonic(self) -> bool:
        return all(abs(c) < 1e-12 for c in self.laplacian().coeffs.values())

    def is_homogeneous(self) -> bool:
        return len({sum(k) for k in self.coeffs}) <= 1

    def scaled(self, c: float) -> "Polynomial":
        return Polynomial(self.n, {k: c * v for k, v in self.coeffs.items()}, self.center, self.label)

    def to_dict(self) -> dict:
        return {"n": self.n, "center": self.center.tolist(),
                "terms": [[list(k), v] for k, v in sorted(self.coeffs.items())]}


class Constant(TestFunction):
    def __init__(self, n: int, value: float):
        self.n, self.value, self.label = int(n), float(value), "constant"
        self.radial = lambda v: np.full(np.shape(v), self.value)

    def _values(self, x):
        return np.full(x.shape[0], self.value)

    def partial(self, x, alpha):
        x = _as_points(x, self.n)
        return self._values(x) if sum(alpha) == 0 else np.zeros(x.shape[0])


def _power_radius_partials(x: np.ndarray, omega: float, e: float):
    """m = omega |x|^e and its partials of order 1..3, as callables of index tuples."""
    r2 = np.sum(x * x, axis=1)
    with np.errstate(divide="ignore", invalid="ignore"):
        r = np.sqrt(r2)
        p2 = r ** (e - 2)
        p4 = r ** (e - 4)
        p6 = r ** (e - 6)
    m = omega * r ** e

    def d1(i):
        return omega * e * p2 * x[:, i]

    def d2(i, j):
        out = omega * e * (e - 2) * p4 * x[:, i] * x[:, j]
        return out + omega * e * p2 if i == j else out

    def d3(i, j, k):
        out = omega * e * (e - 2) * (e - 4) * p6 * x[:, i] * x[:, j] * x[:, k]
        extra = 0.0
        if i == j:
            extra = extra + x[:, k]
        if i == k:
            extra = extra + x[:, j]
        if j == k:
            extra = extra + x[:, i]
        return out + omega * e * (e - 2) * p4 * extra

    return m, (d1, d2, d3)


class Composite(TestFunction):
    """u(x) = H(x) g(omega |x|^e); ``g(m, order)`` returns [g, g', ..., g^(order)]."""

    def __init__(self, n: int, g: Callable, H: Polynomial | None = None, omega: float = 1.0,
                 e: float = 2.0, support_radius: float = math.inf, kinks=(), label: str = "composite",
                 radial: Callable | None = None, radial_breaks=(), odd_x1: bool = False):
        self.n = int(n)
        self.g = g
        self.H = H if H is not None else Polynomial(n, {(0,) * n: 1.0})
        self.omega, self.e = float(omega), float(e)
        self.support_radius = support_radius
        self.kinks = tuple(kinks)
        self.label = label
        self.radial = radial
        self.radial_breaks = tuple(radial_breaks)
        self.odd_x1 = odd_x1

    def _values(self, x):
        m = self.omega * np.sqrt(np.sum(x * x, axis=1)) ** self.e
        return self.H(x) * self.g(m, 0)[0]

    def _profile_partial(self, x, idx, m_parts, gd):
        """Partial of g(m(x)) along the index list idx (length <= 3)."""
        d1, d2, d3 = m_parts
        if len(idx) == 0:
            return gd[0]
        if len(idx) == 1:
            return gd[1] * d1(idx[0])
        if len(idx) == 2:
            i, j = idx
            return gd[2] * d1(i) * d1(j) + gd[1] * d2(i, j)
        i, j, k = idx
        return (gd[3] * d1(i) * d1(j) * d1(k)
                + gd[2] * (d2(i, j) * d1(k) + d2(i, k) * d1(j) + d2(j, k) * d1(i))
                + gd[1] * d3(i, j, k))

    def partial(self, x, alpha):
        x = _as_points(x, self.n)
        alpha = tuple(alpha)
        order = sum(alpha)
        if order > 3:
            return self._partial_fd(x, alpha)
        idx = [i for i, a in enumerate(alpha) for _ in range(a)]
        m, parts = _power_radius_partials(x, self.omega, self.e)
        gd = self.g(m, order)
        total = np.zeros(x.shape[0])
        # Leibniz over sub-lists of the index list
        for mask in itertools.product((0, 1), repeat=order):
            hi = [i for i, b in zip(idx, mask) if b]
            gi = [i for i, b in zip(idx, mask) if not b]
            beta = [0] * self.n
            for i in hi:
                beta[i] += 1
            Hpart = self.H.derivative(tuple(beta))
            if not Hpart.coeffs:
                continue
            with np.errstate(invalid="ignore"):
                total = total + Hpart(x) * self._profile_partial(x, gi, parts, gd)
        return total


class Dilated(TestFunction):
    """u(x) = amplitude * base(x / j)."""

    def __init__(self, base: TestFunction, j: float, amplitude: float = 1.0, label: str = "dilated"):
        self.base, self.j, self.amplitude = base, float(j), float(amplitude)
        self.n = base.n
        self.support_radius = base.support_radius * self.j
        self.kinks = tuple(k * self.j for k in base.kinks)
        self.odd_x1 = base.odd_x1
        self.label = label
        if base.radial is not None:
            jn = self.j ** self.n
            self.radial = lambda v: self.amplitude * np.asarray(base.radial(np.asarray(v) / jn))
            self.radial_breaks = tuple(b * jn for b in base.radial_breaks)

    def _values(self, x):
        return self.amplitude * self.base(x / self.j)

    def partial(self, x, alpha):
        x = _as_points(x, self.n)
        return self.amplitude * self.j ** (-sum(alpha)) * self.base.partial(x / self.j, alpha)


def tent(n: int = 1, radius: float = 1.0) -> Composite:
    """max(0, 1 - |x|/radius)."""

    def g(m, order):
        m = np.asarray(m, dtype=float)
        v = np.maximum(0.0, 1 - m / radius)
        d1 = np.where(m < radius, -1 / radius, 0.0)
        z = np.zeros_like(m)
        return [v, d1, z, z][: order + 1] + [z] * max(0, 3 - order)

    w = ball_volume(n)
    return Composite(n, g, omega=1.0, e=1.0, support_radius=radius,
                     kinks=(-radius, 0.0, radius) if n == 1 else (), label="tent",
                     radial=lambda v: np.maximum(0.0, 1 - (np.asarray(v) / w) ** (1 / n) / radius),
                     radial_breaks=(w * radius ** n,))
