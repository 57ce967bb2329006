"""Young functions: evaluation, validation, conjugation, inverses, indices.

A Young function is a convex, non-decreasing map A: [0, inf) -> [0, inf]
with A(0) = 0 that is not identically zero.  Infinite values are carried as
IEEE ``inf``, which is an exact extended value under numpy arithmetic.

Every kind is an immutable dataclass.  Instances are callable on scalars and
arrays, serialize to a ``{"kind": ..., params}`` JSON object, and expose
asymptotic hints (power and log exponents near zero and near infinity) that
the convergence classifier in :mod:`campanato.gauges` consumes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

__all__ = [
    "DomainError",
    "InvalidYoungFunction",
    "Asymptotic",
    "YoungFunction",
    "Power",
    "PowerLog",
    "LinearCap",
    "Scaled",
    "Sum",
    "Max",
    "Tabulated",
    "evaluate",
    "validate",
    "conjugate",
    "inverse",
    "IndexEstimate",
    "indices",
    "Domination",
    "dominates",
    "from_json",
    "builtin_catalogue",
]

CONVEXITY_SLACK = 1e-9


class DomainError(ValueError):
    """Argument outside the domain of an operation."""


class InvalidYoungFunction(ValueError):
    """Data that violates the Young-function invariants.

    ``index`` names the failing knot (Tabulated data) or grid point.
    """

    def __init__(self, message: str, index: int | None = None):
        super().__init__(message if index is None else f"{message} (knot index {index})")
        self.index = index


class Asymptotic(NamedTuple):
    """Behaviour of a function at one end of (0, inf).

    kind is "power" (~ t**exponent * |log t|**log_exponent), "zero" (vanishes
    identically near the end) or "infinite" (equals +inf near the end).
    """

    kind: str
    exponent: float = 0.0
    log_exponent: float = 0.0


def _as_array(t):
    arr = np.asarray(t, dtype=float)
    if np.any(arr < 0) or np.any(np.isnan(arr)):
        raise DomainError("Young functions are defined on [0, inf)")
    return arr


def _ret(arr, like):
    return float(arr) if np.ndim(like) == 0 else arr


def _hint_from_dict(hint):
    if hint is None:
        return None
    out = {}
    for end in ("zero", "infinity"):
        if end in hint and hint[end] is not None:
            val = hint[end]
            if isinstance(val, Asymptotic):
                out[end] = val
            elif isinstance(val, str):
                out[end] = Asymptotic(val)
            elif isinstance(val, dict):
                out[end] = Asymptotic(val.get("kind", "power"), float(val.get("exponent", 0.0)),
                                      float(val.get("log_exponent", 0.0)))
            else:
                seq = list(val)
                out[end] = Asymptotic("power", float(seq[0]), float(seq[1]) if len(seq) > 1 else 0.0)
    return out


def _hint_to_dict(hint):
    if not hint:
        return None
    return {end: [a.exponent, a.log_exponent] if a.kind == "power" else a.kind
            for end, a in hint.items()}


class YoungFunction:
    """Base class; concrete kinds implement ``_eval`` and metadata hooks."""

    kind = "abstract"

    def __call__(self, t):
        arr = _as_array(t)
        with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
            out = self._eval(arr)
        return _ret(out, t)

    def _eval(self, t: np.ndarray) -> np.ndarray:  # pragma: no cover - abstract
        raise NotImplementedError

    # metadata -----------------------------------------------------------
    def homogeneous(self):
        """Return (p, c) when A(t) = (c t)**p exactly, else None."""
        return None

    def breakpoints(self) -> tuple:
        """Finite abscissae where A has kinks or jumps to +inf."""
        return ()

    def finite_limit(self) -> float:
        """sup{t : A(t) < inf}."""
        return math.inf

    def _asymptotic(self, end: str):
        return None

    def asymptotic(self, end: str):
        hint = getattr(self, "domain_hint", None)
        hint = _hint_from_dict(hint)
        if hint and end in hint:
            return hint[end]
        return self._asymptotic(end)

    def params(self) -> dict:
        return {}

    def to_dict(self) -> dict:
        out = {"kind": self.kind}
        out.update(self.params())
        hint = _hint_to_dict(_hint_from_dict(getattr(self, "domain_hint", None)))
        if hint:
            out["domain_hint"] = hint
        return out


@dataclass(frozen=True)
class Power(YoungFunction):
    """A(t) = t**p.  p = 1 is admitted as the linear boundary case."""

    p: float
    domain_hint: dict | None = field(default=None, compare=False)
    kind = "Power"

    def __post_init__(self):
        if not self.p >= 1:
            raise InvalidYoungFunction(f"Power exponent must be >= 1, got {self.p}")

    def _eval(self, t):
        return t ** self.p

    def homogeneous(self):
        return (self.p, 1.0)

    def _asymptotic(self, end):
        return Asymptotic("power", self.p, 0.0)

    def params(self):
        return {"p": self.p}


@dataclass(frozen=True)
class PowerLog(YoungFunction):
    """A(t) = t**p (log t)**alpha for t >= t_splice.

    Below the splice the log factor is replaced by its tangent line at the
    splice, so A stays C^1 and behaves like a pure power near zero.  The
    default splice is the smallest one that keeps A convex with A(t)/t
    non-decreasing.
    """

    p: float
    alpha: float
    t_splice: float | None = None
    domain_hint: dict | None = field(default=None, compare=False)
    kind = "PowerLog"

    def __post_init__(self):
        if not self.p > 1:
            raise InvalidYoungFunction(f"PowerLog exponent must be > 1, got {self.p}")
        if self.t_splice is None:
            object.__setattr__(self, "t_splice", self.default_splice(self.p, self.alpha))
        if not self.t_splice > 1:
            raise InvalidYoungFunction("PowerLog splice must exceed 1")
        x = math.log(self.t_splice)
        p, a = self.p, self.alpha
        # tangent continuation of L(t) = (log t)**alpha: L(ts) + L'(ts)(t - ts)
        slope = a * x ** (a - 1) / self.t_splice
        object.__setattr__(self, "_lin", (x ** a - slope * self.t_splice, slope))
        c0, c1 = self._lin
        ok = (c0 >= 0 and (p - 1) * x + 2 * a >= -1e-12 and (p - 1) * x + a >= -1e-12
              and p * (p - 1) * x * x + a * (2 * p - 1) * x + a * (a - 1) >= -1e-12)
        if not ok:
            raise InvalidYoungFunction(
                f"PowerLog splice {self.t_splice} too small for convexity with p={p}, alpha={a}")

    @staticmethod
    def default_splice(p: float, alpha: float) -> float:
        x = max(1.0, alpha, -2 * alpha / (p - 1))
        qa, qb, qc = p * (p - 1), alpha * (2 * p - 1), alpha * (alpha - 1)
        disc = qb * qb - 4 * qa * qc
        if disc > 0:
            x = max(x, (-qb + math.sqrt(disc)) / (2 * qa))
        return math.exp(x + 0.5)

    def _eval(self, t):
        c0, c1 = self._lin
        out = np.empty_like(t)
        lo = t < self.t_splice
        tl = t[lo]
        out[lo] = tl ** self.p * (c0 + c1 * tl)
        th = t[~lo]
        out[~lo] = th ** self.p * np.log(th) ** self.alpha
        return out

    def _asymptotic(self, end):
        if end == "zero":
            c0, _ = self._lin
            return Asymptotic("power", self.p if c0 > 0 else self.p + 1, 0.0)
        return Asymptotic("power", self.p, self.alpha)

    def breakpoints(self):
        return (self.t_splice,)

    def params(self):
        return {"p": self.p, "alpha": self.alpha, "t_splice": self.t_splice}


@dataclass(frozen=True)
class LinearCap(YoungFunction):
    """A(t) = 0 on [0, t0] and +inf beyond: the L^inf-type function."""

    t0: float = 1.0
    domain_hint: dict | None = field(default=None, compare=False)
    kind = "LinearCap"

    def __post_init__(self):
        if not self.t0 > 0:
            raise InvalidYoungFunction("LinearCap threshold must be positive")

    def _eval(self, t):
        return np.where(t <= self.t0, 0.0, math.inf)

    def breakpoints(self):
        return (self.t0,)

    def finite_limit(self):
        return self.t0

    def _asymptotic(self, end):
        return Asymptotic("zero") if end == "zero" else Asymptotic("infinite")

    def params(self):
        return {"t0": self.t0}


@dataclass(frozen=True)
class Scaled(YoungFunction):
    """A(t) = base(c t)."""

    base: YoungFunction
    c: float
    domain_hint: dict | None = field(default=None, compare=False)
    kind = "Scaled"

    def __post_init__(self):
        if not self.c > 0:
            raise InvalidYoungFunction("Scaled multiplier must be positive")

    def _eval(self, t):
        return self.base._eval(self.c * t)

    def homogeneous(self):
        h = self.base.homogeneous()
        return None if h is None else (h[0], h[1] * self.c)

    def breakpoints(self):
        return tuple(b / self.c for b in self.base.breakpoints())

    def finite_limit(self):
        return self.base.finite_limit() / self.c

    def _asymptotic(self, end):
        return self.base.asymptotic(end)

    def params(self):
        return {"base": self.base.to_dict(), "c": self.c}


def _dominant(hints, end):
    """Asymptotic class of a sum or max of terms with the given hints."""
    if any(h is None for h in hints):
        return None
    if end == "infinity" and any(h.kind == "infinite" for h in hints):
        return Asymptotic("infinite")
    powers = [h for h in hints if h.kind == "power"]
    if not powers:
        return Asymptotic("zero") if end == "zero" else Asymptotic("infinite")
    if end == "zero":
        return min(powers, key=lambda h: (h.exponent, -h.log_exponent))
    return max(powers, key=lambda h: (h.exponent, h.log_exponent))


@dataclass(frozen=True)
class Sum(YoungFunction):
    terms: tuple
    domain_hint: dict | None = field(default=None, compare=False)
    kind = "Sum"

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))
        if not self.terms:
            raise InvalidYoungFunction("Sum needs at least one term")

    def _eval(self, t):
        out = np.zeros_like(t)
        for term in self.terms:
            out = out + term._eval(t)
        return out

    def breakpoints(self):
        return tuple(sorted({b for term in self.terms for b in term.breakpoints()}))

    def finite_limit(self):
        return min(term.finite_limit() for term in self.terms)

    def _asymptotic(self, end):
        return _dominant([term.asymptotic(end) for term in self.terms], end)

    def params(self):
        return {"terms": [term.to_dict() for term in self.terms]}


@dataclass(frozen=True)
class Max(YoungFunction):
    terms: tuple
    domain_hint: dict | None = field(default=None, compare=False)
    kind = "Max"

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))
        if not self.terms:
            raise InvalidYoungFunction("Max needs at least one term")

    def _eval(self, t):
        out = np.zeros_like(t)
        for term in self.terms:
            out = np.maximum(out, term._eval(t))
        return out

    def breakpoints(self):
        return tuple(sorted({b for term in self.terms for b in term.breakpoints()}))

    def finite_limit(self):
        return min(term.finite_limit() for term in self.terms)

    def _asymptotic(self, end):
        return _dominant([term.asymptotic(end) for term in self.terms], end)

    def params(self):
        return {"terms": [term.to_dict() for term in self.terms]}


@dataclass(frozen=True, eq=False)
class Tabulated(YoungFunction):
    """Young function given by knots t_i >= 0 and values v_i in [0, inf].

    interp: "linear" (piecewise linear, exact for Legendre transforms) or
    "loglog" (piecewise power law between positive knots).
    extrapolate: behaviour beyond the last knot, "linear" (continue the
    last secant), "power" (continue the last log-log slope) or "inf".
    Values equal to +inf mark the function as infinite after the last
    finite knot.  Evaluation outside [knots[0], knots[-1]] is flagged by
    :meth:`extrapolated`.
    """

    knots: tuple
    values: tuple
    interp: str = "linear"
    extrapolate: str = "linear"
    domain_hint: dict | None = None
    kind = "Tabulated"

    def __post_init__(self):
        t = np.asarray(self.knots, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if t.ndim != 1 or t.shape != v.shape or t.size < 2:
            raise InvalidYoungFunction("knots and values must be 1-d arrays of equal length >= 2")
        if self.interp not in ("linear", "loglog"):
            raise InvalidYoungFunction(f"unknown interpolation {self.interp!r}")
        if self.extrapolate not in ("linear", "power", "inf"):
            raise InvalidYoungFunction(f"unknown extrapolation {self.extrapolate!r}")
        if np.any(np.diff(t) <= 0):
            raise InvalidYoungFunction("knots must be strictly increasing", int(np.argmin(np.diff(t))) + 1)
        if t[0] < 0:
            raise InvalidYoungFunction("knots must be nonnegative", 0)
        if np.any(np.isnan(v)) or np.any(v < 0):
            raise InvalidYoungFunction("values must lie in [0, inf]", int(np.argmax(np.isnan(v) | (v < 0))))
        if t[0] == 0 and v[0] != 0:
            raise InvalidYoungFunction("A(0) must be 0", 0)
        inf_idx = np.flatnonzero(np.isinf(v))
        n_fin = int(inf_idx[0]) if inf_idx.size else v.size
        if inf_idx.size and np.any(np.isfinite(v[n_fin:])):
            raise InvalidYoungFunction("values must stay infinite after the first infinite knot", n_fin)
        if n_fin == 0:
            raise InvalidYoungFunction("at least one finite knot is required", 0)
        if self.interp == "loglog" and np.any(v[:n_fin][t[:n_fin] > 0] <= 0):
            raise InvalidYoungFunction("loglog interpolation needs positive values at positive knots")
        object.__setattr__(self, "_t", t)
        object.__setattr__(self, "_v", v)
        object.__setattr__(self, "_nfin", n_fin)
        object.__setattr__(self, "knots", tuple(t.tolist()))
        object.__setattr__(self, "values", tuple(v.tolist()))
        self._check_shape()

    def _check_shape(self):
        t, v = self._t[: self._nfin], self._v[: self._nfin]
        if t[0] > 0:
            t = np.concatenate([[0.0], t])
            v = np.concatenate([[0.0], v])
        if t.size < 2:
            return
        slopes = np.diff(v) / np.diff(t)
        if np.any(slopes < 0):
            i = int(np.argmax(slopes < 0))
            raise InvalidYoungFunction("values must be non-decreasing", i + 1 - (self._t[0] > 0))
        drop = slopes[:-1] - slopes[1:]
        tol = CONVEXITY_SLACK * np.maximum(np.abs(slopes[:-1]), np.abs(slopes[1:])) + 1e-300
        bad = np.flatnonzero(drop > tol)
        if bad.size:
            raise InvalidYoungFunction("secant slopes must be non-decreasing (convexity)",
                                       int(bad[0]) + 1 - int(self._t[0] > 0))
        if np.all(v == 0) and self._nfin == self._v.size and self.extrapolate != "inf":
            if slopes[-1] == 0:
                raise InvalidYoungFunction("a Young function cannot vanish identically")

    def __eq__(self, other):
        return (isinstance(other, Tabulated) and self.knots == other.knots
                and self.values == other.values and self.interp == other.interp
                and self.extrapolate == other.extrapolate)

    def __hash__(self):
        return hash((self.knots, self.values, self.interp, self.extrapolate))

    def _segment_exponents(self, t, v):
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.diff(np.log(v)) / np.diff(np.log(t))

    def _eval(self, x):
        t, v, m = self._t, self._v, self._nfin
        tf, vf = t[:m], v[:m]
        out = np.empty_like(x)
        last = tf[-1]
        inside = (x >= tf[0]) & (x <= last)
        below = x < tf[0]
        above = x > last
        if self.interp == "linear" or m < 2:
            out[inside] = np.interp(x[inside], tf, vf)
        else:
            xi = x[inside]
            pos = tf > 0
            tp, vp = tf[pos], vf[pos]
            res = np.interp(xi, tf, vf)
            sel = xi >= tp[0]
            if tp.size >= 2:
                res[sel] = np.exp(np.interp(np.log(xi[sel]), np.log(tp), np.log(vp)))
            out[inside] = res
        # below the first knot
        if np.any(below):
            if self.interp == "loglog" and m >= 2 and tf[0] > 0:
                e0 = self._segment_exponents(tf[:2], vf[:2])[0]
                out[below] = vf[0] * (x[below] / tf[0]) ** e0
            else:
                out[below] = vf[0] * x[below] / tf[0]
        if np.any(above):
            if m < v.size:
                out[above] = math.inf
            elif self.extrapolate == "inf":
                out[above] = math.inf
            elif self.extrapolate == "power" and m >= 2 and vf[-2] > 0:
                e = self._segment_exponents(tf[-2:], vf[-2:])[0]
                out[above] = vf[-1] * (x[above] / last) ** e
            else:
                slope = (vf[-1] - vf[-2]) / (tf[-1] - tf[-2]) if m >= 2 else vf[-1] / last
                out[above] = vf[-1] + slope * (x[above] - last)
        return out

    def extrapolated(self, x) -> np.ndarray:
        """Mask of arguments evaluated outside the tabulated range."""
        x = np.asarray(x, dtype=float)
        return (x < self._t[0]) | (x > self._t[self._nfin - 1])

    def edge_exponents(self):
        """Log-log slopes of the first and last positive segments."""
        t, v = self._t[: self._nfin], self._v[: self._nfin]
        pos = (t > 0) & (v > 0)
        tp, vp = t[pos], v[pos]
        if tp.size < 2:
            return (math.nan, math.nan)
        e = self._segment_exponents(tp, vp)
        return (float(e[0]), float(e[-1]))

    def breakpoints(self):
        return tuple(self._t[: self._nfin].tolist())

    def finite_limit(self):
        if self._nfin < self._v.size or self.extrapolate == "inf":
            return float(self._t[self._nfin - 1])
        return math.inf

    def params(self):
        vals = ["inf" if math.isinf(x) else x for x in self.values]
        return {"knots": list(self.knots), "values": vals, "interp": self.interp,
                "extrapolate": self.extrapolate}


def evaluate(A: YoungFunction, t):
    """A(t) for t >= 0; may return +inf."""
    return A(t)


def from_json(obj) -> YoungFunction:
    """Build a Young function from its ``{kind, params...}`` object."""
    if isinstance(obj, YoungFunction):
        return obj
    if not isinstance(obj, dict) or "kind" not in obj:
        raise InvalidYoungFunction("Young function JSON must be an object with a 'kind' field")
    kind = obj["kind"]
    hint = obj.get("domain_hint")
    try:
        if kind == "Power":
            return Power(float(obj["p"]), domain_hint=hint)
        if kind == "PowerLog":
            ts = obj.get("t_splice")
            return PowerLog(float(obj["p"]), float(obj["alpha"]),
                            None if ts is None else float(ts), domain_hint=hint)
        if kind == "LinearCap":
            return LinearCap(float(obj.get("t0", 1.0)), domain_hint=hint)
        if kind == "Scaled":
            return Scaled(from_json(obj["base"]), float(obj["c"]), domain_hint=hint)
        if kind in ("Sum", "Max"):
            terms = tuple(from_json(x) for x in obj["terms"])
            return (Sum if kind == "Sum" else Max)(terms, domain_hint=hint)
        if kind == "Tabulated":
            vals = [math.inf if (isinstance(x, str) and x.lower() in ("inf", "infinity")) else float(x)
                    for x in obj["values"]]
            return Tabulated(tuple(float(x) for x in obj["knots"]), tuple(vals),
                             obj.get("interp", "linear"), obj.get("extrapolate", "linear"), hint)
    except KeyError as exc:
        raise InvalidYoungFunction(f"missing parameter {exc.args[0]!r} for kind {kind}") from None
    raise InvalidYoungFunction(f"unknown Young function kind {kind!r}")


def builtin_catalogue() -> dict:
    """Representative instance of every kind, keyed by a short label."""
    return {
        "Power(1.5)": Power(1.5),
        "Power(2)": Power(2.0),
        "Power(3)": Power(3.0),
        "Power(4)": Power(4.0),
        "PowerLog(4,1)": PowerLog(4.0, 1.0),
        "PowerLog(2,-0.5)": PowerLog(2.0, -0.5),
        "LinearCap(1)": LinearCap(1.0),
        "Scaled(Power(3),2)": Scaled(Power(3.0), 2.0),
        "Sum(Power(2),Power(4))": Sum((Power(2.0), Power(4.0))),
        "Max(Power(1.5),Power(3))": Max((Power(1.5), Power(3.0))),
        "Tabulated": Tabulated((0.0, 0.5, 1.0, 2.0, 4.0), (0.0, 0.1, 0.5, 2.0, 8.0)),
    }


# ---------------------------------------------------------------------------
# validation

def validate(A: YoungFunction, grid=None) -> None:
    """Check the Young-function invariants on a log grid.

    Raises InvalidYoungFunction naming the first failing grid index.
    """
    if grid is None:
        grid = np.logspace(-8, 8, 321)
        bps = [b for b in A.breakpoints() if b > 0]
        grid = np.unique(np.concatenate([grid, bps])) if bps else grid
    grid = np.asarray(grid, dtype=float)
    if A(0.0) != 0:
        raise InvalidYoungFunction("A(0) must be 0", 0)
    vals = np.asarray(A(grid), dtype=float)
    fin = np.isfinite(vals)
    if not np.any(vals > 0):
        raise InvalidYoungFunction("A must be non-constant on (0, inf)")
    n_fin = int(np.argmin(fin)) if not fin.all() else fin.size
    if np.any(fin[n_fin:]):
        raise InvalidYoungFunction("A must stay infinite once infinite", n_fin)
    t = np.concatenate([[0.0], grid[:n_fin]])
    v = np.concatenate([[0.0], vals[:n_fin]])
    if t.size < 3:
        return
    slopes = np.diff(v) / np.diff(t)
    if np.any(slopes < -CONVEXITY_SLACK * np.abs(slopes).max()):
        raise InvalidYoungFunction("A must be non-decreasing", int(np.argmax(slopes < 0)))
    drop = slopes[:-1] - slopes[1:]
    tol = CONVEXITY_SLACK * np.maximum(np.abs(slopes[:-1]), np.abs(slopes[1:])) + 1e-300
    bad = np.flatnonzero(drop > tol)
    if bad.size:
        raise InvalidYoungFunction("A must be convex", int(bad[0]))
    ratio = v[1:] / t[1:]
    dec = ratio[:-1] - ratio[1:]
    bad = np.flatnonzero(dec > CONVEXITY_SLACK * np.abs(ratio[1:]) + 1e-300)
    if bad.size:
        raise InvalidYoungFunction("A(t)/t must be non-decreasing", int(bad[0]))


# ---------------------------------------------------------------------------
# conjugation

def _legendre_of_samples(tau: np.ndarray, vals: np.ndarray):
    """Exact conjugate of the piecewise-linear interpolant of convex samples.

    Returns knots (slopes) and values of the conjugate, one knot per sample.
    The samples are first reduced to their lower convex hull.
    """
    hull = [0]
    for i in range(1, tau.size):
        while len(hull) >= 2:
            i0, i1 = hull[-2], hull[-1]
            # drop i1 if it lies on or above the chord i0 -> i
            lhs = (vals[i1] - vals[i0]) * (tau[i] - tau[i0])
            rhs = (vals[i] - vals[i0]) * (tau[i1] - tau[i0])
            if lhs >= rhs:
                hull.pop()
            else:
                break
        hull.append(i)
    h = np.asarray(hull)
    th, vh = tau[h], vals[h]
    slopes = np.diff(vh) / np.diff(th)
    knots = np.maximum.accumulate(np.concatenate([[0.0], slopes]))
    # between consecutive slopes the sup sits at hull vertex th[j], so the
    # conjugate grows with slope th[j]; accumulating keeps it exactly convex
    values = max(0.0, -vh[0]) + np.concatenate([[0.0], np.cumsum(th[:-1] * np.diff(knots))])
    keep = np.concatenate([[True], np.diff(knots) > 1e-12 * knots[1:]])
    return knots[keep], values[keep], th[-1]


def _conjugate_hint(A: YoungFunction):
    out = {}
    for end in ("zero", "infinity"):
        h = A.asymptotic(end)
        if h is None:
            continue
        if h.kind == "zero" or h.kind == "infinite":
            out[end] = Asymptotic("power", 1.0, 0.0)
        elif h.exponent > 1:
            e = h.exponent
            out[end] = Asymptotic("power", e / (e - 1), -h.log_exponent / (e - 1))
        elif h.exponent == 1 and h.log_exponent == 0:
            out[end] = Asymptotic("zero") if end == "zero" else Asymptotic("infinite")
    return out or None


def _numeric_conjugate(A: YoungFunction, decades: float = 15.0, per_decade: int = 100) -> Tabulated:
    tau = np.logspace(-decades, decades, int(2 * decades * per_decade) + 1)
    limit = A.finite_limit()
    bps = [b for b in A.breakpoints() if 0 < b < math.inf]
    if bps:
        tau = np.unique(np.concatenate([tau, bps]))
    if math.isfinite(limit):
        tau = np.unique(np.concatenate([tau[tau < limit], [limit]]))
    tau = np.concatenate([[0.0], tau])
    vals = np.asarray(A(tau), dtype=float)
    fin = np.isfinite(vals)
    tau, vals = tau[fin], vals[fin]
    knots, values, tmax = _legendre_of_samples(tau, vals)
    hint = _conjugate_hint(A)
    if math.isfinite(limit) and tmax >= limit * (1 - 1e-12):
        extrap = "linear"
        # beyond the last slope the sup sits at the end of the finite domain
        step = max(knots[-1], 1.0)
        knots = np.concatenate([knots, [knots[-1] + step]])
        values = np.concatenate([values, [values[-1] + tmax * step]])
    else:
        extrap = "power"
    return Tabulated(tuple(knots), tuple(values), "linear", extrap,
                     {k: v for k, v in (hint or {}).items()} or None)


def conjugate(A: YoungFunction) -> YoungFunction:
    """Young conjugate sup{tau t - A(tau)}.

    Powers and caps map to closed forms; piecewise-linear tables use the
    exact discrete Legendre transform (same knot count); everything else
    is transformed on a dense log grid and returned as a table.
    """
    if isinstance(A, Power):
        p = A.p
        if p == 1:
            return LinearCap(1.0)
        q = p / (p - 1)
        c = ((p - 1) * p ** (-q)) ** (1.0 / q)
        return Scaled(Power(q), c)
    if isinstance(A, LinearCap):
        return Scaled(Power(1.0), A.t0) if A.t0 != 1 else Power(1.0)
    if isinstance(A, Scaled):
        inner = conjugate(A.base)
        c = 1.0 / A.c
        if isinstance(inner, Scaled):
            return Scaled(inner.base, inner.c * c) if inner.c * c != 1 else inner.base
        if isinstance(inner, LinearCap):
            return LinearCap(inner.t0 / c)
        return Scaled(inner, c) if c != 1 else inner
    if isinstance(A, Tabulated) and A.interp == "linear" and A.extrapolate in ("inf", "linear"):
        return _conjugate_table(A)
    return _numeric_conjugate(A)


def _conjugate_table(A: Tabulated) -> Tabulated:
    t, v, m = A._t, A._v, A._nfin
    tf, vf = t[:m], v[:m]
    if tf[0] > 0:
        tf = np.concatenate([[0.0], tf])
        vf = np.concatenate([[0.0], vf])
    knots, values, tmax = _legendre_of_samples(tf, vf)
    infinite_after = m < v.size or A.extrapolate == "inf"
    hint = _conjugate_hint(A) if A.domain_hint else None
    if infinite_after:
        # A = inf past the last finite knot, so the conjugate grows with slope tmax;
        # one extra knot pins that slope for the linear extrapolation
        step = max(knots[-1], 1.0)
        knots = np.concatenate([knots, [knots[-1] + step]])
        values = np.concatenate([values, [values[-1] + tmax * step]])
        return Tabulated(tuple(knots), tuple(values), "linear", "linear", hint)
    return Tabulated(tuple(knots), tuple(values), "linear", "inf", hint)


# ---------------------------------------------------------------------------
# inverse

def inverse(A: YoungFunction, y):
    """Right-continuous generalized inverse sup{t >= 0 : A(t) <= y}."""
    yarr = np.asarray(y, dtype=float)
    if np.any(yarr < 0) or np.any(np.isnan(yarr)):
        raise DomainError("inverse is defined for y >= 0")
    h = A.homogeneous()
    if isinstance(A, LinearCap):
        out = np.full_like(yarr, A.t0)
    elif h is not None:
        p, c = h
        with np.errstate(over="ignore"):
            out = yarr ** (1.0 / p) / c
    else:
        out = _bisect_inverse(A, yarr.ravel()).reshape(yarr.shape)
    return _ret(out, y)


def _bisect_inverse(A: YoungFunction, y: np.ndarray) -> np.ndarray:
    out = np.empty_like(y)
    limit = A.finite_limit()
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        ok = lambda t, yy: A._eval(t) <= yy  # noqa: E731
        hi = np.ones_like(y)
        for _ in range(320):
            grow = ok(hi, y) & (hi < 1e300)
            if not grow.any():
                break
            hi[grow] *= 10.0
        lo = hi / 10.0
        for _ in range(640):
            shrink = ~ok(lo, y) & (lo > 1e-306)
            if not shrink.any():
                break
            lo[shrink] /= 10.0
            hi[shrink] = lo[shrink] * 10.0
        zero = ~ok(lo, y)
        top = ok(hi, y)
        for _ in range(80):
            # the product would leave the double range at the far ends
            mid = np.sqrt(lo) * np.sqrt(hi)
            good = ok(mid, y)
            lo = np.where(good, mid, lo)
            hi = np.where(good, hi, mid)
        for _ in range(8):
            mid = 0.5 * (lo + hi)
            good = ok(mid, y)
            lo = np.where(good, mid, lo)
            hi = np.where(good, hi, mid)
    out[:] = lo
    out[zero] = 0.0
    out[top] = math.inf if math.isinf(limit) else limit
    if math.isfinite(limit):
        out = np.minimum(out, limit)
    return out


# ---------------------------------------------------------------------------
# Matuszewska-Orlicz indices

class IndexEstimate(NamedTuple):
    value: float
    uncertainty: float
    determinate: bool
    extrapolants: tuple = ()


def _index_at(A, end: str) -> IndexEstimate:
    lambdas = 2.0 ** -np.arange(1, 9)
    if end == "zero":
        t = np.logspace(-300, -292, 33)
    else:
        t = np.logspace(292, 300, 33)
    base = np.asarray(inverse(A, t))
    est = []
    for lam in lambdas:
        ratio = np.asarray(inverse(A, lam * t)) / base
        low = np.nanmin(ratio)
        with np.errstate(divide="ignore"):
            est.append(math.log(lam) / math.log(low) if low > 0 and low != 1 else math.inf)
    est = np.asarray(est)
    if np.all(np.isinf(est)):
        # A^{-1} is flat here, so A jumps to infinity: the index is +inf exactly
        return IndexEstimate(math.inf, 0.0, True, tuple(est.tolist()))
    j = np.arange(1, 9, dtype=float)
    # first-order Richardson step against a 1/j correction
    with np.errstate(invalid="ignore"):
        rich = (j[1:] * est[1:] - j[:-1] * est[:-1])
    last = rich[-3:]
    if not np.all(np.isfinite(last)):
        return IndexEstimate(float(est[-1]), math.inf, False, tuple(rich.tolist()))
    spread = float(last.max() - last.min())
    value = float(last[-1])
    return IndexEstimate(value, spread / 2, spread / 2 <= 0.05, tuple(rich.tolist()))


def indices(A: YoungFunction) -> tuple:
    """Estimate (i_zero, i_infinity) with uncertainty half-widths.

    Uses the inverse-ratio definition on grids spanning 8 decades at the
    far ends of the double range and lambda = 2^-1 .. 2^-8, followed by
    one Richardson step; the uncertainty is half the spread of the last
    three extrapolants.  Non-convergence is reported, not raised.
    """
    return _index_at(A, "zero"), _index_at(A, "infinity")


# ---------------------------------------------------------------------------
# domination

class Domination(NamedTuple):
    holds: bool
    c: float | None
    counterexample: float | None
    range: str
    t0: float | None


def dominates(A: YoungFunction, B: YoungFunction, range: str = "global",
              t0: float | None = None, c_max: float = 1e3, decades: float = 8.0) -> Domination:
    """Grid semi-decision of B(t) <= A(c t) on the requested range.

    Returns the smallest c on a geometric grid in [1, c_max] that passes,
    or a counterexample t that defeats c_max.
    """
    if range not in ("global", "near_zero", "near_infinity"):
        raise DomainError(f"unknown range {range!r}")
    if range != "global" and not (t0 and t0 > 0):
        raise DomainError("t0 > 0 is required for near_zero / near_infinity")
    if range == "global":
        t = np.logspace(-decades, decades, int(64 * decades) + 1)
    elif range == "near_zero":
        t = t0 * np.logspace(-decades, 0, int(64 * decades) + 1)
    else:
        t = t0 * np.logspace(0, decades, int(64 * decades) + 1)
    b = np.asarray(B(t))
    cs = np.unique(np.concatenate([2.0 ** np.arange(0, math.log2(c_max) + 1e-9, 0.125), [c_max]]))
    for c in cs:
        a = np.asarray(A(c * t))
        if np.all(b <= a * (1 + 1e-12)):
            return Domination(True, float(c), None, range, t0)
    a = np.asarray(A(c_max * t))
    with np.errstate(divide="ignore", invalid="ignore"):
        excess = np.where(b > a * (1 + 1e-12), b / np.where(a > 0, a, 1e-300), 0.0)
    return Domination(False, None, float(t[int(np.argmax(excess))]), range, t0)
