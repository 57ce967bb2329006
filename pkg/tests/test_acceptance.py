"""Acceptance criteria, one check per criterion.

Each ``criterion_*`` function returns (passed, detail) and records its
result in RESULTS; the pytest hook in conftest.py prints one PASS/FAIL
line per criterion, and ``python3 tests/test_acceptance.py`` does the same
without pytest.
"""

import math
import time

import numpy as np
import pytest
from scipy import integrate as sp_integrate

from campanato import analysis, extremals, gauges, seminorms, young
from campanato.analysis import StepFunction
from campanato.gauges import EmbeddingParams as P
from campanato.young import Power, PowerLog

import oracles

RESULTS = {}


def record(key, passed, detail, elapsed, limit):
    ok = bool(passed) and elapsed < limit
    RESULTS[key] = (ok, f"{detail}; {elapsed:.2f}s (limit {limit:g}s)")
    return ok, RESULTS[key][1]


def timed(fn):
    t0 = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t0


# 1 ----------------------------------------------------------------------------

def criterion_1():
    def run():
        t = np.logspace(-6, 6, 50)
        worst_band, worst_bi = 0.0, 0.0
        ok = True
        for p in (1.5, 2.0, 3.0, 4.0):
            A = Power(p)
            C = young.conjugate(A)
            prod = np.asarray(young.inverse(A, t)) * np.asarray(young.inverse(C, t)) / t
            # Power(2) sits exactly on the upper edge; allow rounding only
            ok &= bool(np.all(prod >= 1 - 1e-12) and np.all(prod <= 2 + 1e-12))
            worst_band = max(worst_band, float(np.max(np.abs(prod - 1.5))))
            bi = np.asarray(young.conjugate(C)(t)) / np.asarray(A(t)) - 1
            worst_bi = max(worst_bi, float(np.max(np.abs(bi))))
        return ok and worst_bi <= 1e-6, worst_band, worst_bi

    (ok, band, bi), dt = timed(run)
    return record("C1 conjugation suite", ok, f"max |ratio-1.5| {band:.3f}, biconjugation error {bi:.1e}", dt, 1.0)


# 2 ----------------------------------------------------------------------------

def criterion_2():
    def run():
        worst = 0.0
        for A in young.builtin_catalogue().values():
            for m in (1e-3, 1.0, 1e3):
                want = 1.0 / float(young.inverse(A, 1.0 / m))
                lux = analysis.luxemburg_norm(StepFunction.indicator(m), A)
                cn = analysis.char_norm(A, m)
                worst = max(worst, abs(lux / want - 1), abs(cn / want - 1))
        return worst

    worst, dt = timed(run)
    return record("C2 characteristic norms", worst <= 1e-8, f"max rel error {worst:.1e}", dt, 1.0)


# 3 ----------------------------------------------------------------------------

def criterion_3():
    n, s, A = 3, 1.5, Power(4.0)
    params = P(n, s)
    At = young.conjugate(A)
    e = (n + 1 - s) / n

    def run():
        worst_lib, worst_scipy, worst_oracle = 0.0, 0.0, 0.0
        for r in (0.1, 1.0, 10.0):
            for lam in (0.5, 1.0, 4.0):
                lhs, rhs = gauges.dual_tail_identity(params, A, r, lam)
                g = lambda rho: float(At(rho ** (-e) / lam))  # noqa: E731
                lo = r ** n
                ref = sp_integrate.quad(g, lo, 10 * lo, limit=200)[0] + \
                    sp_integrate.quad(g, 10 * lo, math.inf, limit=200)[0]
                exact = n / (n + 1 - s) * lo * float(oracles.F_power(n, s, 4.0, r ** (s - n - 1) / lam))
                worst_lib = max(worst_lib, abs(lhs / rhs - 1))
                worst_scipy = max(worst_scipy, abs(ref / rhs - 1))
                worst_oracle = max(worst_oracle, abs(rhs / exact - 1))
        return worst_lib, worst_scipy, worst_oracle

    (a, b, c), dt = timed(run)
    return record("C3 tail identity", max(a, b, c) <= 1e-3,
                  f"library quadrature {a:.1e}, scipy quadrature {b:.1e}, F vs closed form {c:.1e}", dt, 5.0)


# 4 ----------------------------------------------------------------------------

def criterion_4():
    def run():
        r = np.logspace(-3, 0, 31)
        errs = []
        for n, s, p in ((3, 1.5, 4.0), (2, 1.5, 3.0), (2, 1.5, 2.0)):
            g = gauges.build_Fk_and_psi_k(P(n, s), Power(p))
            slope = np.polyfit(np.log(r), np.log(g(r)), 1)[0]
            errs.append(abs(slope - (s - n / p)))
        flat = all(np.all(gauges.phi_sA(P(n, s), Power(n / s), r) == 1.0) for n, s in ((1, 0.5), (2, 0.5)))
        return max(errs), flat

    (err, flat), dt = timed(run)
    return record("C4 gauge slopes", err <= 0.02 and flat,
                  f"max slope error {err:.1e}, phi identically 1: {flat}", dt, 5.0)


# 5 ----------------------------------------------------------------------------

LEMMA_CASES = [(0.0, 0.25), (0.5, 0.25), (1 / 3, 1 / 6)]


def criterion_5(include_negative=True):
    def run():
        rows = []
        betas = LEMMA_CASES + ([(-0.5, 0.5)] if include_negative else [])
        for beta, alpha in betas:
            for A in (Power(2.0), Power(3.0)):
                for r in (0.1, 1.0, 10.0):
                    rep = analysis.lemma_rinorm_equivalence(alpha, beta, r, A)
                    rows.append((beta, alpha, A.p, r, rep))
        return rows

    rows, dt = timed(run)
    bad = [(b, a, p, r, rep.ratio, rep.finite) for b, a, p, r, rep in rows if not rep.within]
    if bad:
        b, a, p, r, ratio, fin = bad[0]
        detail = (f"{len(bad)}/{len(rows)} cases outside the band; first beta={b:g} alpha={a:g} "
                  f"Power({p:g}) r={r:g}: finite={fin}, ratio={ratio}")
    else:
        detail = f"all {len(rows)} ratios inside their bands"
    key = "C5 lemma bands" if include_negative else "C5 lemma bands, attainable cases"
    return record(key, not bad, detail, dt, 10.0)


# 6 ----------------------------------------------------------------------------

def criterion_6():
    params, A = P(1, 0.5), Power(2.0)
    u = extremals.make_uf(StepFunction.indicator(1.0), params)
    g = gauges.phi_gauge(params, A)

    def run():
        R = {}
        for rmin in (1e-2, 1e-4):
            for level in (1, 2):
                balls = seminorms.BallFamily.geometric(rmin, 1.0, 12)
                R[rmin, level] = seminorms.embedding_ratio_experiment(u, params, A, g, balls, level=level).sup_ratio
        return R

    R, dt = timed(run)
    refine = max(abs(R[m, 2] / R[m, 1] - 1) for m in (1e-2, 1e-4))
    growth = R[1e-4, 2] / R[1e-2, 2]
    ok = refine < 0.1 and math.isfinite(growth) and growth < 1 + 0.1
    return record("C6 embedding ratio", ok,
                  f"R={R[1e-2, 2]:.4f} (r_min 1e-2), {R[1e-4, 2]:.4f} (r_min 1e-4); "
                  f"refinement change {refine:.1e}", dt, 60.0)


# 7 ----------------------------------------------------------------------------

def criterion_7():
    params, A = P(1, 0.5), Power(2.0)
    base = gauges.phi_gauge(params, A)
    g = gauges.Gauge(lambda r: base(r) * np.log(np.e + 1 / r), "phi*log(e+1/r)")

    def run():
        balls = seminorms.BallFamily.geometric(1e-4, 1.0, 12)
        return seminorms.optimality_experiment(params, A, g, balls)

    rep, dt = timed(run)
    q = np.array([row["gauge_quotient"] for row in rep.per_ball])  # increasing radius
    ok = bool(np.all(np.diff(q) > 0)) and q[0] < 0.2
    return record("C7 optimality quotient", ok, f"quotient {q[-1]:.3f} at r=1 down to {q[0]:.3f} at r=1e-4", dt, 60.0)


# 8 ----------------------------------------------------------------------------

def criterion_8():
    js = list(range(2, 65))

    def run():
        out = {}
        for n, s, k in ((2, 1.5, 0), (2, 2.5, 1), (1, 2.5, 0)):
            xi = extremals.bump(n, "harmonic" if k else "tilted", k)
            out[n, s, k] = seminorms.necessity_scaling_experiment(P(n, s, k), Power(2.0), xi, js).slopes["fitted"]
        return out

    sl, dt = timed(run)
    ok = (abs(sl[2, 1.5, 0] - (1.5 - 2 - 1)) <= 0.1 and abs(sl[2, 2.5, 1] - (2.5 - 2 - 1 - 1)) <= 0.1
          and sl[1, 2.5, 0] > 0)
    return record("C8 necessity scaling", ok,
                  f"slopes {sl[2, 1.5, 0]:.4f}, {sl[2, 2.5, 1]:.4f}, {sl[1, 2.5, 0]:.4f} (beyond range)", dt, 120.0)


# 9 ----------------------------------------------------------------------------

def criterion_9():
    cat = young.builtin_catalogue()

    def run():
        worst = 0.0
        for name in ("Power(2)", "PowerLog(4,1)", "Sum(Power(2),Power(4))"):
            for m in (1e-2, 1.0, 1e2):
                f = extremals.make_normalized_f(cat[name], m)
                worst = max(worst, abs(analysis.luxemburg_norm(f, cat[name]) - 1))
        return worst

    worst, dt = timed(run)
    return record("C9 normalized extremal data", worst <= 1e-6, f"max |norm-1| {worst:.1e}", dt, 1.0)


# 10 ---------------------------------------------------------------------------

def criterion_10():
    def run():
        mismatches, pairs = [], 0
        cases = [(A, p) for A in young.builtin_catalogue().values()
                 for p in (P(2, 0.5), P(1, 0.5), P(2, 1.5), P(3, 2.5))]
        cases += [(PowerLog(4.0, a), P(2, 0.5)) for a in (1.0, 2.5, 3.0, 3.5, 4.0, 4.5, 5.0, 6.0)]
        for A, p in cases:
            for key, (a, b) in gauges.coherence_report(p, A).items():
                pairs += 1
                if a != b:
                    mismatches.append((A, p, key, a, b))
        return mismatches, pairs

    (mism, pairs), dt = timed(run)
    detail = f"{pairs} verdict pairs, {len(mism)} disagreements"
    if mism:
        detail += f"; first {mism[0]}"
    return record("C10 verdict coherence", not mism, detail, dt, 10.0)


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6,
            criterion_7, criterion_8, criterion_9, criterion_10]


# pytest entry points -----------------------------------------------------------

@pytest.mark.parametrize("crit", [c for c in CRITERIA if c is not criterion_5], ids=lambda c: c.__name__)
def test_criterion(crit):
    ok, detail = crit()
    assert ok, detail


def test_criterion_5_attainable_part():
    ok, detail = criterion_5(include_negative=False)
    assert ok, detail


@pytest.mark.xfail(strict=True, reason="beta = -1/2 needs alpha >= 1/2 while finite norms in L^conj need "
                                       "alpha < 1/p; see the decisions ledger")
def test_criterion_5():
    ok, detail = criterion_5()
    assert ok, detail


def test_unattainable_case_is_reported_as_divergent():
    rep = analysis.lemma_rinorm_equivalence(0.5, -0.5, 1.0, Power(2.0))
    assert not rep.finite and not rep.within


if __name__ == "__main__":
    criterion_5(include_negative=False)
    for crit in CRITERIA:
        crit()
    for key, (ok, detail) in RESULTS.items():
        print(f"{'PASS' if ok else 'FAIL'}  {key}: {detail}")
