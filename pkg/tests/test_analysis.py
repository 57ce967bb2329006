import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from campanato import analysis, gauges, young
from campanato.analysis import SampledFunction, StepFunction
from campanato.young import DomainError, Power

import oracles

CATALOGUE = young.builtin_catalogue()


def steps(max_pieces=5):
    """Random non-increasing step functions with bounded support."""
    return st.lists(st.tuples(st.floats(0.05, 3.0), st.floats(0.01, 5.0)),
                    min_size=1, max_size=max_pieces).map(_as_step)


def _as_step(pairs):
    widths = [w for w, _ in pairs]
    levels = sorted((lv for _, lv in pairs), reverse=True)
    return StepFunction(np.concatenate([[0.0], np.cumsum(widths)]), np.asarray(levels))


# step functions and sampled data --------------------------------------------

def test_step_function_rejects_increasing_levels():
    with pytest.raises(DomainError):
        StepFunction(np.array([0.0, 1.0, 2.0]), np.array([1.0, 2.0]))


def test_step_power_integral_closed_form():
    f = StepFunction(np.array([0.0, 1.0, 3.0]), np.array([2.0, 1.0]))
    expected = integrate.quad(lambda r: float(f(r)) * r ** -0.5, 0.25, 3, points=[1])[0]
    assert float(f.power_integral(-0.5, 0.25)) == pytest.approx(expected, rel=1e-10)
    log_piece = integrate.quad(lambda r: float(f(r)) / r, 0.5, 2.0, points=[1])[0]
    assert float(f.power_integral(-1.0, 0.5, 2.0)) == pytest.approx(log_piece, rel=1e-10)


def test_sampled_function_requires_increasing_grid():
    with pytest.raises(DomainError):
        SampledFunction(np.array([0.0, 2.0, 1.0]), np.array([1.0, 1.0, 1.0]))


# rearrangement --------------------------------------------------------------

def test_rearrangement_of_constant():
    star = analysis.decreasing_rearrangement(np.full(7, 2.5), np.full(7, 0.5))
    np.testing.assert_array_equal(star.values, [2.5])
    assert star.support_bound == pytest.approx(3.5)


def test_rearrangement_two_levels():
    star = analysis.decreasing_rearrangement(np.array([1.0, 3.0, 1.0]), np.array([1.0, 1.0, 1.0]))
    assert float(star(0.5)) == 3.0
    assert float(star(1.5)) == 1.0 and float(star(2.9)) == 1.0
    assert float(star(3.5)) == 0.0


@settings(max_examples=50, deadline=None)
@given(st.lists(st.tuples(st.floats(-5, 5), st.floats(0.0, 2.0)), min_size=1, max_size=30))
def test_rearrangement_matches_sorting_oracle(pairs):
    vals = np.array([v for v, _ in pairs])
    w = np.array([x for _, x in pairs])
    star = analysis.decreasing_rearrangement(vals, w)
    levels, measures = oracles.rearrange_by_sorting(vals, w)
    if not levels:
        assert star.support_bound == 0.0
        return
    # compare distribution functions at every level, including just below each
    cum = np.cumsum(measures)
    for lv, mu in zip(levels, cum):
        got = star.widths[star.values >= lv].sum()
        assert got == pytest.approx(mu, rel=1e-12, abs=1e-12)
    assert set(star.values.tolist()) <= set(levels)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.floats(0, 10), min_size=1, max_size=25), st.integers(0, 2 ** 31))
def test_rearrangement_idempotent_and_measure_preserving(vals, seed):
    vals = np.asarray(vals)
    w = np.random.default_rng(seed).uniform(0.1, 1.0, vals.size)
    star = analysis.decreasing_rearrangement(vals, w)
    again = analysis.decreasing_rearrangement(star)
    np.testing.assert_allclose(again.values, star.values)
    np.testing.assert_allclose(again.widths, star.widths)
    for t in (0.0, 1.0, 5.0):
        assert star.widths[star.values > t].sum() == pytest.approx(w[vals > t].sum(), abs=1e-12)


@pytest.mark.parametrize("name", ["Power(2)", "PowerLog(4,1)", "Tabulated"])
def test_rearrangement_preserves_norm(name):
    A = CATALOGUE[name]
    rng = np.random.default_rng(3)
    vals, w = rng.uniform(0, 4, 40), rng.uniform(0.05, 0.3, 40)
    star = analysis.decreasing_rearrangement(vals, w)
    direct = oracles.luxemburg_from_modular(lambda lam: float(np.dot(A(vals / lam), w)))
    assert analysis.luxemburg_norm(star, A) == pytest.approx(direct, rel=1e-8)


# double star ----------------------------------------------------------------

def test_double_star_of_indicator():
    r = np.array([0.25, 0.5, 1.0, 2.0, 8.0])
    ds = analysis.double_star(StepFunction.indicator(1.0), r)
    np.testing.assert_allclose(ds.values, np.minimum(1.0, 1.0 / r), rtol=1e-14)


def test_double_star_of_constant():
    ds = analysis.double_star(StepFunction.indicator(5.0, 3.0), np.array([0.1, 1.0, 4.9]))
    np.testing.assert_allclose(ds.values, 3.0)


@settings(max_examples=40, deadline=None)
@given(steps())
def test_double_star_dominates_and_decreases(f):
    r = np.geomspace(1e-3, 2 * f.support, 60)
    ds = analysis.double_star(f, r).values
    assert np.all(np.diff(ds) <= 1e-12)
    assert np.all(ds >= f(r) - 1e-12)


@pytest.mark.parametrize("beta", [-0.5, 0.0, 0.5, 2.0])
def test_double_star_power_indicator_closed_form(beta):
    r = 1.3
    # x^beta on (0, r) rearranges to itself for beta < 0 and to (r - x)^beta otherwise
    star = (lambda x: x ** beta) if beta < 0 else (lambda x: (r - x) ** beta)
    for rho in (1e-9, 0.2, 1.0, 2.5):
        avg = integrate.quad(lambda x: star(x) if x < r else 0.0, 0, rho, points=[min(r, rho)])[0] / rho
        got = float(analysis.double_star_power_indicator(beta, r, np.array([rho]))[0])
        assert got == pytest.approx(avg, rel=1e-9)


# Luxemburg norms ------------------------------------------------------------

def test_luxemburg_indicator_square():
    assert analysis.luxemburg_norm(StepFunction.indicator(4.0), Power(2)) == pytest.approx(2.0, rel=1e-12)


def test_luxemburg_zero():
    assert analysis.luxemburg_norm(lambda x: 0.0 * x, Power(2), (0.0, 1.0)) == 0.0
    assert analysis.luxemburg_norm(StepFunction.indicator(1.0, 0.0), Power(2)) == 0.0


def test_luxemburg_closed_form_integrand_against_oracle():
    A = CATALOGUE["Sum(Power(2),Power(4))"]
    f = lambda x: np.exp(-np.asarray(x))  # noqa: E731
    oracle = oracles.luxemburg_from_modular(
        lambda lam: integrate.quad(lambda x: float(A(math.exp(-x) / lam)), 0, math.inf)[0])
    assert analysis.luxemburg_norm(f, A, (0.0, math.inf)) == pytest.approx(oracle, rel=1e-7)


def test_luxemburg_infinite_modular():
    # x^-1 on (0, 1) has a divergent L^2 modular for every lambda
    assert analysis.luxemburg_norm(lambda x: 1 / np.asarray(x), Power(2), (0.0, 1.0)) == math.inf


@settings(max_examples=30, deadline=None)
@given(steps(), st.sampled_from([0.5, 3.0]), st.sampled_from(["Power(2)", "PowerLog(4,1)", "Tabulated"]))
def test_luxemburg_homogeneity(f, c, name):
    A = CATALOGUE[name]
    assert analysis.luxemburg_norm(f.scaled(c), A) == pytest.approx(c * analysis.luxemburg_norm(f, A), rel=1e-8)


@pytest.mark.parametrize("p,m", [(2.0, 4.0), (3.0, 0.2), (1.5, 10.0)])
def test_char_norm_power(p, m):
    assert analysis.char_norm(Power(p), m) == pytest.approx(m ** (1 / p), rel=1e-12)
    assert analysis.char_norm(Power(p), m) == pytest.approx(oracles.indicator_norm(Power(p), m), rel=1e-10)


def test_char_norm_grows_with_measure():
    vals = [analysis.char_norm(CATALOGUE["PowerLog(4,1)"], m) for m in (1, 1e3, 1e6, 1e9)]
    assert all(b > a for a, b in zip(vals, vals[1:]))
    assert vals[-1] > 100


def test_char_norm_rejects_nonpositive():
    with pytest.raises(DomainError):
        analysis.char_norm(Power(2), 0.0)


@pytest.mark.parametrize("r", [0.5, 1.0, 2.0])
def test_tail_norm_against_inverse_of_F(r):
    # the modular of rho^{(s-1)/n-1} chi_(r^n, inf) equals (n/(n+1-s)) r^n F(r^{s-n-1}/lam),
    # so the norm sits in [1, n/(n+1-s)] times r^{s-n-1}/F^{-1}(r^-n)
    n, s, A = 3, 1.5, Power(4)
    params = gauges.EmbeddingParams(n, s)
    F = gauges.build_F(params, A)
    e = (s - 1) / n - 1
    norm = analysis.luxemburg_norm(lambda x: np.asarray(x) ** e, young.conjugate(A), (r ** n, math.inf))
    ref = r ** (s - n - 1) / float(young.inverse(F, r ** -n))
    assert 1 - 1e-6 <= norm / ref <= n / (n + 1 - s) + 1e-6


# dual pairing ---------------------------------------------------------------

def test_dual_pairing_indicator_certified():
    d = analysis.monotone_dual_pairing(StepFunction.indicator(1.0), Power(2))
    assert d.certified and d.lower >= d.norm * (1 - 1e-9)
    assert d.lower <= d.upper


def test_dual_pairing_zero():
    d = analysis.monotone_dual_pairing(StepFunction.indicator(1.0, 0.0), Power(2))
    assert (d.lower, d.upper) == (0.0, 0.0)


def test_dual_pairing_power_profile():
    f = lambda x: np.where(np.asarray(x) < 1, np.maximum(np.asarray(x), 1e-300) ** -0.25, 0.0)  # noqa: E731
    d = analysis.monotone_dual_pairing(f, Power(2), (0.0, 1.0), breaks=(1.0,))
    # Hoelder is attained by g = f itself here, so the ratio reaches 1 up to rounding
    assert 0.5 <= d.lower / d.upper <= 1.0 + 1e-12


@settings(max_examples=25, deadline=None)
@given(steps(), steps(), st.sampled_from(["Power(2)", "Power(3)", "PowerLog(4,1)"]))
def test_holder_inequality(f, g, name):
    A = CATALOGUE[name]
    At = young.conjugate(A)
    edges = np.unique(np.concatenate([f.breakpoints, g.breakpoints]))
    mids = 0.5 * (edges[1:] + edges[:-1])
    pairing = float(np.sum(f(mids) * g(mids) * np.diff(edges)))
    bound = 2 * analysis.luxemburg_norm(f, At) * analysis.luxemburg_norm(g, A)
    assert pairing <= bound * (1 + 1e-9)


# two-sided estimate ---------------------------------------------------------

def test_lemma_beta_zero_band():
    rep = analysis.lemma_rinorm_equivalence(0.25, 0.0, 1.0, Power(2))
    assert rep.band == (1.0, 3.0) and rep.within and rep.finite


def test_lemma_with_embedding_exponents():
    n, s = 3, 1.5
    rep = analysis.lemma_rinorm_equivalence((s - 1) / n, 1 / n, 0.7, Power(2))
    assert rep.within


@pytest.mark.parametrize("A", [Power(2), Power(3)])
def test_lemma_r_scaling(A):
    a, b = (analysis.lemma_rinorm_equivalence(0.25, 0.5, r, A) for r in (0.4, 0.8))
    assert b.lhs / a.lhs == pytest.approx(b.rhs / a.rhs, rel=1e-6)


def test_lemma_parameter_checks():
    with pytest.raises(DomainError):
        analysis.lemma_rinorm_equivalence(0.25, -0.5, 1.0, Power(2))
    with pytest.raises(DomainError):
        analysis.lemma_rinorm_equivalence(0.0, 0.5, 1.0, Power(2))
    with pytest.raises(DomainError):
        analysis.lemma_rinorm_equivalence(0.5, -1.0, 1.0, Power(2))


def test_lemma_reports_divergent_tail():
    # rho^{alpha-1} is not square integrable at infinity once alpha >= 1/2
    rep = analysis.lemma_rinorm_equivalence(0.5, -0.5, 1.0, Power(2))
    assert not rep.finite and not rep.within
