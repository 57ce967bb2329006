import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from campanato import young
from campanato.young import (DomainError, InvalidYoungFunction, LinearCap, Max, Power, PowerLog,
                             Scaled, Sum, Tabulated)

import oracles

CATALOGUE = young.builtin_catalogue()
GRID = np.logspace(-6, 6, 49)


# evaluation -----------------------------------------------------------------

def test_power_value():
    assert young.evaluate(Power(2), 3.0) == 9.0


@pytest.mark.parametrize("name", CATALOGUE)
def test_zero_at_origin(name):
    assert young.evaluate(CATALOGUE[name], 0.0) == 0.0


def test_linear_cap_is_infinite_past_threshold():
    A = LinearCap(1.0)
    assert A(2.0) == math.inf
    assert A(1.0) == 0.0
    assert math.isinf(A(np.array([0.5, 3.0]))[1])


def test_negative_argument_rejected():
    with pytest.raises(DomainError):
        young.evaluate(Power(2), -1.0)


def test_powerlog_splice_is_c1_and_convex():
    A = PowerLog(4.0, 1.0)
    ts = A.t_splice
    h = 1e-6 * ts
    left = (A(ts) - A(ts - h)) / h
    right = (A(ts + h) - A(ts)) / h
    assert left == pytest.approx(right, rel=1e-4)
    young.validate(A)


def test_tabulated_interpolates_and_extrapolates():
    T = Tabulated((0.0, 1.0, 2.0), (0.0, 1.0, 3.0))
    assert T(0.5) == pytest.approx(0.5)
    assert T(3.0) == pytest.approx(5.0)
    Ti = Tabulated((0.0, 1.0, 2.0), (0.0, 1.0, 3.0), extrapolate="inf")
    assert Ti(2.5) == math.inf


# validation -----------------------------------------------------------------

def test_nonconvex_table_names_knot():
    with pytest.raises(InvalidYoungFunction) as exc:
        Tabulated((0.0, 1.0, 2.0, 3.0), (0.0, 1.0, 1.5, 5.0))
    assert exc.value.index == 1


def test_table_must_stay_infinite():
    with pytest.raises(InvalidYoungFunction):
        Tabulated((0.0, 1.0, 2.0, 3.0), (0.0, 1.0, math.inf, 4.0))


def test_power_below_one_rejected():
    with pytest.raises(InvalidYoungFunction):
        Power(0.5)


@pytest.mark.parametrize("name", CATALOGUE)
def test_builtins_validate(name):
    young.validate(CATALOGUE[name])


@pytest.mark.parametrize("name", CATALOGUE)
def test_json_round_trip(name):
    A = CATALOGUE[name]
    B = young.from_json(json.loads(json.dumps(A.to_dict())))
    t = np.logspace(-3, 3, 13)
    np.testing.assert_allclose(B(t), A(t), rtol=1e-14)


def test_unknown_kind_rejected():
    with pytest.raises(InvalidYoungFunction):
        young.from_json({"kind": "Cosh"})


# conjugation ----------------------------------------------------------------

def test_conjugate_of_square_is_quarter_square():
    C = young.conjugate(Power(2))
    t = np.array([0.1, 1.0, 3.0, 100.0])
    np.testing.assert_allclose(C(t), t ** 2 / 4, rtol=1e-14)


def test_conjugate_of_linear_is_cap():
    C = young.conjugate(Power(1))
    assert isinstance(C, LinearCap) and C.t0 == 1.0
    assert C(0.999) == 0.0 and C(1.001) == math.inf


@pytest.mark.parametrize("p", [1.5, 2.0, 3.0, 4.0])
def test_power_conjugate_closed_form_against_legendre_search(p):
    C = young.conjugate(Power(p))
    for t in (1e-2, 0.7, 5.0):
        brute = oracles.legendre_sup(lambda x: np.asarray(x, dtype=float) ** p, t)
        assert C(t) == pytest.approx(brute, rel=1e-8)
        assert C(t) == pytest.approx(float(oracles.power_conjugate(p, t)), rel=1e-12)


@pytest.mark.parametrize("name", ["PowerLog(4,1)", "Sum(Power(2),Power(4))",
                                  "Max(Power(1.5),Power(3))", "Tabulated"])
def test_numeric_conjugate_against_legendre_search(name):
    A = CATALOGUE[name]
    C = young.conjugate(A)
    for t in (0.3, 2.0, 2.9):
        brute = oracles.legendre_sup(A, t)
        assert C(t) == pytest.approx(brute, rel=2e-3, abs=1e-12)


def test_conjugate_of_linear_tail_is_infinite_past_last_slope():
    # the built-in table continues with slope 3, so sup(tau t - A) is unbounded for t > 3
    C = young.conjugate(CATALOGUE["Tabulated"])
    assert math.isfinite(C(2.99)) and C(3.01) == math.inf


@pytest.mark.parametrize("name", CATALOGUE)
def test_conjugate_is_young(name):
    young.validate(young.conjugate(CATALOGUE[name]))


@pytest.mark.parametrize("name", CATALOGUE)
def test_biconjugation(name):
    A = CATALOGUE[name]
    B = young.conjugate(young.conjugate(A))
    t = np.logspace(-3, 3, 25)
    a, b = A(t), B(t)
    tol = 1e-3 if isinstance(young.conjugate(A), Tabulated) else 1e-6
    fin = np.isfinite(a) & (a > 0)
    np.testing.assert_allclose(b[fin], a[fin], rtol=tol)
    assert np.all(np.isinf(b[np.isinf(a)]))


def test_biconjugation_power3_tight():
    B = young.conjugate(young.conjugate(Power(3)))
    t = np.logspace(-4, 4, 33)
    np.testing.assert_allclose(B(t), t ** 3, rtol=1e-6)


# inverse --------------------------------------------------------------------

def test_inverse_square_root():
    assert young.inverse(Power(2), 4.0) == pytest.approx(2.0, rel=1e-15)


def test_inverse_of_cap_is_threshold():
    np.testing.assert_array_equal(young.inverse(LinearCap(1.0), [0.0, 1.0, 7.0]), [1.0, 1.0, 1.0])


def test_inverse_right_continuous_on_plateau():
    # A is flat at level 1 on [1, 2]; the right-continuous inverse picks the right end
    T = Tabulated((0.0, 1.0, 2.0, 3.0), (0.0, 0.0, 0.0, 1.0))
    assert young.inverse(T, 0.0) == pytest.approx(2.0, rel=1e-12)


def test_inverse_rejects_negative():
    with pytest.raises(DomainError):
        young.inverse(Power(2), -1.0)


def test_inverse_by_bisection_matches_evaluation():
    A = CATALOGUE["Sum(Power(2),Power(4))"]
    y = np.logspace(-5, 5, 11)
    np.testing.assert_allclose(A(young.inverse(A, y)), y, rtol=1e-10)


@pytest.mark.parametrize("t", [1e-3, 1.0, 1e3])
def test_duality_band_square(t):
    prod = young.inverse(Power(2), t) * young.inverse(young.conjugate(Power(2)), t)
    assert t * (1 - 1e-12) <= prod <= 2 * t * (1 + 1e-12)


@pytest.mark.parametrize("name", CATALOGUE)
def test_duality_band_builtins(name):
    A = CATALOGUE[name]
    C = young.conjugate(A)
    # dense-grid conjugates carry ~1e-5 relative discretization error
    tol = 1e-4 if isinstance(C, Tabulated) else 1e-9
    prod = np.asarray(young.inverse(A, GRID)) * np.asarray(young.inverse(C, GRID))
    assert np.all(prod >= GRID * (1 - tol))
    assert np.all(prod <= 2 * GRID * (1 + tol))


# indices and domination ------------------------------------------------------

def test_indices_power3():
    i0, iinf = young.indices(Power(3))
    assert i0.value == pytest.approx(3, abs=0.01) and iinf.value == pytest.approx(3, abs=0.01)
    assert i0.determinate and iinf.determinate


def test_indices_powerlog():
    i0, iinf = young.indices(PowerLog(4.0, 1.0))
    assert i0.value == pytest.approx(4, abs=0.05) and iinf.value == pytest.approx(4, abs=0.05)


def test_indices_linear():
    i0, iinf = young.indices(Power(1))
    assert i0.value == pytest.approx(1, abs=0.01) and iinf.value == pytest.approx(1, abs=0.01)


@pytest.mark.parametrize("name,i0,iinf", [
    ("Power(1.5)", 1.5, 1.5), ("Power(3)", 3.0, 3.0), ("PowerLog(4,1)", 4.0, 4.0),
    ("Sum(Power(2),Power(4))", 2.0, 4.0), ("Max(Power(1.5),Power(3))", 1.5, 3.0),
    ("Tabulated", 1.0, 1.0), ("LinearCap(1)", math.inf, math.inf),
])
def test_indices_catalogue(name, i0, iinf):
    a, b = young.indices(CATALOGUE[name])
    assert a.determinate and b.determinate
    assert a.value == pytest.approx(i0, abs=0.02) and b.value == pytest.approx(iinf, abs=0.02)


def test_inverse_at_far_ends_of_double_range():
    T = Tabulated((0.0, 1.0, 2.0), (0.0, 1.0, 3.0))
    y = np.array([1e-303, 1e-250, 1e250, 1e300])
    np.testing.assert_allclose(young.inverse(T, y), [1e-303, 1e-250, 5e249, 5e299], rtol=1e-12)


def test_dominates_reflexive():
    d = young.dominates(Power(2), Power(2))
    assert d.holds and d.c == 1.0


def test_dominates_near_infinity():
    assert young.dominates(Power(3), Power(2), "near_infinity", 1.0).holds


def test_domination_fails_with_counterexample():
    d = young.dominates(Power(2), Power(3), "near_infinity", 1.0, c_max=1e3)
    assert not d.holds
    assert d.counterexample > 1.0
    # the counterexample really defeats c_max
    assert Power(3)(d.counterexample) > Power(2)(1e3 * d.counterexample)


def test_domination_needs_threshold():
    with pytest.raises(DomainError):
        young.dominates(Power(2), Power(3), "near_zero")


# properties -----------------------------------------------------------------

young_functions = st.one_of(
    st.floats(1.05, 6.0).map(Power),
    st.tuples(st.floats(1.5, 5.0), st.floats(-0.5, 2.0)).map(lambda a: PowerLog(*a)),
    st.tuples(st.floats(1.1, 3.0), st.floats(0.2, 5.0)).map(lambda a: Scaled(Power(a[0]), a[1])),
    st.tuples(st.floats(1.1, 3.0), st.floats(3.0, 5.0)).map(lambda a: Sum((Power(a[0]), Power(a[1])))),
    st.tuples(st.floats(1.1, 3.0), st.floats(3.0, 5.0)).map(lambda a: Max((Power(a[0]), Power(a[1])))),
)


@settings(max_examples=40, deadline=None)
@given(young_functions, st.sampled_from([2.0, 10.0]), st.floats(-4, 4))
def test_superlinear_scaling(A, lam, logt):
    t = 10.0 ** logt
    a, b = A(t), A(lam * t)
    if math.isfinite(b):
        assert lam * a <= b * (1 + 1e-9)


@settings(max_examples=40, deadline=None)
@given(young_functions, st.sampled_from([0.1, 0.5, 2.0, 10.0]), st.floats(-5, 5))
def test_inverse_scaling_bounds(A, lam, logt):
    t = 10.0 ** logt
    base = young.inverse(A, t)
    scaled = young.inverse(A, lam * t)
    assert min(1, lam) * base <= scaled * (1 + 1e-9)
    assert scaled <= max(1, lam) * base * (1 + 1e-9)


@settings(max_examples=25, deadline=None)
@given(young_functions)
def test_duality_band_property(A):
    C = young.conjugate(A)
    t = np.logspace(-4, 4, 17)
    tol = 1e-4 if isinstance(C, Tabulated) else 1e-9
    prod = np.asarray(young.inverse(A, t)) * np.asarray(young.inverse(C, t))
    assert np.all(prod >= t * (1 - tol)) and np.all(prod <= 2 * t * (1 + tol))


@settings(max_examples=30, deadline=None)
@given(st.lists(st.floats(0.01, 3.0), min_size=2, max_size=8))
def test_tabulated_from_increments_is_valid_and_conjugates_exactly(incs):
    # increasing slopes give a convex table; its conjugate table has the same knot count
    slopes = np.cumsum(incs)
    knots = np.arange(slopes.size + 1, dtype=float)
    values = np.concatenate([[0.0], np.cumsum(slopes)])
    T = Tabulated(tuple(knots), tuple(values))
    young.validate(T)
    C = young.conjugate(T)
    assert isinstance(C, Tabulated)
    for t in (0.5 * slopes[0], slopes[-1] * 0.99):
        assert C(t) == pytest.approx(oracles.legendre_sup(T, t, tau_max=knots[-1]), rel=1e-6, abs=1e-9)


@settings(max_examples=30, deadline=None)
@given(young_functions, st.floats(-3, 3))
def test_ratio_over_t_non_decreasing(A, logt):
    t = 10.0 ** logt
    a1, a2 = A(t), A(1.5 * t)
    if math.isfinite(a2):
        assert a1 / t <= a2 / (1.5 * t) * (1 + 1e-9)
