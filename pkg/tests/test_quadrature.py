import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.special import expi

from rwc.bath import OhmicBath
from rwc.coefficients import coefficient_kernels
from rwc.quadrature import (
    PanelPlan, QuadratureError, integrate, integrate_oscillatory, integrate_semi_infinite,
    make_panel_plan, principal_value, sinc,
)

from oracles import excision_pv

# P.V. int_0^inf e^{-v}/(v - 1) dv, produced by the excision oracle and
# equal to -e^{-1} Ei(1)
PV_EXP_GOLDEN = -0.6971748832350662


def test_exponential_and_ohmic_integrals():
    plan = make_panel_plan(0.0)
    assert plan.breakpoints == (0.0, 1.0, 5.0, 25.0)
    r = integrate_semi_infinite(lambda w: np.exp(-w), plan, 1e-12, 1e-12)
    assert abs(r.value - 1) < 1e-12
    assert r.evaluations > 0 and r.error_estimate >= 0
    ohmic = integrate_semi_infinite(lambda w: 0.05 * w * np.exp(-w / 5), plan, 1e-12, 1e-12)
    assert abs(ohmic.value - 1.25) < 1e-8


def test_sinc_integral_tends_to_half_pi():
    r = integrate_oscillatory(lambda x: sinc(x), math.pi, 1e4)
    assert abs(r.value - math.pi / 2) < 1e-6


def test_sinc_series_branch():
    x = np.array([0.0, 1e-6, -3e-5, 1e-4, 0.3])
    expected = np.array([1.0] + [math.sin(v) / v for v in x[1:]])
    assert np.allclose(sinc(x), expected, rtol=1e-15, atol=0)


@pytest.mark.parametrize("f, pole, domain", [
    (lambda x: np.ones_like(x), 0.0, (-1.0, 1.0)),
    (lambda x: np.ones_like(x), 1.0, (0.0, 2.0)),
])
def test_principal_value_symmetric_cases(f, pole, domain):
    assert abs(principal_value(f, pole, domain, 1e-13, 1e-12).value) < 1e-10


def test_excision_oracle_reproduces_closed_form():
    oracle = excision_pv(lambda x: np.exp(-x), 1.0, 60.0)
    assert abs(oracle - (-math.exp(-1) * expi(1.0))) < 1e-7
    assert abs(oracle - PV_EXP_GOLDEN) < 1e-7


def test_principal_value_against_excision_golden():
    # the tail beyond 60 is below 1e-26
    r = principal_value(lambda v: np.exp(-v), 1.0, (0.0, 60.0), 1e-13, 1e-12)
    assert abs(r.value - PV_EXP_GOLDEN) < 1e-7


@settings(max_examples=30, deadline=None)
@given(st.floats(-0.8, 0.8), st.floats(0.1, 3))
def test_principal_value_without_residue_matches_plain_integral(c, k):
    g = lambda x: np.cos(k * x) + x ** 2
    pv = principal_value(lambda x: (x - c) * g(x), c, (-1.0, 1.0), 1e-13, 1e-12).value
    plain = integrate(g, -1.0, 1.0, 1e-13, 1e-12).value
    assert abs(pv - plain) < 1e-10


def test_principal_value_rejects_pole_on_boundary():
    with pytest.raises(ValueError):
        principal_value(np.exp, 1.0, (1.0, 2.0))


def test_panel_plan_resolves_peak():
    plan = make_panel_plan(100.0)
    bp = np.asarray(plan.breakpoints)
    assert np.sum(np.abs(bp - 1.0) <= 1.0) >= 10
    assert bp[0] == 0.0


@settings(max_examples=60, deadline=None)
@given(st.floats(0, 500))
def test_panel_plan_is_strictly_increasing(t):
    bp = np.asarray(make_panel_plan(t).breakpoints)
    assert bp[0] == 0 and np.all(np.diff(bp) > 0)


def test_panel_plan_validation():
    with pytest.raises(ValueError):
        PanelPlan((0.0, 2.0, 1.0), 1.0)
    with pytest.raises(ValueError):
        PanelPlan((0.5, 1.0), 1.0)
    with pytest.raises(ValueError):
        make_panel_plan(-1.0)


@settings(max_examples=20, deadline=None)
@given(st.floats(-3, 3), st.floats(-3, 3), st.floats(0.1, 50))
def test_semi_infinite_integration_is_linear(a, b, t):
    bath = OhmicBath(0.05, 5.0, 0.5)
    plan = make_panel_plan(t)
    f = lambda w: coefficient_kernels(bath, t, w)[1]
    g = lambda w: coefficient_kernels(bath, t, w)[3]
    rf = integrate_semi_infinite(f, plan, 1e-12, 1e-10)
    rg = integrate_semi_infinite(g, plan, 1e-12, 1e-10)
    rc = integrate_semi_infinite(lambda w: a * f(w) + b * g(w), plan, 1e-12, 1e-10)
    tol = abs(a) * rf.error_estimate + abs(b) * rg.error_estimate + rc.error_estimate + 1e-11
    assert abs(rc.value - (a * rf.value + b * rg.value)) <= tol


@pytest.mark.parametrize("t", [0.3, 4.0, 40.0])
def test_refining_panels_stays_within_error_estimate(t):
    bath = OhmicBath(0.05, 5.0, 1.0)
    plan = make_panel_plan(t)
    bp = np.asarray(plan.breakpoints)
    halves = np.sort(np.concatenate([bp, 0.5 * (bp[1:] + bp[:-1])]))
    fine = PanelPlan(tuple(halves), plan.tail_scale)
    f = lambda w: coefficient_kernels(bath, t, w)
    coarse_r = integrate_semi_infinite(f, plan, 1e-10, 1e-8)
    fine_r = integrate_semi_infinite(f, fine, 1e-10, 1e-8)
    assert np.all(np.abs(coarse_r.value - fine_r.value)
                  <= coarse_r.error_estimate + fine_r.error_estimate + 1e-15)


def test_non_convergence_raises_with_best_estimate():
    c = math.pi / 10
    with pytest.raises(QuadratureError) as info:
        integrate(lambda x: np.sin(1 / (x - c)), 0.0, 1.0, 1e-14, 1e-14)
    err = info.value
    assert err.result is not None and np.isfinite(err.result.value)
    assert err.interval is not None and abs(0.5 * sum(err.interval) - c) < 0.05
