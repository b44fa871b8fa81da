import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rwc.bath import OhmicBath
from rwc.coefficients import (
    CoefficientError, ShiftTable, Tolerances, coefficient_derivatives, sb_coefficients,
    shift_function, xi_from_shift_table,
)

from oracles import shift_function_t0, time_domain_coefficients

# Frozen output of oracles.time_domain_coefficients (alpha=0.05, omega_c=5):
# (T, t): ((Gamma_pp, Gamma_mm, Gamma_pm, Xi), (their time derivatives))
GOLDEN = {
    (0.0, 0.5): ((0.07961072729397649, 0.11905860923068438,
                  0.0838385805046432 - 0.04580122527465565j, 0.0014590877276311337),
                 (0.0936142764639458, 0.2603574703391795,
                  0.08538342285225134 - 0.15550508040565403j, -0.006086040301816142)),
    (0.0, 3.0): ((0.07623144710696403, 0.721064971248294,
                  0.09596330599061885 + 0.013679237530941852j, -0.1080428931544759),
                 (-0.0058665763804487125, 0.2527967081480257,
                  0.15082354094567219 - 0.07641385963651917j, -0.057756376172359236)),
    (0.0, 20.0): ((0.07934637372692988, 5.098198339681248,
                   0.0658490013866978 - 0.14731481411852124j, -1.0315326496425015),
                  (-0.00021235641452596599, 0.2569942230578907,
                   -0.16623869491536009 - 0.023513234354845314j, -0.054092384209275146)),
    (1.0, 0.5): ((0.1091831650634495, 0.1486310470001574,
                  0.10973823547059232 - 0.059950271268648755j, 0.0038456463431578228),
                 (0.20429860137516465, 0.3710417952503984,
                  0.16776965577548408 - 0.2341421986018484j, 0.0073328638303318955)),
    (1.0, 3.0): ((0.5155048999041745, 1.1603384240455048,
                  -0.06666835258853514 - 0.009503343193952763j, 0.029669010242769633),
                 (0.1509158180477734, 0.40957910257624786,
                  0.2612407739241051 + 0.10526199054141169j, 0.014037357317829305)),
    (1.0, 20.0): ((3.058014092228701, 8.076866058183022,
                   0.09951351134460236 - 0.22262774100281021j, 0.24556822482881246),
                  (0.14977985627526888, 0.40698643574768567,
                   -0.1668723359941432 - 0.2242473258594248j, 0.012610151585110058)),
}


def as_tuples(bath, t):
    c = sb_coefficients(bath, t)
    d = coefficient_derivatives(bath, t)
    return ((c.gamma_pp, c.gamma_mm, c.gamma_pm, c.xi),
            (d.d_gamma_pp, d.d_gamma_mm, d.d_gamma_pm, d.d_xi))


@pytest.mark.parametrize("key", sorted(GOLDEN))
def test_coefficients_match_time_domain_golden(key):
    temperature, t = key
    got = as_tuples(OhmicBath(0.05, 5.0, temperature), t)
    for g_row, e_row in zip(got, GOLDEN[key]):
        for g, e in zip(g_row, e_row):
            assert abs(g - e) <= 1e-8 * abs(e) + 1e-10


@pytest.mark.slow
@pytest.mark.parametrize("key", [(0.0, 3.0), (1.0, 20.0)])
def test_time_domain_oracle_reproduces_golden(key):
    temperature, t = key
    got = time_domain_coefficients(0.05, 5.0, temperature, t)
    for g_row, e_row in zip(got, GOLDEN[key]):
        assert np.allclose(g_row, e_row, rtol=1e-10, atol=1e-12)


def test_zero_time():
    c = sb_coefficients(OhmicBath(), 0.0)
    assert (c.gamma_pp, c.gamma_mm, c.gamma_pm, c.xi) == (0, 0, 0, 0)
    with pytest.raises(ValueError):
        sb_coefficients(OhmicBath(), -1.0)


def test_short_time_quadratic_growth():
    # Gamma/t^2 -> int J coth = 1.25 at T=0; d Gamma/dt / t -> 2.5
    bath = OhmicBath(0.05, 5.0, 0.0)
    t = 1e-3
    c, d = sb_coefficients(bath, t), coefficient_derivatives(bath, t)
    assert abs(c.gamma_mm / t ** 2 - 1.25) < 1e-3
    assert abs(c.gamma_pp / t ** 2 - 1.25) < 1e-3
    assert abs(abs(c.gamma_pm) / t ** 2 - 1.25) < 1e-3
    assert abs(d.d_gamma_mm / t - 2.5) < 2e-3


def test_long_time_linear_growth_tends_to_golden_rule():
    bath = OhmicBath(0.05, 5.0, 0.0)
    c = sb_coefficients(bath, 300.0)
    rate = 2 * math.pi * float(bath.spectral_density(1.0))
    assert abs(c.gamma_mm / 300.0 - rate) < 0.05 * rate
    assert c.gamma_pp < 0.2


@pytest.mark.parametrize("temperature", [0.0, 1.0])
@pytest.mark.parametrize("t", [0.7, 6.0, 25.0])
def test_derivatives_match_finite_differences(temperature, t):
    bath = OhmicBath(0.05, 5.0, temperature)
    h = 1e-4
    tol = dict(abs_tol=1e-13, rel_tol=1e-12)
    hi, lo = sb_coefficients(bath, t + h, **tol), sb_coefficients(bath, t - h, **tol)
    d = coefficient_derivatives(bath, t)
    pairs = [((hi.gamma_pp - lo.gamma_pp), d.d_gamma_pp),
             ((hi.gamma_mm - lo.gamma_mm), d.d_gamma_mm),
             ((hi.gamma_pm - lo.gamma_pm), d.d_gamma_pm),
             ((hi.xi - lo.xi), d.d_xi)]
    scale = max(abs(p[1]) for p in pairs)
    for diff, exact in pairs:
        assert abs(diff / (2 * h) - exact) <= 1e-6 * scale


@pytest.mark.parametrize("omega", [-7.0, -1.0, -0.2, 0.0, 0.3, 1.0, 4.0, 30.0])
def test_shift_function_against_closed_form(omega):
    got = shift_function(OhmicBath(0.05, 5.0, 0.0), omega)
    assert abs(got - shift_function_t0(0.05, 5.0, omega)) < 1e-9


def test_shift_function_odd_part_at_zero_temperature():
    # Lamb shift [S(1) - S(-1)]/2
    b = OhmicBath(0.05, 5.0, 0.0)
    assert abs(0.5 * (shift_function(b, 1.0) - shift_function(b, -1.0)) + 0.0541537353) < 1e-9


@pytest.mark.slow
@pytest.mark.parametrize("temperature", [0.0, 1.0])
def test_xi_from_shift_table_matches_direct_route(temperature):
    bath = OhmicBath(0.05, 5.0, temperature)
    table = ShiftTable(bath)
    assert table.converged and table.interpolation_error < 1e-7
    for t in (0.8, 5.0, 20.0):
        assert abs(xi_from_shift_table(table, t) - sb_coefficients(bath, t).xi) < 1e-6


@settings(max_examples=25, deadline=None)
@given(st.floats(0.01, 60), st.sampled_from([0.0, 0.3, 1.0, 5.0]))
def test_rate_matrix_is_positive_semidefinite(t, temperature):
    c = sb_coefficients(OhmicBath(0.05, 5.0, temperature), t)
    m = c.rate_matrix()
    assert np.allclose(m, m.conj().T)
    assert np.linalg.eigvalsh(m)[0] >= -1e-10 * max(1.0, c.gamma_mm)


def test_tolerance_validation_and_failure_reporting():
    with pytest.raises(ValueError):
        Tolerances(-1.0, 1e-8)
    with pytest.raises(CoefficientError, match="t=2.0"):
        sb_coefficients(OhmicBath(0.05, 5.0, 1.0), 2.0, abs_tol=1e-300, rel_tol=1e-300)
