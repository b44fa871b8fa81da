import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.linalg import expm

from rwc.bath import OhmicBath
from rwc.engine import LiouvillianCoefficients, davies_generator, gksl_superoperator
from rwc.linalg import IDENTITY, InvalidStateError, SIGMA_X, SIGMA_Y, SIGMA_Z, left_right, pure_state
from rwc.nonmarkov import (
    CanonicalRates, ancilla_state, canonical_rates, g_from_choi, g_function,
    generator_coefficients, l1_coherence, log_negativity, sigma_y_pair, trace_distance,
    witness_series,
)


def coeffs(gpp, gmm, gpm=0j, delta=0.0):
    return LiouvillianCoefficients(1.0, delta, gpp, gmm, gpm)


@pytest.mark.parametrize("lc, expected", [
    (coeffs(0.3, 0.1), (0.3, 0.1)),
    (coeffs(0.2, 0.2, 0.2), (0.4, 0.0)),
    (coeffs(0.0, 0.0, 0.5j), (0.5, -0.5)),
    (coeffs(-0.1, 0.4), (0.4, -0.1)),
])
def test_canonical_rates_cases(lc, expected):
    r = canonical_rates(lc)
    assert np.allclose([r.lambda_plus, r.lambda_minus], expected, atol=1e-15)


@settings(max_examples=60, deadline=None)
@given(st.floats(-2, 2), st.floats(-2, 2), st.floats(-2, 2), st.floats(-2, 2))
def test_canonical_rates_match_eigensolver(gpp, gmm, re, im):
    lc = coeffs(gpp, gmm, complex(re, im))
    r = canonical_rates(lc)
    eig = np.linalg.eigvalsh(lc.rate_matrix())
    assert np.allclose([r.lambda_minus, r.lambda_plus], eig, atol=1e-12)


@pytest.mark.parametrize("rates, g", [
    ((0.3, 0.1), 0.0),
    ((0.3, -0.1), 0.1),
    ((-0.2, -0.5), 0.7),
    ((0.0, 0.0), 0.0),
])
def test_g_function_examples(rates, g):
    assert math.isclose(g_function(CanonicalRates(*rates)), g, abs_tol=1e-15)


@settings(max_examples=40, deadline=None)
@given(st.floats(-1, 1), st.floats(-1, 1), st.floats(-1, 1), st.floats(-1, 1), st.floats(-1, 1))
def test_g_matches_choi_norm_growth(gpp, gmm, re, im, delta):
    lc = coeffs(gpp, gmm, complex(re, im), delta)
    generator = gksl_superoperator(delta, gpp, gmm, complex(re, im))
    expected = g_function(canonical_rates(lc))
    assert abs(g_from_choi(generator, eps=1e-7) - expected) < 1e-5


def test_trace_distance_and_sigma_y_pair():
    up, down = sigma_y_pair()
    assert math.isclose(trace_distance(up, down), 1.0, rel_tol=1e-14)
    # opposite eigenstates of sigma_y
    ys = sorted(np.trace(SIGMA_Y @ r).real for r in (up, down))
    assert np.allclose(ys, [-1, 1])
    ground = pure_state([1, 0])
    mixed = 0.5 * IDENTITY
    assert math.isclose(trace_distance(ground, mixed), 0.5)


def werner(p):
    phi = np.zeros(4, dtype=complex)
    phi[0] = phi[3] = 1 / math.sqrt(2)
    return p * np.outer(phi, phi.conj()) + (1 - p) * np.eye(4) / 4


@pytest.mark.parametrize("p, expected", [
    (1.0, 1.0), (1 / 3, 0.0), (0.2, 0.0), (0.6, math.log2(1.4)),
])
def test_log_negativity_of_werner_states(p, expected):
    assert abs(log_negativity(werner(p)) - expected) < 1e-12


def test_l1_coherence():
    assert math.isclose(l1_coherence(pure_state([1, 1])), 1.0)
    assert l1_coherence(np.diag([0.3, 0.7])) == 0
    assert math.isclose(l1_coherence(werner(1.0)), 1.0)


def test_ancilla_state_of_basic_channels():
    assert np.allclose(ancilla_state(np.eye(4)), werner(1.0))
    # fully depolarising channel gives the maximally mixed two-qubit state
    depol = 0.25 * sum(left_right(p, p) for p in (IDENTITY, SIGMA_X, SIGMA_Y, SIGMA_Z))
    assert np.allclose(ancilla_state(depol), np.eye(4) / 4)
    assert log_negativity(ancilla_state(depol)) == 0
    # amplitude damping keeps entanglement for partial decay
    damp = expm(gksl_superoperator(0, 0, 1.0, 0))
    assert 0 < log_negativity(ancilla_state(damp)) < 1
    with pytest.raises(InvalidStateError):
        ancilla_state(-np.eye(4))


def test_generator_coefficients_vanish_at_zero():
    lc = generator_coefficients(OhmicBath(), 0.0)
    assert (lc.delta, lc.gamma_pp, lc.gamma_mm, lc.gamma_pm) == (0, 0, 0, 0)


@pytest.mark.parametrize("temperature", [0.0, 1.0])
def test_davies_generator_has_no_negative_rates(temperature):
    ld = davies_generator(OhmicBath(0.05, 5.0, temperature))
    assert abs(g_from_choi(ld)) < 1e-6


def test_witness_series_shapes_and_limits():
    bath = OhmicBath(0.05, 5.0, 1.0)
    grid = np.array([0.0, 0.5, 3.0, 10.0])
    w = witness_series(bath, grid)
    assert set(w.columns) >= {"g", "trace_distance_sy", "log_negativity", "Delta_davies"}
    assert w.population[0] == 1 and math.isclose(w.coherence[0], 0.5)
    assert math.isclose(w.trace_distance_sy[0], 1) and math.isclose(w.log_negativity[0], 1)
    assert np.all(w.g_davies == 0)
    assert np.all(np.diff(w.population_davies) < 0)
    assert w.as_table(["g", "Delta"]).shape == (4, 3)
    with pytest.raises(AttributeError):
        w.missing_column
    with pytest.raises(ValueError):
        witness_series(bath, [1.0, 0.5])
