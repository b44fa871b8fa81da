"""Non-Markovianity witnesses for the refined weak coupling qubit.

The time-local generator has the GKSL template of :mod:`rwc.engine`, so its
canonical decay rates are the eigenvalues of the 2x2 matrix
``[[gamma_pp, gamma_pm], [conj(gamma_pm), gamma_mm]]``. Negative canonical
rates signal a breakdown of CP-divisibility, quantified by

    g(t) = (|lambda_+| - lambda_+ + |lambda_-| - lambda_-) / 2,

which equals the growth rate of ``||(1 + eps L (x) 1)|Phi><Phi|||_1`` as
``eps -> 0``.
"""

from dataclasses import dataclass, field
import math

import numpy as np
from scipy.linalg import expm

from .bath import OhmicBath
from .coefficients import DEFAULT_TOL, coefficient_derivatives, sb_coefficients
from .engine import (
    LiouvillianCoefficients, davies_generator, davies_rates, liouvillian_coefficients,
    sb_exponent,
)
from .linalg import (
    InvalidStateError, apply_superop, choi_matrix, is_psd,
    matrix_exp, partial_transpose, pure_state, trace_norm, validate_state,
)

__all__ = [
    "CanonicalRates", "WitnessSeries", "canonical_rates", "g_function", "g_from_choi",
    "trace_distance", "ancilla_state", "log_negativity", "l1_coherence",
    "sigma_y_pair", "generator_coefficients", "witness_series",
]

EXCITED = pure_state([0, 1])
PLUS = pure_state([1, 1])


@dataclass(frozen=True)
class CanonicalRates:
    lambda_plus: float
    lambda_minus: float


def canonical_rates(lc: LiouvillianCoefficients):
    """Eigenvalues of the dissipator coefficient matrix in closed form."""
    mean = 0.5 * (lc.gamma_pp + lc.gamma_mm)
    half_gap = 0.5 * math.sqrt((lc.gamma_pp - lc.gamma_mm) ** 2 + 4 * abs(lc.gamma_pm) ** 2)
    return CanonicalRates(mean + half_gap, mean - half_gap)


def g_function(rates: CanonicalRates):
    lp, lm = rates.lambda_plus, rates.lambda_minus
    return 0.5 * (abs(lp) - lp + abs(lm) - lm)


def g_from_choi(generator, eps=1e-6):
    """``(||(1 + eps L (x) 1)|Phi><Phi|||_1 - 1)/eps`` for a 4x4 generator."""
    step = np.eye(4) + eps * np.asarray(generator, dtype=complex)
    return (trace_norm(choi_matrix(step)) - 1.0) / eps


def trace_distance(rho, sigma):
    rho = validate_state(rho)
    sigma = validate_state(sigma, rho.shape[0])
    return 0.5 * trace_norm(rho - sigma)


def ancilla_state(channel, tol=1e-8):
    """``(channel (x) id)|Phi><Phi|`` with ``|Phi> = (|00> + |11>)/sqrt 2``."""
    state = choi_matrix(channel)
    if not is_psd(state, -tol):
        raise InvalidStateError("map is not completely positive")
    if abs(np.trace(state) - 1) > 1e-9:
        raise InvalidStateError("map is not trace preserving")
    return state


def log_negativity(rho):
    """``log2 ||rho^{T_A}||_1`` with the partial transpose on the ancilla."""
    rho = validate_state(rho, 4)
    return max(0.0, math.log2(trace_norm(partial_transpose(rho, "ancilla"))))


def l1_coherence(rho):
    """Sum of off-diagonal moduli in the computational (H_S eigen-) basis."""
    rho = validate_state(rho)
    a = np.abs(rho)
    return float(a.sum() - np.trace(a))


def sigma_y_pair():
    """The two eigenstates of sigma_y."""
    return pure_state([1, 1j]), pure_state([1, -1j])


_COLUMNS = (
    "lambda_plus", "lambda_minus", "g", "trace_distance_sy", "log_negativity",
    "l1_coherence", "l1_coherence_qubit", "population", "coherence", "Delta",
    "population_davies", "coherence_davies", "Delta_davies", "g_davies",
)


@dataclass
class WitnessSeries:
    """Per-time witnesses on ``grid``; each column is a numpy array.

    ``population`` is the excited population starting from ``|1><1|``;
    ``coherence`` is ``|rho_01|`` starting from ``|+><+|``. Columns with the
    ``_davies`` suffix use the static Born-Markov-secular semigroup instead.
    """

    grid: np.ndarray
    columns: dict = field(default_factory=dict)

    def __getattr__(self, name):
        columns = self.__dict__.get("columns", {})
        if name in columns:
            return columns[name]
        raise AttributeError(name)

    def as_table(self, names):
        return np.column_stack([self.grid] + [self.columns[n] for n in names])


def _state(channel, rho):
    return validate_state(apply_superop(channel, rho))


def generator_coefficients(bath, t, tol=DEFAULT_TOL):
    """Coefficients of ``L_Z(t)``; all zero at ``t = 0`` where ``Zdot`` vanishes."""
    if t == 0:
        return LiouvillianCoefficients(0.0, 0.0, 0.0, 0.0, 0j)
    return liouvillian_coefficients(sb_coefficients(bath, t, tol.abs_tol, tol.rel_tol),
                                    coefficient_derivatives(bath, t, tol.abs_tol, tol.rel_tol))


def witness_series(bath: OhmicBath, grid, rho_population=EXCITED, rho_coherence=PLUS,
                   tol=DEFAULT_TOL):
    """Evaluate every witness at every time of ``grid``."""
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size == 0 or np.any(np.diff(grid) <= 0) or grid[0] < 0:
        raise ValueError("grid must be non-empty, non-negative and strictly increasing")
    validate_state(rho_population, 2)
    validate_state(rho_coherence, 2)
    y_up, y_down = sigma_y_pair()
    davies = davies_generator(bath)
    d_rates = davies_rates(bath)
    g_davies = g_function(canonical_rates(
        LiouvillianCoefficients(0.0, d_rates.lamb_shift, d_rates.gamma_up, d_rates.gamma_down, 0j)))
    rows = {name: np.empty(grid.size) for name in _COLUMNS}
    for i, t in enumerate(grid):
        channel = matrix_exp(sb_exponent(sb_coefficients(bath, t, tol.abs_tol, tol.rel_tol)))
        lc = generator_coefficients(bath, t, tol)
        rates = canonical_rates(lc)
        extended = ancilla_state(channel)
        rho_p = _state(channel, rho_population)
        rho_c = _state(channel, rho_coherence)
        semigroup = expm(t * davies)
        rho_pd = _state(semigroup, rho_population)
        rho_cd = _state(semigroup, rho_coherence)
        values = {
            "lambda_plus": rates.lambda_plus,
            "lambda_minus": rates.lambda_minus,
            "g": g_function(rates),
            "trace_distance_sy": trace_distance(_state(channel, y_up), _state(channel, y_down)),
            "log_negativity": log_negativity(extended),
            "l1_coherence": l1_coherence(extended),
            "l1_coherence_qubit": l1_coherence(rho_c),
            "population": rho_p[1, 1].real,
            "coherence": abs(rho_c[0, 1]),
            "Delta": lc.delta,
            "population_davies": rho_pd[1, 1].real,
            "coherence_davies": abs(rho_cd[0, 1]),
            "Delta_davies": d_rates.lamb_shift,
            "g_davies": g_davies,
        }
        for name, value in values.items():
            rows[name][i] = value
    return WitnessSeries(grid, rows)
