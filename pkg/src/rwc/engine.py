"""Refined weak coupling dynamics of the spin-boson qubit.

Everything here lives in the interaction picture with respect to
``H_S = omega0 sigma_z / 2``. Superoperators act on column-stacked 2x2
density matrices (see :mod:`rwc.linalg`).

The exponent and the time-local generator share one template,

    X -> -i h [sigma_z, X] + g_pp D[sigma_plus] X + g_mm D[sigma_minus] X
         + g_pm sigma_minus X sigma_minus + conj(g_pm) sigma_plus X sigma_plus,

with ``h = Xi`` for the exponent ``Z(t)`` and ``h = Delta`` for ``L_Z(t)``.
"""

from dataclasses import dataclass
import math

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.integrate import solve_ivp

from .bath import OhmicBath
from .coefficients import (
    DEFAULT_TOL, OMEGA0, SBCoefficients, CoefficientDerivatives,
    coefficient_derivatives, sb_coefficients, shift_function,
)
from .linalg import (
    SIGMA_MINUS, SIGMA_PLUS, SIGMA_Z, commutator_superop, dissipator,
    left_right, matrix_exp, validate_state, vectorize, devectorize,
)

__all__ = [
    "LiouvillianCoefficients", "DaviesRates", "CoefficientMatrixError", "IntegrationFailure",
    "gksl_superoperator", "sb_exponent", "dynamical_map",
    "liouvillian_coefficients", "liouvillian", "liouvillian_via_integral",
    "davies_rates", "davies_generator", "propagators", "evolve", "to_lab_frame",
]

PSD_TOL = 1e-10
IMAG_TOL = 1e-9
ODE_TOL = 1e-9

_SERIES_TERMS = 24
_INV_FACT = np.array([1 / math.factorial(n) for n in range(2 * _SERIES_TERMS + 4)])

_COMMUTATOR = commutator_superop(SIGMA_Z)
_D_PLUS = dissipator(SIGMA_PLUS)
_D_MINUS = dissipator(SIGMA_MINUS)
_MINUS_MINUS = left_right(SIGMA_MINUS, SIGMA_MINUS)
_PLUS_PLUS = left_right(SIGMA_PLUS, SIGMA_PLUS)


class CoefficientMatrixError(ValueError):
    """The 2x2 dissipator coefficient matrix is not positive semidefinite."""


class IntegrationFailure(RuntimeError):
    """The ODE backend could not reach the requested time."""


@dataclass(frozen=True)
class LiouvillianCoefficients:
    t: float
    delta: float
    gamma_pp: float
    gamma_mm: float
    gamma_pm: complex

    def rate_matrix(self):
        return np.array([[self.gamma_pp, self.gamma_pm],
                         [np.conj(self.gamma_pm), self.gamma_mm]], dtype=complex)


@dataclass(frozen=True)
class DaviesRates:
    gamma_down: float
    gamma_up: float
    lamb_shift: float


def gksl_superoperator(h, gamma_pp, gamma_mm, gamma_pm):
    """Superoperator of the shared template (module docstring)."""
    return (-1j * h * _COMMUTATOR + gamma_pp * _D_PLUS + gamma_mm * _D_MINUS
            + gamma_pm * _MINUS_MINUS + np.conj(gamma_pm) * _PLUS_PLUS)


def sb_exponent(c: SBCoefficients, tol=PSD_TOL):
    """Refined weak coupling exponent ``Z(t)``; rejects a non-PSD coefficient matrix."""
    lo = np.linalg.eigvalsh(c.rate_matrix())[0]
    if lo < -tol * (1.0 + c.gamma_pp + c.gamma_mm):
        raise CoefficientMatrixError(
            f"coefficient matrix at t={c.t} has eigenvalue {lo:.3e} < 0")
    return gksl_superoperator(c.xi, c.gamma_pp, c.gamma_mm, c.gamma_pm)


def _coeffs(bath, t, tol):
    tol = DEFAULT_TOL if tol is None else tol
    return (sb_coefficients(bath, t, tol.abs_tol, tol.rel_tol),
            coefficient_derivatives(bath, t, tol.abs_tol, tol.rel_tol))


def dynamical_map(bath: OhmicBath, t, tol=None):
    """``exp(Z(t))`` as a 4x4 superoperator."""
    return matrix_exp(sb_exponent(_coeffs(bath, t, tol)[0]))


def _e2(s):
    """``(s - 1 + exp(-s))/s^2``."""
    if abs(s) < 0.5:
        total, term = 0.0, 0.5
        for n in range(24):
            total += term
            term *= -s / (n + 3)
        return total
    return (s - 1 + math.exp(-s)) / (s * s)


def _hyperbolic(z):
    """``A, B, C`` of the coherence block as functions of ``z = k^2``.

    ``A = sinh(2k)/(2k)``, ``B = (1 - A)/(2z)``, ``C = (cosh(2k) - 1)/(4z)``;
    all three are entire in ``z`` and summed as power series for small ``z``.
    """
    if abs(z) < 0.5:
        # with w = 4z: A = sum w^m/(2m+1)!, B = -2 sum w^m/(2m+3)!, C = sum w^m/(2m+2)!
        powers = (4 * complex(z)) ** np.arange(_SERIES_TERMS)
        return (powers @ _INV_FACT[1::2][:_SERIES_TERMS],
                -2 * powers @ _INV_FACT[3::2][:_SERIES_TERMS],
                powers @ _INV_FACT[2::2][:_SERIES_TERMS])
    k = np.sqrt(complex(z))
    a = np.sinh(2 * k) / (2 * k)
    return a, (1 - a) / (2 * z), (np.cosh(2 * k) - 1) / (4 * z)


def liouvillian_coefficients(c: SBCoefficients, d: CoefficientDerivatives):
    """Closed-form coefficients of ``L_Z(t) = int_0^1 e^{sZ} Zdot e^{-sZ} ds``.

    The algebra spanned by the exponent's five generators closes, so the
    integral reduces to elementary functions of the coefficients and their
    time derivatives. The population and coherence blocks decouple:

    * populations, with ``s = Gamma_pp + Gamma_mm``,
      ``gamma_pp = dGamma_pp + E2(s) (Gamma_pp dGamma_mm - dGamma_pp Gamma_mm)``
      and symmetrically for ``gamma_mm``, ``E2(s) = (s - 1 + e^{-s})/s^2``;
    * coherences, with ``theta = 2 Xi`` and ``z = |Gamma_pm|^2 - theta^2``,
      see :func:`_hyperbolic` for ``A, B, C``.

    The complex square root of ``z`` covers both the hyperbolic and the
    trigonometric regime with the same expressions.
    """
    a, b, g = c.gamma_pp, c.gamma_mm, complex(c.gamma_pm)
    da, db, dg = d.d_gamma_pp, d.d_gamma_mm, complex(d.d_gamma_pm)
    e2 = _e2(a + b)
    gpp = da + e2 * (a * db - da * b)
    gmm = db + e2 * (da * b - a * db)

    th, dth = 2 * c.xi, 2 * d.d_xi
    z = abs(g) ** 2 - th * th
    A, B, C = _hyperbolic(z)
    prod = np.conj(g) * dg
    common = 2 * B * (prod.real - th * dth)
    gpm = A * dg + common * g + 2j * C * (th * dg - dth * g)
    theta_l = A * dth + common * th - 2 * C * prod.imag
    residue = abs(complex(theta_l).imag)
    if residue > IMAG_TOL * (1 + abs(theta_l)) or abs(complex(A).imag) > IMAG_TOL:
        raise ArithmeticError(f"imaginary residue {residue:.2e} in Lamb shift at t={c.t}")
    return LiouvillianCoefficients(c.t, float(theta_l.real) / 2, float(gpp), float(gmm),
                                   complex(gpm))


def _liouvillian_from(lc):
    return gksl_superoperator(lc.delta, lc.gamma_pp, lc.gamma_mm, lc.gamma_pm)


def liouvillian(bath: OhmicBath, t, tol=None):
    """Time-local generator ``L_Z(t)`` of ``d rho/dt = L_Z(t) rho``."""
    if t == 0:
        return np.zeros((4, 4), dtype=complex)
    return _liouvillian_from(liouvillian_coefficients(*_coeffs(bath, t, tol)))


def liouvillian_via_integral(bath: OhmicBath, t, s_nodes=32, tol=None):
    """``int_0^1 e^{sZ} Zdot e^{-sZ} ds`` by Gauss-Legendre with ``s_nodes`` nodes.

    Reference route only: ``e^{-sZ}`` grows like ``e^{s (Gamma_pp + Gamma_mm)}``,
    so round-off is amplified once that sum exceeds roughly 10.
    """
    c, d = _coeffs(bath, t, tol)
    z = sb_exponent(c)
    zdot = gksl_superoperator(d.d_xi, d.d_gamma_pp, d.d_gamma_mm, d.d_gamma_pm)
    x, w = leggauss(int(s_nodes))
    s, w = 0.5 * (x + 1), 0.5 * w
    return sum(wi * matrix_exp(si * z) @ zdot @ matrix_exp(-si * z) for si, wi in zip(s, w))


def davies_rates(bath: OhmicBath):
    """Rates and Lamb shift of the Born-Markov-secular generator.

    ``gamma_down = 2 pi J(omega0)(n+1)``, ``gamma_up = 2 pi J(omega0) n`` and
    ``lamb_shift = [S(omega0) - S(-omega0)]/2`` with the principal-value
    shift function ``S``.
    """
    w0 = np.array(OMEGA0)
    down = 2 * math.pi * float(bath.thermal_weight_plus(w0))
    up = 2 * math.pi * float(bath.thermal_weight_minus(w0))
    lamb = 0.5 * (shift_function(bath, OMEGA0) - shift_function(bath, -OMEGA0))
    return DaviesRates(down, up, lamb)


def davies_generator(bath: OhmicBath):
    r = davies_rates(bath)
    return gksl_superoperator(r.lamb_shift, r.gamma_up, r.gamma_down, 0.0)


def _check_grid(grid):
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size == 0:
        raise ValueError("time grid must be a non-empty 1-d list")
    if grid[0] < 0 or np.any(np.diff(grid) <= 0) or not np.all(np.isfinite(grid)):
        raise ValueError("time grid must be finite, non-negative and strictly increasing")
    return grid


def propagators(bath: OhmicBath, grid, backend="map", tol=None):
    """Superoperators ``Lambda(t)`` for every ``t`` in ``grid``, shape ``(n, 4, 4)``.

    ``backend="map"`` exponentiates ``Z(t)`` at each time independently;
    ``backend="ode"`` integrates ``dLambda/dt = L_Z(t) Lambda`` from
    ``Lambda(0) = 1`` with an embedded 8(5,3) Runge-Kutta pair.
    """
    grid = _check_grid(grid)
    if backend == "map":
        return np.array([dynamical_map(bath, t, tol) for t in grid])
    if backend != "ode":
        raise ValueError(f"unknown backend {backend!r}")

    def rhs(t, y):
        return (liouvillian(bath, t, tol) @ y.reshape(4, 4)).ravel()

    out = np.empty((grid.size, 4, 4), dtype=complex)
    start = 0
    if grid[0] == 0:
        out[0] = np.eye(4)
        start = 1
    if start < grid.size:
        sol = solve_ivp(rhs, (0.0, grid[-1]), np.eye(4, dtype=complex).ravel(),
                        method="DOP853", t_eval=grid[start:], rtol=ODE_TOL, atol=ODE_TOL)
        if not sol.success:
            raise IntegrationFailure(f"ODE backend failed: {sol.message}")
        out[start:] = sol.y.T.reshape(-1, 4, 4)
    return out


def to_lab_frame(rho, t):
    """Undo the interaction picture: ``e^{-i H_S t} rho e^{i H_S t}``."""
    phase = np.exp(-0.5j * OMEGA0 * t * np.diag(SIGMA_Z).real)
    return phase[:, None] * rho * phase.conj()[None, :]


def evolve(bath: OhmicBath, rho0, grid, backend="map", frame="interaction", tol=None):
    """States ``rho(t)`` on ``grid``; each is checked against the state invariants."""
    rho0 = validate_state(rho0, 2)
    grid = _check_grid(grid)
    if frame not in ("interaction", "lab"):
        raise ValueError(f"unknown frame {frame!r}")
    maps = propagators(bath, grid, backend, tol)
    states = []
    for t, m in zip(grid, maps):
        rho = devectorize(m @ vectorize(rho0))
        if t == 0:
            rho = rho0.copy()
        if frame == "lab":
            rho = to_lab_frame(rho, t)
        states.append(validate_state(rho, 2))
    return states
