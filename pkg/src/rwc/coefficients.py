"""Refined weak coupling exponent coefficients of the spin-boson model.

With ``x = omega0 - w`` and ``y = omega0 + w`` the coefficients at time ``t``
are integrals over the bath frequency ``w > 0``:

    Gamma_mm = int J(n+1) t^2 sinc^2(x t/2) + J n t^2 sinc^2(y t/2)
    Gamma_pp = int J(n+1) t^2 sinc^2(y t/2) + J n t^2 sinc^2(x t/2)
    Gamma_pm = exp(-i omega0 t) int J(2n+1) t^2 sinc(y t/2) sinc(x t/2)
    Xi       = 1/2 int J(2n+1) [k(x) + k(y)],   k(u) = (u t - sin(u t))/u^2

``Gamma_pp`` multiplies the raising dissipator ``D[sigma_plus]`` and
``Gamma_mm`` the decay dissipator ``D[sigma_minus]``.

The shift ``Xi`` is usually written as a double integral: a sinc^2-weighted
integral over the principal-value shift function ``S(w)`` of the bath. Doing
the inner frequency integral first analytically (the Hilbert transform of
``t^2 sinc^2(u t/2)`` is ``2 pi k(u)``) leaves the single, non-singular
integral above; the double-integral route is kept as
:func:`xi_from_shift_table` for cross-checking.
"""

from dataclasses import dataclass
from functools import lru_cache
import math

import numpy as np
from scipy.integrate import quad
from scipy.interpolate import CubicSpline

from .quadrature import (
    PanelPlan, QuadratureError, integrate, integrate_semi_infinite,
    make_panel_plan, principal_value, sinc,
)

__all__ = [
    "OMEGA0", "Tolerances", "DEFAULT_TOL", "SBCoefficients", "CoefficientDerivatives", "CoefficientError",
    "sb_coefficients", "coefficient_derivatives", "coefficient_kernels",
    "shift_function", "ShiftTable", "xi_from_shift_table",
]

OMEGA0 = 1.0
ABS_TOL = 1e-10
REL_TOL = 1e-8

_NAMES = ("Gamma_pp", "Gamma_mm", "Gamma_pm (real amplitude)", "Xi",
          "dGamma_pp", "dGamma_mm", "dGamma_pm (real amplitude)", "dXi")


@dataclass(frozen=True)
class Tolerances:
    """Absolute and relative quadrature tolerances for the coefficients."""

    abs_tol: float = ABS_TOL
    rel_tol: float = REL_TOL

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise ValueError("tolerances must be positive")


DEFAULT_TOL = Tolerances()


class CoefficientError(RuntimeError):
    """A coefficient quadrature failed; the message names the coefficient."""


@dataclass(frozen=True)
class SBCoefficients:
    t: float
    gamma_pp: float
    gamma_mm: float
    gamma_pm: complex
    xi: float

    def rate_matrix(self):
        """``[[Gamma_pp, Gamma_pm], [Gamma_pm*, Gamma_mm]]``."""
        return np.array([[self.gamma_pp, self.gamma_pm],
                         [np.conj(self.gamma_pm), self.gamma_mm]], dtype=complex)


@dataclass(frozen=True)
class CoefficientDerivatives:
    t: float
    d_gamma_pp: float
    d_gamma_mm: float
    d_gamma_pm: complex
    d_xi: float


def _phi(u):
    """``(u - sin u)/u^2``."""
    small = np.abs(u) < 0.1
    us = np.where(small, 1.0, u)
    u2 = u * u
    series = u * (1 / 6 - u2 * (1 / 120 - u2 * (1 / 5040 - u2 * (1 / 362880 - u2 / 39916800))))
    return np.where(small, series, (us - np.sin(us)) / (us * us))


def _psi(u):
    """``(1 - cos u)/u``."""
    return 0.5 * u * sinc(0.5 * u) ** 2


def coefficient_kernels(bath, t, w):
    """Integrands of the eight real quadratures at frequencies ``w``.

    Rows: Gamma_pp, Gamma_mm, R, Xi and their time derivatives, where
    ``Gamma_pm = exp(-i omega0 t) R``.
    """
    w = np.asarray(w, dtype=float)
    wp = bath.thermal_weight_plus(w)
    wm = bath.thermal_weight_minus(w)
    w2 = wp + wm
    x = OMEGA0 - w
    y = OMEGA0 + w
    sx = sinc(0.5 * x * t)
    sy = sinc(0.5 * y * t)
    t2 = t * t
    sx2 = t2 * sx * sx
    sy2 = t2 * sy * sy
    dsx = 2 * t * sinc(x * t)
    dsy = 2 * t * sinc(y * t)
    out = np.empty((8, w.size))
    out[0] = wp * sy2 + wm * sx2
    out[1] = wp * sx2 + wm * sy2
    out[2] = w2 * t2 * sx * sy
    out[3] = 0.5 * w2 * t2 * (_phi(x * t) + _phi(y * t))
    out[4] = wp * dsy + wm * dsx
    out[5] = wp * dsx + wm * dsy
    # d/dt [t^2 sinc(pt) sinc(qt)] = t [cos(pt) sinc(qt) + sinc(pt) cos(qt)]
    out[6] = w2 * t * (np.cos(0.5 * y * t) * sx + sy * np.cos(0.5 * x * t))
    out[7] = 0.5 * w2 * t * (_psi(x * t) + _psi(y * t))
    return out


@lru_cache(maxsize=8192)
def _bundle(bath, t, abs_tol, rel_tol):
    if t == 0:
        return SBCoefficients(0.0, 0.0, 0.0, 0j, 0.0), CoefficientDerivatives(0.0, 0.0, 0.0, 0j, 0.0)
    plan = make_panel_plan(t, OMEGA0, bath.omega_c)
    # coefficients vanish like t^2 and their derivatives like t at short times
    m = min(1.0, t)
    floors = abs_tol * np.array([m * m] * 4 + [m] * 4)
    try:
        res = integrate_semi_infinite(lambda w: coefficient_kernels(bath, t, w), plan,
                                      floors, rel_tol)
    except QuadratureError as exc:
        names = ", ".join(_NAMES[i] for i in exc.components) or "unknown"
        raise CoefficientError(
            f"quadrature failed at t={t} for {names} (panel {exc.interval}): {exc}") from exc
    gpp, gmm, r, xi, dgpp, dgmm, dr, dxi = (float(v) for v in res.value)
    phase = complex(math.cos(OMEGA0 * t), -math.sin(OMEGA0 * t))
    coeffs = SBCoefficients(t, gpp, gmm, phase * r, xi)
    derivs = CoefficientDerivatives(t, dgpp, dgmm, phase * complex(dr, -OMEGA0 * r), dxi)
    return coeffs, derivs


def _check_time(t):
    t = float(t)
    if not (t >= 0 and math.isfinite(t)):
        raise ValueError(f"time must be finite and non-negative, got {t}")
    return t


def sb_coefficients(bath, t, abs_tol=ABS_TOL, rel_tol=REL_TOL):
    """Coefficients ``Gamma_pp, Gamma_mm, Gamma_pm, Xi`` at time ``t``."""
    return _bundle(bath, _check_time(t), abs_tol, rel_tol)[0]


def coefficient_derivatives(bath, t, abs_tol=ABS_TOL, rel_tol=REL_TOL):
    """Analytic time derivatives of :func:`sb_coefficients`."""
    return _bundle(bath, _check_time(t), abs_tol, rel_tol)[1]


def _tail_plan(shift, bath):
    """Plan for ``x >= 0`` when the physical variable is ``shift +- x``."""
    pts = [0.0] + list(bath.omega_c * np.arange(1, 41))
    if shift > 0:
        pts.append(shift)
    return PanelPlan(tuple(np.unique(pts)), bath.omega_c)


def shift_function(bath, omega, abs_tol=1e-12, rel_tol=1e-10):
    """Principal-value shift ``S(w) = P.V. int G(v)/(w - v) dv`` over the real line.

    ``G`` is :meth:`OhmicBath.spectral_function`; equivalently
    ``P.V. int_0^inf J(v) [(n+1)/(w - v) + n/(w + v)] dv``.
    """
    omega = float(omega)
    g = bath.spectral_function
    h = max(0.5, 0.25 * abs(omega))
    centre = -principal_value(g, omega, (omega - h, omega + h), abs_tol, rel_tol,
                              points=(0.0,)).value
    right_start = omega + h
    right = integrate_semi_infinite(lambda x: -g(right_start + x) / (h + x),
                                    _tail_plan(-right_start, bath), abs_tol, rel_tol).value
    left_start = omega - h
    left = integrate_semi_infinite(lambda x: g(left_start - x) / (h + x),
                                   _tail_plan(left_start, bath), abs_tol, rel_tol).value
    return centre + right + left


class ShiftTable:
    """Tabulated ``S(w)`` on ``[-W, W]``, ``W = max(10 omega_c, omega0 + 50)``.

    ``S`` has a logarithmic kink at ``w = 0``, so each half-line gets its own
    not-a-knot cubic spline on geometric nodes near zero plus a uniform grid.
    The uniform grid is doubled until the splines match direct evaluations at
    every interval midpoint to ``target``. Beyond ``W`` the odd part
    ``S(w) - S(-w)`` is represented by a spline of ``w (S(w) - S(-w))`` in
    ``1/w``.
    """

    def __init__(self, bath, target=1e-7, n_start=256, max_rounds=6):
        self.bath = bath
        self.span = W = max(10 * bath.omega_c, OMEGA0 + 50.0)
        near = np.geomspace(1e-9, 1.0, 80)
        n = n_start
        for _ in range(max_rounds):
            nodes = np.unique(np.concatenate([[0.0], near, np.linspace(0, W, n + 1)]))
            sides = []
            error = 0.0
            for sign in (1.0, -1.0):
                x = sign * nodes if sign > 0 else -nodes[::-1]
                y = np.array([shift_function(bath, w) for w in x])
                spline = CubicSpline(x, y)
                mids = 0.5 * (x[1:] + x[:-1])
                exact = np.array([shift_function(bath, w) for w in mids])
                error = max(error, float(np.max(np.abs(spline(mids) - exact))))
                sides.append(spline)
            if error <= target:
                break
            n *= 2
        self.converged = error <= target
        self.interpolation_error = error
        self.nodes = nodes
        self._pos, self._neg = sides

        # odd-part tail in the variable z = 1/w on [0, 1/W]
        m0 = 2 * integrate_semi_infinite(bath.symmetric_weight, make_panel_plan(0, OMEGA0, bath.omega_c),
                                         1e-13, 1e-12).value
        z = np.linspace(0, 1 / W, 25)[1:]
        wd = [w * (shift_function(bath, w) - shift_function(bath, -w)) for w in 1 / z]
        self._odd_tail = CubicSpline(np.concatenate([[0.0], z]), np.concatenate([[m0], wd]))

    def __call__(self, omega):
        omega = np.asarray(omega, dtype=float)
        if np.any(np.abs(omega) > self.span):
            raise ValueError("outside the tabulated range; use odd_part for the tail")
        return np.where(omega >= 0, self._pos(np.abs(omega)), self._neg(-np.abs(omega)))

    def odd_part(self, omega):
        """``S(w) - S(-w)`` for any ``w >= 0``."""
        omega = np.asarray(omega, dtype=float)
        inside = omega <= self.span
        wi = np.where(inside, omega, 0.0)
        wo = np.where(inside, 2 * self.span, omega)
        return np.where(inside, self._pos(wi) - self._neg(-wi),
                        self._odd_tail(1 / wo) / wo)


def xi_from_shift_table(table, t):
    """``Xi(t)`` from the double-integral form, using a :class:`ShiftTable`.

    ``Xi = 1/(4 pi) int_R t^2 [sinc^2((omega0-w)t/2) - sinc^2((omega0+w)t/2)] S(w) dw``;
    the kernel is odd in ``w`` so only ``S(w) - S(-w)`` on ``w > 0`` enters.
    """
    t = _check_time(t)
    if t == 0:
        return 0.0
    W = table.span

    def inner(w):
        k = t * t * (sinc(0.5 * (OMEGA0 - w) * t) ** 2 - sinc(0.5 * (OMEGA0 + w) * t) ** 2)
        return k * table.odd_part(w)

    plan = make_panel_plan(t, OMEGA0, table.bath.omega_c)
    pts = [p for p in plan.breakpoints if 0 < p < W]
    body = integrate(inner, 0.0, W, 1e-12, 1e-10, points=pts).value

    # tail: t^2 sinc^2(u t/2) = 2 (1 - cos(u t))/u^2
    d = table.odd_part
    smooth = quad(lambda w: 2 * d(w) * (1 / (w - OMEGA0) ** 2 - 1 / (w + OMEGA0) ** 2),
                  W, np.inf, epsabs=1e-13, limit=200)[0]
    osc_minus = quad(lambda u: 2 * d(u + OMEGA0) / u ** 2, W - OMEGA0, np.inf,
                     weight="cos", wvar=t, epsabs=1e-13, limlst=200)[0]
    osc_plus = quad(lambda u: 2 * d(u - OMEGA0) / u ** 2, W + OMEGA0, np.inf,
                    weight="cos", wvar=t, epsabs=1e-13, limlst=200)[0]
    return (body + smooth - osc_minus + osc_plus) / (4 * math.pi)
