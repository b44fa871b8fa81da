"""Adaptive quadrature for the sinc-type kernels of the coefficient integrals.

The workhorse is a vectorised, globally adaptive Gauss-Kronrod (G10/K21)
integrator. Integrands take a 1-D array of nodes and return either an array
of the same length or an ``(m, n)`` array of ``m`` components sharing the
nodes; all components are refined together until every one meets
``max(abs_tol, rel_tol*|value|)``.

Semi-infinite integrals are split at the last breakpoint ``B`` of a
:class:`PanelPlan`; the tail is mapped onto a finite interval with
``u = exp(-w/s)`` (``s`` the plan's ``tail_scale``), so that
``int_B^inf f(w) dw = int_0^exp(-B/s) f(-s ln u) s/u du``.
"""

from dataclasses import dataclass
import math

import numpy as np

__all__ = [
    "IntegrationResult", "PanelPlan", "QuadratureError",
    "sinc", "integrate", "integrate_semi_infinite", "principal_value",
    "make_panel_plan", "integrate_oscillatory",
]

# QUADPACK qk21 abscissae (positive half) and weights
_XGK = np.array([
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0,
])
_WGK = np.array([
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077482822722486, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
])
_WG = np.array([
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
])

_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])           # 21 ascending nodes
_KRONROD_W = np.concatenate([_WGK[:-1], _WGK[::-1]])
_GAUSS_W = np.zeros(21)
_GAUSS_W[1:10:2] = _WG                                        # -0.9739, ..., -0.1489
_GAUSS_W[11:20:2] = _WG[::-1]                                 # 0.1489, ..., 0.9739

MAX_DEPTH = 50
MAX_PANELS = 400_000


@dataclass(frozen=True)
class IntegrationResult:
    """Value, error estimate and number of integrand evaluations.

    For vector-valued integrands ``value`` and ``error_estimate`` are arrays.
    """

    value: object
    error_estimate: object
    evaluations: int


class QuadratureError(RuntimeError):
    """Adaptive refinement gave up; ``result`` holds the best estimate."""

    def __init__(self, message, result=None, components=(), interval=None):
        super().__init__(message)
        self.result = result
        self.components = tuple(components)
        self.interval = interval


@dataclass(frozen=True)
class PanelPlan:
    """Sorted breakpoints starting at 0; the tail beyond the last one is
    integrated under ``u = exp(-w/tail_scale)``."""

    breakpoints: tuple
    tail_scale: float

    def __post_init__(self):
        bp = np.asarray(self.breakpoints, dtype=float)
        if bp.ndim != 1 or bp.size < 2:
            raise ValueError("a panel plan needs at least two breakpoints")
        if bp[0] != 0.0:
            raise ValueError("first breakpoint must be 0")
        if np.any(np.diff(bp) <= 0):
            raise ValueError("breakpoints must be strictly increasing")
        if not self.tail_scale > 0:
            raise ValueError("tail_scale must be positive")
        object.__setattr__(self, "breakpoints", tuple(float(x) for x in bp))


def sinc(x):
    """Unnormalised ``sin(x)/x`` with a series branch for ``|x| < 1e-4``."""
    x = np.asarray(x, dtype=float)
    small = np.abs(x) < 1e-4
    xs = np.where(small, 1.0, x)
    x2 = x * x
    return np.where(small, 1.0 - x2 / 6.0 + x2 * x2 / 120.0, np.sin(xs) / xs)


def _gk21(g, a, b):
    """Kronrod value and |Kronrod - Gauss| for every panel ``[a_i, b_i]``."""
    half = 0.5 * (b - a)
    mid = 0.5 * (b + a)
    x = (mid[:, None] + half[:, None] * _NODES[None, :]).ravel()
    y = np.asarray(g(x))
    scalar = y.ndim == 1
    y = y.reshape((1 if scalar else y.shape[0]), a.size, 21)
    kron = np.einsum("mpk,k->mp", y, _KRONROD_W) * half
    gauss = np.einsum("mpk,k->mp", y, _GAUSS_W) * half
    return kron, np.abs(kron - gauss), scalar


def _adaptive(g, edges, abs_tol, rel_tol, max_depth=MAX_DEPTH, max_panels=MAX_PANELS):
    edges = np.asarray(edges, dtype=float)
    a, b = edges[:-1].copy(), edges[1:].copy()
    keep = b > a
    a, b = a[keep], b[keep]
    depth = np.zeros(a.size, dtype=int)
    val, err, scalar = _gk21(g, a, b)
    evaluations = 21 * a.size
    while True:
        total = val.sum(axis=1)
        est = err.sum(axis=1)
        tol = np.maximum(abs_tol, rel_tol * np.abs(total))
        if np.all(est <= tol):
            break
        norm = (err / tol[:, None]).max(axis=0)
        splittable = depth < max_depth
        if not np.any(splittable & (norm > 0)) or a.size > max_panels:
            res = _result(total, est, evaluations, scalar)
            worst = int(np.argmax(norm))
            failed = np.flatnonzero(est > tol)
            raise QuadratureError(
                f"no convergence: error {np.max(est):.3e} above tolerance {np.min(tol):.3e} "
                f"with {a.size} panels, worst panel [{a[worst]:.6g}, {b[worst]:.6g}]",
                res, components=failed.tolist(), interval=(float(a[worst]), float(b[worst])))
        order = np.argsort(-norm)
        order = order[splittable[order]]
        excess = norm.sum() - 0.5
        k = int(np.searchsorted(np.cumsum(norm[order]), excess)) + 1
        pick = order[:max(1, min(k, order.size))]
        mask = np.zeros(a.size, dtype=bool)
        mask[pick] = True
        pa, pb, pd = a[mask], b[mask], depth[mask]
        pm = 0.5 * (pa + pb)
        na = np.concatenate([pa, pm])
        nb = np.concatenate([pm, pb])
        nd = np.concatenate([pd, pd]) + 1
        nval, nerr, _ = _gk21(g, na, nb)
        evaluations += 21 * na.size
        a = np.concatenate([a[~mask], na])
        b = np.concatenate([b[~mask], nb])
        depth = np.concatenate([depth[~mask], nd])
        val = np.concatenate([val[:, ~mask], nval], axis=1)
        err = np.concatenate([err[:, ~mask], nerr], axis=1)
    return _result(total, est, evaluations, scalar)


def _result(total, est, evaluations, scalar):
    if scalar:
        return IntegrationResult(float(total[0]), float(est[0]), evaluations)
    return IntegrationResult(total, est, evaluations)


def integrate(f, a, b, abs_tol=1e-10, rel_tol=1e-8, points=()):
    """Adaptive integral of ``f`` over the finite interval ``[a, b]``."""
    if not (np.isfinite(a) and np.isfinite(b)) or b <= a:
        raise ValueError("integrate needs finite a < b")
    edges = np.unique(np.concatenate([[a, b], [p for p in points if a < p < b]]))
    return _adaptive(f, edges, abs_tol, rel_tol)


def integrate_semi_infinite(f, plan, abs_tol=1e-10, rel_tol=1e-8):
    """Integral of ``f`` over ``[0, inf)`` following a :class:`PanelPlan`.

    ``f`` must decay at least like ``exp(-w/tail_scale)`` beyond the last
    breakpoint.
    """
    bp = np.asarray(plan.breakpoints)
    s = plan.tail_scale
    last = bp[-1]
    u_max = math.exp(-last / s)
    # the tail lives on [last, last + 1] with u = u_max * (x - last), so one
    # adaptive pool covers both pieces
    def g(x):
        x = np.asarray(x, dtype=float)
        tail = x > last
        u = np.where(tail, u_max * (x - last), 1.0)
        u = np.maximum(u, 1e-300)
        w = np.where(tail, -s * np.log(u), x)
        y = np.asarray(f(w))
        jac = np.where(tail, s * u_max / u, 1.0)
        return y * jac
    edges = np.concatenate([bp, [last + 1.0]]) if u_max > 0 else bp
    return _adaptive(g, edges, abs_tol, rel_tol)


def principal_value(f, pole, domain, abs_tol=1e-10, rel_tol=1e-8, points=()):
    """Cauchy principal value of ``int_a^b f(x)/(x - pole) dx``.

    Uses singularity subtraction,
    ``int (f(x) - f(c))/(x - c) dx + f(c) ln|(b - c)/(c - a)|``,
    with the regularised integrand replaced by ``f'(c)`` within
    ``1e-6 * (b - a)`` of the pole.
    """
    a, b = map(float, domain)
    c = float(pole)
    if not a < c < b:
        raise ValueError("pole must lie strictly inside the integration domain")
    scale = b - a
    fc = float(f(np.array([c]))[0])
    h = 1e-5 * scale
    fp = float(np.diff(f(np.array([c - h, c + h])))[0] / (2 * h))
    near = 1e-6 * scale

    def g(x):
        d = x - c
        small = np.abs(d) < near
        out = (np.asarray(f(x)) - fc) / np.where(small, 1.0, d)
        return np.where(small, fp, out)

    edges = np.unique(np.concatenate([[a, c, b], [p for p in points if a < p < b]]))
    try:
        res = _adaptive(g, edges, abs_tol, rel_tol)
    except QuadratureError as exc:
        raise QuadratureError(f"principal value diverges at pole {c}: {exc}", exc.result,
                              exc.components, exc.interval) from exc
    log_term = fc * math.log((b - c) / (c - a))
    return IntegrationResult(res.value + log_term, res.error_estimate, res.evaluations + 5)


def make_panel_plan(t, omega0=1.0, omega_c=5.0):
    """Breakpoints resolving the sinc peaks at ``omega0`` for time ``t``.

    At ``t = 0`` the kernels are constant and a coarse plan suffices. For
    ``t > 0`` the plan has points ``omega0 +- k*2pi/max(t, 1)`` around the
    peak, one panel per three oscillation periods ``2pi/t`` out to ``25*omega_c``,
    and multiples of ``omega_c`` out to ``40*omega_c``.
    """
    if t < 0:
        raise ValueError("t must be non-negative")
    if t == 0:
        pts = [0.0, omega0, omega_c, 5 * omega_c]
    else:
        step = 2 * math.pi / max(t, 1.0)
        k = max(4, math.ceil(1.0 / step) + 1)
        peak = omega0 + step * np.arange(-k, k + 1)
        osc = np.arange(0.0, 25 * omega_c, min(0.5 * omega_c, 3 * 2 * math.pi / t))
        coarse = omega_c * np.arange(1, 41)
        pts = np.concatenate([[0.0, omega0], peak, osc, coarse])
    pts = np.unique(np.asarray(pts, dtype=float))
    pts = pts[pts >= 0]
    keep = np.concatenate([[True], np.diff(pts) > 1e-9 * max(1.0, pts[-1])])
    return PanelPlan(tuple(pts[keep]), omega_c)


def integrate_oscillatory(f, half_period, x_max, abs_tol=1e-12, rel_tol=1e-12, levels=12):
    """Limit of ``int_0^X f`` as ``X -> inf`` for slowly decaying oscillations.

    ``f`` changes sign every ``half_period``. The integral is accumulated lobe
    by lobe up to ``x_max``; the tail is removed by repeatedly averaging
    consecutive partial sums (an iterated Cesaro mean of the alternating
    lobe series). The error estimate is the change at the last averaging level.
    """
    n = int(x_max // half_period)
    if n < levels + 2:
        raise ValueError("x_max too small for the requested averaging levels")
    edges = half_period * np.arange(n + 1)
    # per-lobe integrals need individual values: integrate each lobe separately
    a, b = edges[:-1], edges[1:]
    lobes, err, _ = _gk21(f, a, b)
    lobes, err = lobes[0], err[0]
    bad = err > abs_tol
    for i in np.flatnonzero(bad):
        lobes[i] = integrate(f, a[i], b[i], abs_tol * 1e-2, rel_tol).value
    partial = np.cumsum(lobes)[-(levels + 1):]
    prev = partial
    for _ in range(levels):
        prev, partial = partial, 0.5 * (partial[:-1] + partial[1:])
    value = float(partial[-1])
    return IntegrationResult(value, float(abs(prev[-1] - value)), 21 * n)
