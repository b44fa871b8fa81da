"""Command-line interface: ``rwc {coeffs,trajectory,figure1,figure2,validate}``.

Exit codes: 0 success, 1 a validation check failed, 2 bad configuration or
unusable output path.
"""

import argparse
from concurrent.futures import ProcessPoolExecutor
import json
import os
import sys

import numpy as np

from . import acceptance
from .bath import OhmicBath
from .coefficients import Tolerances, coefficient_derivatives, sb_coefficients
from .config import STATE_VECTORS, ConfigError, load_config
from .engine import evolve, liouvillian_coefficients
from .linalg import pure_state
from .nonmarkov import witness_series

COEFF_COLUMNS = ("t", "Gamma_pp", "Gamma_mm", "Re_Gamma_pm", "Im_Gamma_pm", "Xi",
                 "gamma_pp", "gamma_mm", "Re_gamma_pm", "Im_gamma_pm", "Delta")
FIGURE1_COLUMNS = ("t", "population_rwc", "population_davies", "coherence_rwc",
                   "coherence_davies", "Delta_t", "Delta_davies")
FIGURE2_COLUMNS = ("t", "log_negativity", "l1_coherence", "trace_distance_sy", "g",
                   "lambda_plus", "lambda_minus")

EXIT_OK, EXIT_FAILED, EXIT_CONFIG = 0, 1, 2


def _coefficient_rows(bath, times, tol):
    rows = []
    for t in times:
        c = sb_coefficients(bath, t, tol.abs_tol, tol.rel_tol)
        d = coefficient_derivatives(bath, t, tol.abs_tol, tol.rel_tol)
        lc = liouvillian_coefficients(c, d)
        rows.append((t, c.gamma_pp, c.gamma_mm, c.gamma_pm.real, c.gamma_pm.imag, c.xi,
                     lc.gamma_pp, lc.gamma_mm, lc.gamma_pm.real, lc.gamma_pm.imag, lc.delta))
    return np.array(rows, dtype=float)


def _trajectory_rows(bath, times, tol, states, backend, frame):
    cols = [np.asarray(times)]
    for name in states:
        traj = evolve(bath, pure_state(STATE_VECTORS[name]), times, backend, frame, tol)
        rho = np.array(traj)
        cols += [rho[:, 0, 0].real, rho[:, 1, 1].real, rho[:, 0, 1].real, rho[:, 0, 1].imag]
    return np.column_stack(cols)


def _witness_rows(bath, times, tol, states, names):
    w = witness_series(bath, times, pure_state(STATE_VECTORS[states[0]]),
                       pure_state(STATE_VECTORS[states[1]]), tol)
    return w.as_table(names)


_FIGURE1_SOURCE = ("population", "population_davies", "coherence", "coherence_davies",
                   "Delta", "Delta_davies")
_FIGURE2_SOURCE = FIGURE2_COLUMNS[1:]


def _compute(task):
    """Worker entry point; ``task`` is a plain tuple so it pickles cheaply."""
    kind, bath_args, times, tol_args, extra = task
    bath = OhmicBath(*bath_args)
    tol = Tolerances(*tol_args)
    if kind == "coeffs":
        return _coefficient_rows(bath, times, tol)
    if kind == "trajectory":
        return _trajectory_rows(bath, times, tol, *extra)
    if kind == "figure1":
        return _witness_rows(bath, times, tol, extra, _FIGURE1_SOURCE)
    if kind == "figure2":
        return _witness_rows(bath, times, tol, extra, _FIGURE2_SOURCE)
    raise ValueError(kind)


def _chunks(times, n):
    """Split the grid into ``n`` contiguous pieces."""
    times = np.asarray(times)
    return [c for c in np.array_split(times, max(1, min(n, times.size))) if c.size]


def _run(kind, cfg, extra):
    """Rows for every temperature, in temperature then grid order."""
    tol_args = (cfg.abs_tol, cfg.rel_tol)
    # the ODE backend integrates from t = 0 and cannot be split into pieces
    pieces = 1 if kind == "trajectory" else cfg.workers
    tasks = [(kind, (cfg.alpha, cfg.omega_c, temp), chunk, tol_args, extra)
             for temp in cfg.temperatures for chunk in _chunks(cfg.times, pieces)]
    if cfg.workers > 1:
        with ProcessPoolExecutor(cfg.workers) as pool:
            parts = list(pool.map(_compute, tasks))
    else:
        parts = [_compute(task) for task in tasks]
    per_temp = len(parts) // len(cfg.temperatures)
    return {temp: np.vstack(parts[i * per_temp:(i + 1) * per_temp])
            for i, temp in enumerate(cfg.temperatures)}


def _temperature_tag(temp):
    return f"T{temp:g}".replace(".", "p")


def _write(kind, header, tables, cfg):
    os.makedirs(cfg.output_path, exist_ok=True)
    written = []
    for temp, table in tables.items():
        stem = os.path.join(cfg.output_path, f"{kind}_{_temperature_tag(temp)}")
        if cfg.output_format == "csv":
            path = stem + ".csv"
            np.savetxt(path, table, fmt="%.11e", delimiter=",", header=",".join(header),
                       comments="")
        else:
            path = stem + ".json"
            doc = {"command": kind, "alpha": cfg.alpha, "omega_c": cfg.omega_c,
                   "temperature": temp,
                   "columns": {name: table[:, i].tolist() for i, name in enumerate(header)}}
            with open(path, "w", encoding="utf-8") as fh:
                json.dump(doc, fh, indent=1)
        written.append(path)
    return written


def _trajectory_header(states):
    header = ["t"]
    for name in states:
        header += [f"{name}_rho00", f"{name}_rho11", f"{name}_Re_rho01", f"{name}_Im_rho01"]
    return header


def _emit(kind, cfg):
    states = (cfg.population_state, cfg.coherence_state)
    if kind == "coeffs":
        header, extra = COEFF_COLUMNS, None
    elif kind == "trajectory":
        header, extra = _trajectory_header(states), (states, cfg.backend, cfg.frame)
    elif kind == "figure1":
        header, extra = FIGURE1_COLUMNS, states
    else:
        header, extra = FIGURE2_COLUMNS, states
    tables = _run(kind, cfg, extra)
    for path in _write(kind, header, tables, cfg):
        print(path)
    return EXIT_OK


def _validate(cfg):
    failed = 0
    for fn in acceptance.CHECKS:
        check = acceptance.run_check(fn, alpha=cfg.alpha, omega_c=cfg.omega_c)
        print(acceptance.format_check(check), flush=True)
        failed += not check.passed
    print(f"{len(acceptance.CHECKS) - failed}/{len(acceptance.CHECKS)} checks passed")
    return EXIT_FAILED if failed else EXIT_OK


def _parse_temps(text):
    if text.strip() == "":
        return []
    try:
        return [float(x) for x in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad temperature list {text!r}") from None


def build_parser():
    parser = argparse.ArgumentParser(
        prog="rwc", description="Refined weak coupling dynamics of the spin-boson model.")
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "coeffs": "exponent and Liouvillian coefficients versus time",
        "trajectory": "density matrices of the configured initial states",
        "figure1": "populations, coherences and Lamb shift (refined vs Davies)",
        "figure2": "entanglement, coherence, trace distance and g(t)",
        "validate": "run the acceptance checks",
    }
    for name, text in helps.items():
        p = sub.add_parser(name, help=text)
        p.add_argument("--config", help="JSON run configuration")
        p.add_argument("--alpha", type=float)
        p.add_argument("--omega-c", type=float)
        p.add_argument("--temps", type=_parse_temps, help="comma-separated temperatures")
        p.add_argument("--t-max", type=float)
        p.add_argument("--steps", type=int)
        p.add_argument("--backend", choices=("map", "ode"))
        p.add_argument("--frame", choices=("interaction", "lab"))
        p.add_argument("--abs-tol", type=float)
        p.add_argument("--rel-tol", type=float)
        p.add_argument("--out", help="output directory")
        p.add_argument("--format", choices=("csv", "json"))
        p.add_argument("--workers", type=int)
    return parser


def _overrides(args):
    o = {}
    pairs = {
        ("bath", "alpha"): args.alpha, ("bath", "omega_c"): args.omega_c,
        ("bath", "temperatures"): args.temps,
        ("grid", "t_max"): args.t_max, ("grid", "steps"): args.steps,
        ("tolerances", "abs_tol"): args.abs_tol, ("tolerances", "rel_tol"): args.rel_tol,
        ("output", "path"): args.out, ("output", "format"): args.format,
        ("backend",): args.backend, ("frame",): args.frame, ("workers",): args.workers,
    }
    for keys, value in pairs.items():
        if value is None:
            continue
        node = o
        for k in keys[:-1]:
            node = node.setdefault(k, {})
        node[keys[-1]] = value
    if args.t_max is not None or args.steps is not None:
        # flags describe a uniform grid, which replaces an explicit time list
        o.setdefault("grid", {})["times"] = None
    return o


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config, _overrides(args))
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if args.command == "validate":
        return _validate(cfg)
    try:
        return _emit(args.command, cfg)
    except OSError as exc:
        print(f"cannot write output: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
