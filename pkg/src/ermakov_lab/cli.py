"""Command-line front end: ``ermakov-lab {catalog,simulate,validate,wavefunction,perturb}``.

Exit codes: 0 success, 1 configuration or domain error, 2 numerical failure.
Data files never contain timestamps; ``--stamp`` adds one to the metadata.
"""
from __future__ import annotations

import argparse
import datetime as _dt
import json
import math
import os
import sys

import numpy as np

from . import __version__
from .dynamics import (DEFAULT_ATOL, DEFAULT_RTOL, IntegrationError, PinneyCoefficients,
                       anchored_mode, complex_mode_from_pair, integrate_oscillator,
                       integrate_pair, make_grid)
from .io import dumps, envelope, mode_csv, read_csv, trajectory_csv, wavefunction_csv
from .models import (CATALOG, DomainError, Tabulated, UnsupportedOperation,
                     model_from_dict, model_to_dict)
from .perturbation import convergence_report
from .quantum import catalog_amplitude_source, quadrature_cutoff, wavefunction
from .validation import MODULES, run_validation

__all__ = ["main", "build_parser", "RELATIONS"]

RELATIONS = {
    "constant": "xi2 = 1/(2 omega0)",
    "exponential": "xi2 = eps0 exp(lam t)/lam",
    "hyperbolic_cosh": "xi2 = eps0 tau cosh(t/tau)",
    "hyperbolic_sinh": "xi2 = eps0 tau sinh(t/tau)",
    "power_law": "xi2 = tau eps0/(n+1) (t/tau)^(n+1)",
    "log_amplitude": "xi2 = eps0 tau ln t",
    "oscillatory_cos": "xi2 = a + b cos(2 omega0 t)",
    "oscillatory_sin": "xi2 = a + b sin(2 omega0 t)",
    "tabulated": "omega^2 sampled, monotone cubic or linear interpolation",
    "custom_amplitude": "user xi2(t); omega^2 = (1 + eps^2 - 2 eps_dot xi2)/(4 xi2^2)",
}

_PARAMS = {
    "constant": ["omega0"], "exponential": ["epsilon0", "lam"],
    "hyperbolic_cosh": ["epsilon0", "tau"], "hyperbolic_sinh": ["epsilon0", "tau"],
    "power_law": ["epsilon0", "tau", "n"], "log_amplitude": ["epsilon0", "tau"],
    "oscillatory_cos": ["a", "b", "omega0"], "oscillatory_sin": ["a", "b", "omega0"],
    "tabulated": ["times", "omega_squared", "interp"],
}


class ConfigError(ValueError):
    pass


# argument parsing ------------------------------------------------------------

def _span(text):
    try:
        a, b = (float(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"span must be 'a,b', got {text!r}") from None
    return a, b


def _floats(text):
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _ints(text):
    try:
        vals = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    if any(v < 0 for v in vals):
        raise argparse.ArgumentTypeError("quantum numbers must be >= 0")
    return vals


def _common(p, model=True, span=True):
    if model:
        p.add_argument("--model", required=True, help="inline JSON document or path to one")
    if span:
        p.add_argument("--span", type=_span, help="time interval 'a,b'")
        p.add_argument("--dt", type=float, help="grid spacing")
    p.add_argument("--out", help="output path (default: stdout)")
    p.add_argument("--format", choices=["csv", "json"])
    p.add_argument("--stamp", action="store_true", help="record a UTC timestamp in metadata")


def build_parser():
    parser = argparse.ArgumentParser(prog="ermakov-lab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("catalog", help="list the frequency models")
    p.add_argument("--format", choices=["text", "json"], default="text")

    p = sub.add_parser("simulate", help="integrate the classical oscillator and build the mode")
    _common(p)
    p.add_argument("--tol-rel", type=float, default=DEFAULT_RTOL)
    p.add_argument("--tol-abs", type=float, default=DEFAULT_ATOL)
    p.add_argument("--initial", type=_floats,
                   help="'u0,udot0': emit one real trajectory instead of the mode")

    p = sub.add_parser("validate", help="run the self-validation suite")
    p.add_argument("scope", nargs="?", default="all", choices=["all", *MODULES])
    p.add_argument("--seed", type=int, default=20240611)
    p.add_argument("--out")
    p.add_argument("--format", choices=["json"], default="json")
    p.add_argument("--stamp", action="store_true")

    p = sub.add_parser("wavefunction", help="sample number states Psi_n(q, t)")
    _common(p)
    p.add_argument("--n", type=_ints, default=[0], help="quantum numbers, e.g. 0,1,2")
    p.add_argument("--t", type=_floats, help="sample times (default: span start)")
    p.add_argument("--dq", type=float, default=0.01)
    p.add_argument("--q-max", type=float, help="half-width of the q grid (default: automatic)")
    p.add_argument("--tol-rel", type=float, default=1e-12)
    p.add_argument("--tol-abs", type=float, default=1e-14)

    p = sub.add_parser("perturb", help="adiabatic iteration convergence report")
    _common(p)
    p.add_argument("--nmax", type=int, default=3)
    return parser


# helpers ---------------------------------------------------------------------

def load_model(spec):
    text = spec.strip()
    if not text.startswith("{"):
        if not os.path.exists(spec):
            raise ConfigError(f"--model: no such file {spec!r}")
        with open(spec, encoding="utf-8") as fh:
            text = fh.read()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"--model: invalid JSON ({exc})") from None
    if not isinstance(doc, dict):
        raise ConfigError("--model: expected a JSON object")
    try:
        return model_from_dict(doc)
    except (TypeError, KeyError) as exc:
        raise ConfigError(f"--model: {exc}") from None


def _require_span(args):
    if args.span is None:
        raise ConfigError("--span is required")
    a, b = args.span
    if not a < b:
        raise ConfigError(f"--span must satisfy a < b, got {a},{b}")
    return a, b


def _tolerances(args):
    if not (args.tol_rel > 0 and args.tol_abs > 0):
        raise ConfigError("tolerances must be positive")
    return args.tol_rel, args.tol_abs


def _metadata(args, model, **extra):
    meta = {"command": args.command, "version": __version__}
    if model is not None:
        meta["model"] = model_to_dict(model)
    meta.update(extra)
    if getattr(args, "stamp", False):
        meta["stamp"] = _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")
    return meta


def _write(text, path):
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _emit(args, kind, meta, csv_text, columns):
    """CSV plus a ``.meta.json`` sidecar, or one JSON envelope."""
    fmt = args.format or "csv"
    if fmt == "csv":
        _write(csv_text, args.out)
        if args.out is not None:
            _write(dumps(envelope(kind, meta)), args.out + ".meta.json")
    else:
        _write(dumps(envelope(kind, meta, columns)), args.out)


def _columns(csv_text):
    return {k: v.tolist() for k, v in read_csv(csv_text).items()}


def _numeric_mode(model, span, grid, rtol, atol):
    """Normalised mode from unit initial data, for models without a closed form."""
    u, v = integrate_pair(model, span[0], (1.0, 0.0), (0.0, 1.0), span, rtol, atol, grid)
    return complex_mode_from_pair(u, v, PinneyCoefficients(1.0, 0.0, 1.0))


def _has_amplitude(model):
    return not isinstance(model, Tabulated)


# commands --------------------------------------------------------------------

def cmd_catalog(args):
    rows = []
    for cls in (*CATALOG, Tabulated):
        rows.append({"variant": cls.variant, "params": _PARAMS.get(cls.variant, []),
                     "domain": cls.domain_rule, "relation": RELATIONS[cls.variant],
                     "note": cls.label})
    if args.format == "json":
        sys.stdout.write(dumps(rows))
        return 0
    for r in rows:
        sys.stdout.write(f"{r['variant']}\n  params:   {', '.join(r['params'])}\n"
                         f"  domain:   {r['domain']}\n  relation: {r['relation']}\n"
                         f"  note:     {r['note']}\n")
    return 0


def cmd_simulate(args):
    model = load_model(args.model)
    span = _require_span(args)
    rtol, atol = _tolerances(args)
    grid = make_grid(span, args.dt)
    meta = _metadata(args, model, span=list(span), dt=args.dt if args.dt else 1e-3,
                     rtol=rtol, atol=atol, rows=int(grid.size))
    if args.initial is not None:
        if len(args.initial) != 2:
            raise ConfigError("--initial needs exactly two numbers 'u0,udot0'")
        tr = integrate_oscillator(model, span[0], *args.initial, span, rtol, atol, grid)
        text = trajectory_csv(tr)
        _emit(args, "trajectory", meta, text, _columns(text))
        return 0
    if _has_amplitude(model):
        mode = anchored_mode(model, span, grid, rtol, atol)
        meta["initial_data"] = "anchored: w = xi, w_dot = xi_dot - i/(2 xi)"
    else:
        mode = _numeric_mode(model, span, grid, rtol, atol)
        meta["initial_data"] = "u = (1, 0), v = (0, 1), A = C = 1, B = 0"
    meta["conjugated"] = bool(mode.meta.get("conjugated", False))
    text = mode_csv(mode)
    _emit(args, "mode_function", meta, text, _columns(text))
    return 0


def cmd_validate(args):
    report = run_validation(args.scope, seed=args.seed)
    meta = _metadata(args, None, scope=args.scope, seed=args.seed)
    doc = {"metadata": meta, "passed": report["passed"], "results": report["results"]}
    _write(dumps(doc), args.out)
    failed = [r for r in report["results"] if not r["pass"]]
    sys.stderr.write(f"{len(report['results']) - len(failed)}/{len(report['results'])} checks "
                     f"passed\n")
    for r in failed:
        sys.stderr.write(f"FAIL {r['check']} [{r['model']}] max_err={r['max_err']!r} "
                         f"tol={r['tol']!r}\n")
    return 0 if report["passed"] else 1


def cmd_wavefunction(args):
    model = load_model(args.model)
    if args.dq <= 0:
        raise ConfigError("--dq must be positive")
    times = args.t
    if times is None:
        times = [_require_span(args)[0]]
    t_ref = times[0]
    if _has_amplitude(model):
        source = catalog_amplitude_source(model, t_ref)
        reference = "closed-form amplitude"
    else:
        span = _require_span(args)
        if not (span[0] <= min(times) and max(times) <= span[1]):
            raise ConfigError("--t must lie inside --span")
        rtol, atol = _tolerances(args)
        mode = _numeric_mode(model, span, make_grid(span, args.dt), rtol, atol)
        source = mode.amplitude_source()
        reference = "numerical mode"
    values = [source(t) for t in times]
    if args.q_max is None:
        q_max = max(quadrature_cutoff(max(args.n), v[0]) for v in values)
    else:
        q_max = float(args.q_max)
    m = int(math.ceil(q_max / args.dq))
    q = args.dq * np.arange(-m, m + 1)
    samples = []
    for t, (xi, xd, ph) in zip(times, values):
        for n in args.n:
            samples.append(wavefunction(n, q, xi, xd, ph, t=t))
    meta = _metadata(args, model, n=list(args.n), t=list(times), dq=args.dq,
                     q_max=float(q[-1]), amplitude=reference,
                     order="rows grouped by t, then n in the order given")
    text = wavefunction_csv(samples)
    cols = _columns(text)
    cols["n"] = [s.n for s in samples for _ in range(q.size)]
    _emit(args, "wavefunction", meta, text, cols)
    return 0


def cmd_perturb(args):
    model = load_model(args.model)
    span = _require_span(args)
    if args.nmax < 0:
        raise ConfigError("--nmax must be >= 0")
    rep = convergence_report(model, span, args.nmax, dt=args.dt)
    meta = _metadata(args, model, span=list(span), nmax=args.nmax)
    if (args.format or "json") == "json":
        _write(dumps(envelope("perturbation_report", meta, rep.to_dict())), args.out)
    else:
        _write(rep.to_csv(), args.out)
        if args.out is not None:
            _write(dumps(envelope("perturbation_report", meta)), args.out + ".meta.json")
    return 0


COMMANDS = {"catalog": cmd_catalog, "simulate": cmd_simulate, "validate": cmd_validate,
            "wavefunction": cmd_wavefunction, "perturb": cmd_perturb}


_VALUE_FLAGS = {"--span", "--t", "--initial", "--n"}


def _glue_negative_values(argv):
    # argparse treats "-2,2" as an option; bind such values to their flag.
    out, i = [], 0
    while i < len(argv):
        a = argv[i]
        if a in _VALUE_FLAGS and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(f"{a}={argv[i + 1]}")
            i += 2
        else:
            out.append(a)
            i += 1
    return out


def main(argv=None):
    parser = build_parser()
    argv = _glue_negative_values(list(sys.argv[1:] if argv is None else argv))
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse uses 2 for usage errors; the contract says 1
        return 0 if exc.code == 0 else 1
    try:
        return COMMANDS[args.command](args)
    except IntegrationError as exc:
        sys.stderr.write(f"error: integration failed: {exc}\n")
        return 2
    except (ConfigError, DomainError, UnsupportedOperation, ValueError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
