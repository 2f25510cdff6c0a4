"""Iterative adiabatic approximation of the amplitude for slowly varying omega.

Rewriting the frequency construction as

    (1 / (2 xi^2))^2 = omega^2 - f(xi^2; eps, eps_dot),
    f = (eps^2 - 2 eps_dot xi^2) / (4 xi^4),

suggests the fixed-point scheme ``xi2_(n) = 1 / (2 sqrt(omega^2 - f_(n-1)))``
started from ``f_(-1) = 0``. The zeroth iterate is the leading WKB
amplitude ``1/sqrt(2 omega)``; the first reproduces second-order WKB after
expanding the square root.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import make_interp_spline

from .dynamics import PinneyCoefficients, complex_mode_from_pair, integrate_pair, make_grid
from .models import DomainError, FrequencyModel, UnsupportedOperation, model_to_dict

__all__ = [
    "TurningPointError",
    "SchemeInapplicable",
    "PerturbationState",
    "wkb_leading",
    "wkb_second_order",
    "iterate",
    "iterate_to",
    "adiabatic_parameter",
    "IterationRecord",
    "ConvergenceReport",
    "convergence_report",
]

MIN_RUN = 6  # points needed for a quintic spline


class TurningPointError(DomainError):
    """omega^2 <= 0: the adiabatic ansatz is undefined there."""


class SchemeInapplicable(RuntimeError):
    pass


@dataclass(frozen=True, eq=False)
class PerturbationState:
    """One iterate of the scheme on a fixed grid.

    Points where the radicand was non-positive (or a valid run was too short
    to differentiate) carry NaN and ``valid = False``.
    """

    n: int
    t: np.ndarray
    xi2: np.ndarray
    eps: np.ndarray
    eps_dot: np.ndarray
    valid: np.ndarray
    max_change: float = math.nan

    @classmethod
    def initial(cls, t):
        """The ``n = -1`` seed: ``xi = eps = eps_dot = 0``."""
        t = np.asarray(t, dtype=float)
        z = np.zeros_like(t)
        return cls(-1, t, z, z, z, np.ones(t.shape, bool))

    @classmethod
    def from_amplitude(cls, model: FrequencyModel, t, n=0):
        """State built from a model's exact amplitude profile."""
        t = np.asarray(t, dtype=float)
        g, e, ed = (np.asarray(a, dtype=float) for a in model.xi2_jet(t)[:3])
        return cls(n, t, g, e, ed, np.ones(t.shape, bool))

    @property
    def xi(self):
        return np.sqrt(self.xi2)

    def excluded_intervals(self):
        """``[t_start, t_end]`` pairs covering the invalid points."""
        bad = ~self.valid
        out = []
        i = 0
        while i < bad.size:
            if bad[i]:
                j = i
                while j + 1 < bad.size and bad[j + 1]:
                    j += 1
                out.append([float(self.t[i]), float(self.t[j])])
                i = j + 1
            else:
                i += 1
        return out


def wkb_leading(model: FrequencyModel, t):
    """Leading adiabatic amplitude ``1/sqrt(2 omega)``."""
    w2 = np.asarray(model.omega_squared(t), dtype=float)
    if np.any(w2 <= 0):
        raise TurningPointError("omega^2 <= 0: turning point")
    out = 1.0 / np.sqrt(2.0 * np.sqrt(w2))
    return out[()] if out.ndim == 0 else out


def wkb_second_order(model: FrequencyModel, t):
    """``omega + 3 omega_dot^2/(8 omega^3) - omega_ddot/(4 omega^2)``, i.e. ``1/(2 xi_(1)^2)`` expanded."""
    try:
        w, wd, wdd = (np.asarray(a, dtype=float) for a in model.omega_derivatives(t))
    except DomainError as exc:
        raise TurningPointError(str(exc)) from None
    out = w + 3 * wd ** 2 / (8 * w ** 3) - wdd / (4 * w ** 2)
    return out[()] if out.ndim == 0 else out


def adiabatic_parameter(model: FrequencyModel, t):
    """Local slowness ``sqrt(omega_dot^2/omega^4 + |omega_ddot|/omega^3)``."""
    w, wd, wdd = (np.asarray(a, dtype=float) for a in model.omega_derivatives(t))
    return np.sqrt(wd ** 2 / w ** 4 + np.abs(wdd) / w ** 3)


def _runs(mask):
    i = 0
    while i < mask.size:
        if mask[i]:
            j = i
            while j + 1 < mask.size and mask[j + 1]:
                j += 1
            yield i, j + 1
            i = j + 1
        else:
            i += 1


def _spline_derivatives(t, g, ok):
    d1 = np.full_like(g, np.nan)
    d2 = np.full_like(g, np.nan)
    ok = ok.copy()
    for i, j in _runs(ok):
        if j - i < MIN_RUN:
            ok[i:j] = False
            continue
        # offset keeps exactly-constant data exactly flat
        spl = make_interp_spline(t[i:j], g[i:j] - g[i], k=5)
        d1[i:j] = spl(t[i:j], 1)
        d2[i:j] = spl(t[i:j], 2)
    return d1, d2, ok


def iterate(state: PerturbationState, model: FrequencyModel,
            derivatives: str = "auto") -> PerturbationState:
    """Advance the scheme by one step.

    Parameters
    ----------
    derivatives : {"auto", "spline", "analytic"}
        How ``eps`` and ``eps_dot`` of the new iterate are obtained. ``auto``
        uses the model's frequency derivatives for the zeroth iterate and a
        quintic not-a-knot spline of ``xi2`` afterwards.

    Raises
    ------
    SchemeInapplicable
        If the radicand is non-positive at every grid point.
    """
    t = state.t
    w2 = np.asarray(model.omega_squared(t), dtype=float) * np.ones_like(t)
    if state.n < 0:
        f = np.zeros_like(t)
    else:
        with np.errstate(invalid="ignore", divide="ignore"):
            g = state.xi2
            f = (state.eps ** 2 - 2 * state.eps_dot * g) / (4 * g * g)
    radicand = w2 - f
    ok = state.valid & np.isfinite(radicand) & (radicand > 0)
    if not ok.any():
        raise SchemeInapplicable("omega^2 - f <= 0 at every grid point")
    xi2 = np.full_like(t, np.nan)
    xi2[ok] = 0.5 / np.sqrt(radicand[ok])

    n = state.n + 1
    use_analytic = derivatives == "analytic" or (derivatives == "auto" and n == 0)
    if use_analytic and n != 0:
        raise ValueError("analytic derivatives exist only for the zeroth iterate")
    if use_analytic:
        W, dW, ddW = (np.asarray(a, dtype=float) * np.ones_like(t)
                      for a in model.omega_squared_derivatives(t))
        with np.errstate(invalid="ignore", divide="ignore"):
            eps = -0.25 * W ** -1.5 * dW
            eps_dot = 0.375 * W ** -2.5 * dW ** 2 - 0.25 * W ** -1.5 * ddW
        eps[~ok] = np.nan
        eps_dot[~ok] = np.nan
        ok = ok & np.isfinite(eps) & np.isfinite(eps_dot)
    else:
        eps, eps_dot, ok = _spline_derivatives(t, xi2, ok)
    xi2[~ok] = np.nan

    change = math.nan
    if state.n >= 0:
        both = ok & state.valid
        if both.any():
            change = float(np.max(np.abs(np.sqrt(xi2[both]) / np.sqrt(state.xi2[both]) - 1)))
    return PerturbationState(n, t, xi2, eps, eps_dot, ok, change)


def iterate_to(model, t, n_max, derivatives="auto"):
    """States ``n = 0 .. n_max`` starting from the zero seed."""
    state = PerturbationState.initial(t)
    out = []
    for _ in range(n_max + 1):
        state = iterate(state, model, derivatives)
        out.append(state)
    return out


@dataclass
class IterationRecord:
    n: int
    max_rel_err: float
    max_change: float
    excluded_intervals: list


@dataclass
class ConvergenceReport:
    model: dict
    span: tuple
    grid_spacing: float
    iterations: list = field(default_factory=list)
    reference: str = "closed_form"
    non_monotone: bool = False
    diverged: bool = False

    def to_dict(self):
        def clean(x):
            return None if isinstance(x, float) and not math.isfinite(x) else x

        return {
            "model": self.model,
            "span": list(self.span),
            "grid_spacing": self.grid_spacing,
            "reference": self.reference,
            "non_monotone": self.non_monotone,
            "diverged": self.diverged,
            "iterations": [
                {"n": r.n, "max_rel_err": clean(r.max_rel_err),
                 "max_change": clean(r.max_change),
                 "excluded_intervals": r.excluded_intervals}
                for r in self.iterations],
        }

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def to_csv(self):
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["n", "max_rel_err", "max_change", "excluded_count"])
        for r in self.iterations:
            writer.writerow([r.n, repr(r.max_rel_err), repr(r.max_change),
                             len(r.excluded_intervals)])
        return buf.getvalue()

    @property
    def errors(self):
        return [r.max_rel_err for r in self.iterations]


def _reference_xi(model, t, states):
    try:
        return np.sqrt(np.asarray(model.amplitude_squared(t), dtype=float)), "closed_form"
    except UnsupportedOperation:
        pass
    # No amplitude profile: integrate the mode seeded from the last iterate
    # at the first valid point and take its modulus.
    last = states[-1]
    if not last.valid.any():
        return np.full_like(t, np.nan), "unavailable"
    i = int(np.argmax(last.valid))
    xi0 = math.sqrt(last.xi2[i])
    xid0 = last.eps[i] / (2 * xi0)
    span = (t[i], t[-1])
    u, v = integrate_pair(model, t[i], (xi0, xid0), (0.0, 1.0 / (2 * xi0)), span,
                          grid=t[i:], rtol=1e-12, atol=1e-14)
    mode = complex_mode_from_pair(u, v, PinneyCoefficients(1.0, 0.0, 1.0))
    ref = np.full_like(t, np.nan)
    ref[i:] = mode.xi
    return ref, "numerical"


def convergence_report(model: FrequencyModel, span, n_max=3, grid=None, dt=None,
                       exact_xi=None) -> ConvergenceReport:
    """Error of each iterate against the exact amplitude.

    The exact ``xi`` comes from ``exact_xi`` (array on the grid), the model's
    closed form, or a high-accuracy integration seeded from the last iterate.
    Flags ``non_monotone`` when the error grows between iterations and
    ``diverged`` when it becomes non-finite or excluded regions grow.
    """
    if grid is None:
        grid = make_grid(span, dt if dt is not None else (span[1] - span[0]) / 2000)
    t = np.asarray(grid, dtype=float)
    states = []
    state = PerturbationState.initial(t)
    for _ in range(n_max + 1):
        try:
            state = iterate(state, model)
        except SchemeInapplicable:
            break
        states.append(state)
    if exact_xi is not None:
        ref, source = np.asarray(exact_xi, dtype=float), "user"
    else:
        ref, source = _reference_xi(model, t, states)
    records = []
    for s in states:
        mask = s.valid & np.isfinite(ref)
        err = float(np.max(np.abs(s.xi[mask] / ref[mask] - 1))) if mask.any() else math.nan
        records.append(IterationRecord(s.n, err, s.max_change, s.excluded_intervals()))
    errs = [r.max_rel_err for r in records]
    non_monotone = any(b > a for a, b in zip(errs, errs[1:]) if math.isfinite(a) and math.isfinite(b))
    excl = [sum(iv[1] - iv[0] + 1e-300 for iv in r.excluded_intervals) for r in records]
    diverged = (len(states) < n_max + 1 or any(not math.isfinite(e) for e in errs)
                or any(b > a for a, b in zip(excl, excl[1:])))
    spacing = float(t[1] - t[0]) if t.size > 1 else math.nan
    return ConvergenceReport(model_to_dict(model), (float(span[0]), float(span[1])), spacing,
                             records, source, non_monotone, diverged)
