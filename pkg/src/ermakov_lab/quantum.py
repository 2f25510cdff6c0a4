"""Number states of the time-dependent oscillator and their diagnostics.

With ``xi`` an amplitude solving ``xi'' + omega^2 xi = 1/(4 xi^3)`` and
``Phi(t) = int dt'/xi^2``, the n-th number state reads

    Psi_n(q, t) = [sqrt(2 pi) 2^n n! xi]^(-1/2) exp(-i (n + 1/2) Phi / 2)
                  H_n(q / (sqrt(2) xi)) exp(-(1/(4 xi^2) - i xi_dot/(2 xi)) q^2).

Internally the Hermite factor and Gaussian are combined into normalised
Hermite functions so large ``n`` never overflows.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from scipy.integrate import quad

from . import _fd
from .dynamics import ModeFunction
from .models import DomainError, FrequencyModel

__all__ = [
    "HERMITE_MAX_N",
    "WaveFunctionSample",
    "hermite",
    "hermite_function",
    "quadrature_cutoff",
    "wavefunction",
    "psi_values",
    "overlap",
    "norm",
    "schrodinger_residual",
    "catalog_amplitude_source",
    "Uncertainties",
    "uncertainties",
    "vacuum_energy",
    "invariant_expectation",
    "invariant_quadrature",
]

HERMITE_MAX_N = 200


def hermite(n: int, x):
    """Physicists' Hermite polynomial ``H_n(x)`` by the three-term recurrence."""
    n = int(n)
    if n < 0:
        raise ValueError("n must be non-negative")
    if n > HERMITE_MAX_N:
        raise ValueError(f"n={n} exceeds guard {HERMITE_MAX_N}")
    x = np.asarray(x, dtype=float)
    h_prev, h = np.zeros_like(x), np.ones_like(x)
    for k in range(n):
        h_prev, h = h, 2 * x * h - 2 * k * h_prev
    return h[()] if h.ndim == 0 else h


def hermite_function(n: int, x):
    """``H_n(x) exp(-x^2/2) / sqrt(2^n n! sqrt(pi))``, stable for large ``n``.

    Uses the normalised recurrence
    ``psi_{k+1} = sqrt(2/(k+1)) x psi_k - sqrt(k/(k+1)) psi_{k-1}``.
    """
    n = int(n)
    if n < 0:
        raise ValueError("n must be non-negative")
    if n > HERMITE_MAX_N:
        raise ValueError(f"n={n} exceeds guard {HERMITE_MAX_N}")
    x = np.asarray(x, dtype=float)
    p_prev = np.zeros_like(x)
    p = np.pi ** -0.25 * np.exp(-0.5 * x * x)
    for k in range(n):
        p_prev, p = p, math.sqrt(2.0 / (k + 1)) * x * p - math.sqrt(k / (k + 1)) * p_prev
    return p[()] if p.ndim == 0 else p


def _hermite_function_pair(n, x):
    # psi_n and its x-derivative: psi_n' = sqrt(n/2) psi_{n-1} - sqrt((n+1)/2) psi_{n+1}
    lower = hermite_function(n - 1, x) if n > 0 else np.zeros_like(x)
    upper = hermite_function(n + 1, x)
    return hermite_function(n, x), math.sqrt(n / 2) * lower - math.sqrt((n + 1) / 2) * upper


def quadrature_cutoff(n, xi):
    """Half-width ``Q`` beyond which the state is negligible.

    ``xi * sqrt(56 ln 10) * 1.2`` puts the Gaussian envelope below 1e-14 of
    its peak; widened for large ``n`` to clear the classical turning point.
    """
    base = xi * math.sqrt(56 * math.log(10)) * 1.2
    turning = math.sqrt(2) * xi * (math.sqrt(2 * n + 1) + 9.0)
    return max(base, turning)


def psi_values(n, q, xi, xidot, phase):
    """Complex ``Psi_n`` at positions ``q``; ``phase`` is ``int dt/xi^2``."""
    if not xi > 0:
        raise DomainError("xi must be positive")
    q = np.asarray(q, dtype=float)
    x = q / (math.sqrt(2) * xi)
    amp = hermite_function(n, x) / math.sqrt(math.sqrt(2) * xi)
    chirp = np.exp(1j * xidot / (2 * xi) * q * q)
    return amp * chirp * np.exp(-0.5j * (n + 0.5) * phase)


def _psi_and_dq(n, q, xi, xidot, phase):
    q = np.asarray(q, dtype=float)
    s = math.sqrt(2) * xi
    x = q / s
    h, dh = _hermite_function_pair(n, x)
    pref = np.exp(-0.5j * (n + 0.5) * phase) / math.sqrt(s)
    kappa = xidot / (2 * xi)
    chirp = np.exp(1j * kappa * q * q)
    psi = pref * h * chirp
    dpsi = pref * chirp * (dh / s + 2j * kappa * q * h)
    return psi, dpsi


@dataclass(frozen=True, eq=False)
class WaveFunctionSample:
    n: int
    t: float
    q: np.ndarray
    psi: np.ndarray
    xi: float
    xidot: float
    phase: float
    omega0: float = 1.0
    meta: dict = field(default_factory=dict)

    @property
    def abs2(self):
        return np.abs(self.psi) ** 2

    def node_count(self, rel=1e-8):
        """Sign changes of ``Re(Psi e^{-i chirp})`` in the bulk."""
        real = np.real(self.psi * np.exp(-1j * self.xidot / (2 * self.xi) * self.q ** 2)
                       * np.exp(0.5j * (self.n + 0.5) * self.phase))
        bulk = np.abs(real) > rel * np.max(np.abs(real))
        s = np.sign(real[bulk])
        return int(np.count_nonzero(s[1:] != s[:-1]))


def wavefunction(n, q_grid, xi, xidot, phase, t=None, omega0=1.0, edge_tol=1e-12):
    """Number state ``Psi_n`` sampled on ``q_grid``.

    Raises
    ------
    DomainError
        If ``xi <= 0`` or the grid is too narrow (edge amplitude above
        ``edge_tol`` times the peak).
    """
    n = int(n)
    q = np.asarray(q_grid, dtype=float)
    psi = psi_values(n, q, xi, xidot, phase)
    mag = np.abs(psi)
    peak = mag.max()
    if peak == 0 or max(mag[0], mag[-1]) > edge_tol * peak:
        raise DomainError("q grid too narrow: boundary amplitude not negligible")
    if not math.isclose(q[0], -q[-1], rel_tol=1e-9, abs_tol=1e-12):
        raise DomainError("q grid must be symmetric about 0")
    return WaveFunctionSample(n, t, q, psi, float(xi), float(xidot), float(phase), omega0)


def _complex_quad(f, a, b, epsabs=1e-13, epsrel=1e-12, points=None):
    re = quad(lambda s: float(np.real(f(s))), a, b, epsabs=epsabs, epsrel=epsrel, limit=400,
              points=points)[0]
    im = quad(lambda s: float(np.imag(f(s))), a, b, epsabs=epsabs, epsrel=epsrel, limit=400,
              points=points)[0]
    return complex(re, im)


def overlap(m, n, xi, xidot, phase):
    """``<Psi_m | Psi_n>`` at a common time by adaptive Gauss–Kronrod."""
    Q = quadrature_cutoff(max(m, n), xi)
    return _complex_quad(
        lambda q: np.conj(psi_values(m, q, xi, xidot, phase)) * psi_values(n, q, xi, xidot, phase),
        -Q, Q, points=[0.0])


def norm(n, xi, xidot, phase=0.0):
    return overlap(n, n, xi, xidot, phase).real


def catalog_amplitude_source(model: FrequencyModel, t_ref):
    """``t -> (xi, xi_dot, int_{t_ref}^t dt'/xi^2)`` from the model's closed form."""
    t_ref = float(t_ref)

    def source(t):
        g, e = (float(a) for a in model.xi2_jet(t)[:2])
        xi = math.sqrt(g)
        phase = 0.0
        if t != t_ref:
            phase = quad(lambda s: 1.0 / float(model.amplitude_squared(s)), t_ref, t,
                         epsabs=0.0, epsrel=1e-13, limit=200)[0]
        return xi, e / (2 * xi), phase

    source.t0 = t_ref
    return source


def _resolve_source(model, source):
    if source is None:
        return catalog_amplitude_source(model, 0.0 if math.isinf(model.domain.t_min)
                                        else model.domain.t_min + 1.0)
    if isinstance(source, ModeFunction):
        return source.amplitude_source()
    return source


def schrodinger_residual(model, n, t, q_grid, dt, source=None, return_array=False):
    """Max of ``|i dPsi/dt - (-1/2 d^2/dq^2 + omega^2 q^2 / 2) Psi|``.

    Central difference in time (step ``dt``) and the five-point stencil in
    ``q``; the residual is reported on interior ``q`` points.

    Parameters
    ----------
    source : callable, ModeFunction or None
        Provides ``(xi, xi_dot, phase)`` at any time. ``None`` uses the
        model's closed-form amplitude.
    """
    src = _resolve_source(model, source)
    q = np.asarray(q_grid, dtype=float)
    dq = _fd.uniform_step(q)
    vals = {}
    for s in (-1, 0, 1):
        xi, xd, ph = src(t + s * dt)
        vals[s] = psi_values(n, q, xi, xd, ph)
    dpsi_dt = (vals[1] - vals[-1]) / (2 * dt)
    psi = vals[0]
    w2 = float(model.omega_squared(t))
    H = -0.5 * _fd.d2_5(psi, dq) + 0.5 * w2 * q[2:-2] ** 2 * psi[2:-2]
    res = np.abs(1j * dpsi_dt[2:-2] - H)
    return res if return_array else float(res.max())


class Uncertainties(NamedTuple):
    """Vacuum dispersions of a mode.

    ``product2`` is ``Dq^2 Dp^2`` from the mode directly; ``product2_identity``
    is ``(xi xi_dot)^2 + 1/4``, which equals it only when ``Wr[w, w*] = i``.
    """

    dq2: np.ndarray
    dp2: np.ndarray
    product2: np.ndarray
    product2_identity: np.ndarray


def _mode_values(mode, t):
    if isinstance(mode, ModeFunction):
        if t is None:
            return mode.w, mode.wdot
        idx = np.flatnonzero(mode.t == t)
        return (mode.w[idx[0]], mode.wdot[idx[0]]) if idx.size else mode(t)
    return tuple(np.asarray(a, dtype=complex) for a in mode)


def uncertainties(mode, t=None) -> Uncertainties:
    """Position/momentum dispersions of the vacuum built on ``mode``.

    ``mode`` is a :class:`ModeFunction` (``t`` a time, or ``None`` for every
    knot) or a ``(w, w_dot)`` pair.
    """
    w, wd = _mode_values(mode, t)
    dq2 = np.abs(w) ** 2
    dp2 = np.abs(wd) ** 2
    xixd = np.real(np.conj(w) * wd)
    return Uncertainties(dq2, dp2, dq2 * dp2, xixd ** 2 + 0.25)


def vacuum_energy(model: FrequencyModel, mode=None, t=0.0):
    """``<0|H|0> = xi_dot^2/2 + omega^2 xi^2/2 + 1/(8 xi^2)``.

    Without a mode the model's closed-form amplitude is used.
    """
    if mode is None:
        g, e = (np.asarray(a, dtype=float) for a in model.xi2_jet(t)[:2])
        xi2, xidot2 = g, e * e / (4 * g)
    else:
        w, wd = _mode_values(mode, t)
        xi2 = np.abs(w) ** 2
        xidot2 = np.real(np.conj(w) * wd) ** 2 / xi2
    out = 0.5 * xidot2 + 0.5 * np.asarray(model.omega_squared(t)) * xi2 + 1.0 / (8 * xi2)
    return out[()] if np.ndim(out) == 0 else out


def invariant_expectation(n, omega0=1.0):
    """Eigenvalue ``omega0 (n + 1/2)`` of the number-operator invariant."""
    if not omega0 > 0:
        raise ValueError("omega0 must be positive")
    return omega0 * (n + 0.5)


def invariant_quadrature(n, xi, xidot, phase=0.0, omega0=1.0):
    """``<Psi_n| omega0 [(xi p - xi_dot q)^2 + q^2/(4 xi^2)] |Psi_n>`` by quadrature.

    This is ``omega0 (a^dagger a + 1/2)`` written in ``q, p``. Uses
    ``<A^2> = ||A Psi||^2`` for the Hermitian ``A = xi p - xi_dot q``, with
    ``p Psi = -i dPsi/dq`` from the closed-form derivative.
    """
    Q = quadrature_cutoff(n + 1, xi)

    def kinetic(q):
        psi, dpsi = _psi_and_dq(n, q, xi, xidot, phase)
        return abs(-1j * xi * dpsi - xidot * q * psi) ** 2

    def potential(q):
        psi = psi_values(n, q, xi, xidot, phase)
        return (q / (2 * xi)) ** 2 * abs(psi) ** 2

    k = quad(kinetic, -Q, Q, epsabs=1e-13, epsrel=1e-12, limit=400, points=[0.0])[0]
    p = quad(potential, -Q, Q, epsabs=1e-13, epsrel=1e-12, limit=400, points=[0.0])[0]
    return omega0 * (k + p)
