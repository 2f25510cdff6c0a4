"""Classical time-dependent oscillator, Pinney solutions and complex modes."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Optional

import numpy as np
from scipy.integrate import quad, solve_ivp

from . import _fd
from .models import DomainError, FrequencyModel

__all__ = [
    "IntegrationError",
    "DegenerateSolutionError",
    "Trajectory",
    "PinneyCoefficients",
    "PinneyPoint",
    "ModeFunction",
    "make_grid",
    "integrate_oscillator",
    "integrate_pair",
    "wronskian",
    "pinney_solution",
    "pinney_residual",
    "complex_mode_from_pair",
    "mode_from_squeeze",
    "anchored_mode",
    "phase_integral",
    "ermakov_invariant",
    "ermakov_invariant_printed",
    "gelfand_dikii_residual",
]

DEFAULT_RTOL = 1e-10
DEFAULT_ATOL = 1e-12


class IntegrationError(RuntimeError):
    """The adaptive integrator gave up; ``reached_time`` is the last good time."""

    def __init__(self, message, reached_time):
        super().__init__(f"{message} (reached t={reached_time!r})")
        self.reached_time = reached_time


class DegenerateSolutionError(ValueError):
    pass


def make_grid(span, dt=None, num=None):
    """Uniform grid ``a, a+dt, ...`` not exceeding ``b`` (or ``num`` points)."""
    a, b = (float(x) for x in span)
    if not a < b:
        raise ValueError(f"empty span ({a}, {b})")
    if num is not None:
        return np.linspace(a, b, int(num))
    dt = 1e-3 if dt is None else float(dt)
    if dt <= 0:
        raise ValueError("dt must be positive")
    k = int(math.floor((b - a) / dt + 1e-9))
    return a + dt * np.arange(k + 1)


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Samples ``(u, u_dot)`` of one real solution on a time grid.

    Calling the trajectory evaluates the solver's dense output; knot times
    return the stored samples exactly.
    """

    t: np.ndarray
    u: np.ndarray
    udot: np.ndarray
    dense: Optional[Callable] = field(default=None, repr=False)
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        for name in ("t", "u", "udot"):
            arr = np.array(getattr(self, name), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        if np.any(np.diff(self.t) <= 0):
            raise ValueError("time grid must be strictly increasing")
        if not (np.all(np.isfinite(self.u)) and np.all(np.isfinite(self.udot))):
            raise ValueError("non-finite samples")

    def __call__(self, t):
        """``(u, u_dot)`` at arbitrary ``t`` inside the grid."""
        t = np.asarray(t, dtype=float)
        if self.dense is None:
            raise ValueError("trajectory has no dense output")
        y = np.asarray(self.dense(t))
        u, ud = y[0], y[1]
        idx = np.searchsorted(self.t, t)
        idx = np.clip(idx, 0, self.t.size - 1)
        hit = self.t[idx] == t
        if np.any(hit):
            u = np.where(hit, self.u[idx], u)
            ud = np.where(hit, self.udot[idx], ud)
        return u[()] if u.ndim == 0 else u, ud[()] if ud.ndim == 0 else ud


def _check_span(model, span):
    a, b = (float(x) for x in span)
    if not a < b:
        raise ValueError(f"empty span ({a}, {b})")
    model.domain.check(np.array([a, b]))
    return a, b


def _solve(model, t0, y0, span, grid, rtol, atol, method):
    a, b = _check_span(model, span)
    if not a <= t0 <= b:
        raise ValueError("t0 must lie inside the span")
    if rtol <= 0 or atol <= 0:
        raise ValueError("tolerances must be positive")
    grid = make_grid((a, b)) if grid is None else np.asarray(grid, dtype=float)
    if grid[0] < a or grid[-1] > b:
        raise ValueError("grid must lie inside the span")
    k = len(y0) // 2
    omega2 = model._omega2_raw

    def rhs(t, y):
        w2 = omega2(t)
        return np.concatenate([y[k:], -w2 * y[:k]])

    pieces = []
    for end in (a, b):
        if end == t0:
            continue
        sol = solve_ivp(rhs, (t0, end), y0, method=method, rtol=rtol, atol=atol,
                        dense_output=True)
        if sol.status != 0:
            raise IntegrationError(sol.message, float(sol.t[-1]))
        pieces.append((min(t0, end), max(t0, end), sol.sol))

    if len(pieces) == 1:
        dense = pieces[0][2]
    else:
        def dense(t):
            t = np.asarray(t, dtype=float)
            lo_sol, hi_sol = pieces[0][2], pieces[1][2]
            return np.where(t <= t0, lo_sol(t), hi_sol(t))

    ys = dense(grid)
    return grid, ys, dense


def integrate_oscillator(model: FrequencyModel, t0, u0, udot0, span, rtol=DEFAULT_RTOL,
                         atol=DEFAULT_ATOL, grid=None, method="DOP853") -> Trajectory:
    """Solve ``u'' + omega^2(t) u = 0`` from ``(t0, u0, udot0)`` across ``span``.

    Parameters
    ----------
    model : FrequencyModel
    t0 : float
        Initial time, inside ``span``. Interior values integrate both ways.
    u0, udot0 : float
        Initial position and velocity.
    span : (float, float)
        Time interval; both ends must lie in the model's validity domain.
    rtol, atol : float
        Local error tolerances for the embedded Runge–Kutta pair.
    grid : array_like, optional
        Knot times for the returned samples (default: spacing 1e-3).

    Raises
    ------
    IntegrationError
        If the step size underflows, e.g. near a singular frequency.
    """
    t, ys, dense = _solve(model, float(t0), np.array([u0, udot0], dtype=float), span,
                          grid, rtol, atol, method)
    meta = {"model": model.describe(), "rtol": rtol, "atol": atol,
            "span": [float(span[0]), float(span[1])]}
    return Trajectory(t, ys[0], ys[1], dense, meta)


def integrate_pair(model, t0, u_init, v_init, span, rtol=DEFAULT_RTOL, atol=DEFAULT_ATOL,
                   grid=None, method="DOP853"):
    """Integrate two solutions in one pass; returns ``(u_traj, v_traj)``."""
    y0 = np.array([u_init[0], v_init[0], u_init[1], v_init[1]], dtype=float)
    t, ys, dense = _solve(model, float(t0), y0, span, grid, rtol, atol, method)
    meta = {"model": model.describe(), "rtol": rtol, "atol": atol,
            "span": [float(span[0]), float(span[1])]}

    def du(tt):
        y = dense(tt)
        return np.stack([y[0], y[2]])

    def dv(tt):
        y = dense(tt)
        return np.stack([y[1], y[3]])

    return (Trajectory(t, ys[0], ys[2], du, meta), Trajectory(t, ys[1], ys[3], dv, meta))


def wronskian(u, udot, v, vdot):
    """``u v_dot - v u_dot``."""
    return np.asarray(u) * vdot - np.asarray(v) * udot


@dataclass(frozen=True)
class PinneyCoefficients:
    """Weights of ``x^2 = A u^2 + 2 B u v + C v^2``.

    ``from_squeeze`` stores the hyperbolic parametrisation ``A = C = D cosh r``,
    ``B = D sinh r`` with the angle ``phi`` kept separately; the phase never
    enters the real quadratic form.
    """

    A: float
    B: float
    C: float
    D: Optional[float] = None
    r: Optional[float] = None
    phi: Optional[float] = None

    def __post_init__(self):
        disc = self.A * self.C - self.B ** 2
        if disc < -1e-14 * max(abs(self.A * self.C), self.B ** 2, 1.0):
            raise ValueError(f"need AC >= B^2, got AC - B^2 = {disc}")

    @classmethod
    def from_squeeze(cls, D, r, phi=0.0):
        if not D > 0:
            raise ValueError("D must be positive")
        return cls(D * math.cosh(r), D * math.sinh(r), D * math.cosh(r), D, r, phi)

    @property
    def discriminant(self):
        return self.A * self.C - self.B ** 2

    def angular_momentum(self, wr):
        """``L = Wr[u, v] sqrt(AC - B^2)``."""
        return wr * math.sqrt(max(self.discriminant, 0.0))

    def scaled(self, s):
        return PinneyCoefficients(s * self.A, s * self.B, s * self.C)


class PinneyPoint(NamedTuple):
    x: np.ndarray
    xdot: np.ndarray
    L: float


def _pair_values(u_traj, v_traj, t):
    if t is None:
        if u_traj.t.shape != v_traj.t.shape or np.any(u_traj.t != v_traj.t):
            raise ValueError("trajectories must share a grid")
        return u_traj.u, u_traj.udot, v_traj.u, v_traj.udot
    u, ud = u_traj(t)
    v, vd = v_traj(t)
    return u, ud, v, vd


def pinney_solution(u_traj: Trajectory, v_traj: Trajectory, coeffs: PinneyCoefficients,
                    t=None) -> PinneyPoint:
    """Pinney solution ``x``, its derivative, and the implied ``L``.

    ``t=None`` evaluates on the shared knot grid.
    """
    u, ud, v, vd = _pair_values(u_traj, v_traj, t)
    A, B, C = coeffs.A, coeffs.B, coeffs.C
    x2 = A * u * u + 2 * B * u * v + C * v * v
    if np.any(x2 <= 0):
        raise DegenerateSolutionError("x^2 <= 0: degenerate Pinney combination")
    x = np.sqrt(x2)
    xdot = (A * u * ud + B * (v * ud + u * vd) + C * v * vd) / x
    wr = float(wronskian(u_traj.u[0], u_traj.udot[0], v_traj.u[0], v_traj.udot[0]))
    return PinneyPoint(x, xdot, coeffs.angular_momentum(wr))


def _omega2_on(model_or_omega2, t):
    if isinstance(model_or_omega2, FrequencyModel):
        return np.asarray(model_or_omega2.omega_squared(t), dtype=float)
    if callable(model_or_omega2):
        return np.asarray(model_or_omega2(t), dtype=float)
    return np.broadcast_to(np.asarray(model_or_omega2, dtype=float), np.shape(t))


def pinney_residual(x, t, model, L, return_array=False):
    """Max of ``|x'' + omega^2 x - L^2/x^3|`` over interior knots.

    ``x''`` comes from the five-point central stencil, so ``t`` must be a
    uniform grid of at least five points. ``model`` may also be a callable
    returning ``omega^2(t)`` or a constant.
    """
    x = np.asarray(x, dtype=float)
    t = np.asarray(t, dtype=float)
    if x.size < 5:
        raise ValueError("need at least 5 grid points")
    if np.any(x <= 0):
        raise DomainError("x must be positive")
    h = _fd.uniform_step(t)
    xi = x[2:-2]
    res = _fd.d2_5(x, h) + _omega2_on(model, t[2:-2]) * xi - L * L / xi**3
    return np.abs(res) if return_array else float(np.max(np.abs(res)))


@dataclass(frozen=True, eq=False)
class ModeFunction:
    """Wronskian-normalised complex solution ``w = xi exp(-i theta)``.

    ``theta`` is accumulated from ``theta_dot = 1/(2 xi^2)`` (fourth-order
    Hermite trapezoid on the knots) starting from ``-arg w`` at the first
    knot, so it is continuous and increasing.
    """

    t: np.ndarray
    w: np.ndarray
    wdot: np.ndarray
    dense: Optional[Callable] = field(default=None, repr=False)
    meta: dict = field(default_factory=dict)
    xi: np.ndarray = field(init=False)
    theta: np.ndarray = field(init=False)

    def __post_init__(self):
        t = np.array(self.t, dtype=float)
        w = np.array(self.w, dtype=complex)
        wd = np.array(self.wdot, dtype=complex)
        xi = np.abs(w)
        if np.any(xi <= 0):
            raise DegenerateSolutionError("mode vanishes on the grid")
        f = 0.5 / xi**2
        fp = -np.real(np.conj(w) * wd) / xi**4
        h = np.diff(t)
        steps = 0.5 * h * (f[:-1] + f[1:]) + h * h / 12.0 * (fp[:-1] - fp[1:])
        theta = -np.angle(w[0]) + np.concatenate([[0.0], np.cumsum(steps)])
        for name, arr in (("t", t), ("w", w), ("wdot", wd), ("xi", xi), ("theta", theta)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def wronskian(self):
        """``Wr[w, w*] = w w*_dot - w* w_dot`` at every knot (target: ``i``)."""
        return self.w * np.conj(self.wdot) - np.conj(self.w) * self.wdot

    @property
    def xidot(self):
        return np.real(np.conj(self.w) * self.wdot) / self.xi

    @property
    def theta_dot(self):
        """Phase velocity read off the mode itself, ``-Im(w_dot / w)``."""
        return -np.imag(self.wdot / self.w)

    def __call__(self, t):
        """Dense ``(w, w_dot)`` between knots."""
        if self.dense is None:
            raise ValueError("mode has no dense output")
        return self.dense(np.asarray(t, dtype=float))

    def xi_at(self, t):
        return np.abs(self(t)[0])

    def amplitude_source(self):
        """Callable ``t -> (xi, xi_dot, int_{t0}^t dt'/xi^2)`` with ``t0 = t[0]``."""
        t0 = self.t[0]
        theta0 = self.theta[0]

        def source(tt):
            tt = float(tt)
            w, wd = self(tt)
            xi = abs(w)
            xidot = float(np.real(np.conj(w) * wd)) / xi
            k = int(np.clip(np.searchsorted(self.t, tt, side="right") - 1, 0, self.t.size - 1))
            theta = self.theta[k] + (phase_integral(self, self.t[k], tt) if tt != self.t[k] else 0.0)
            return xi, xidot, 2.0 * (theta - theta0)

        source.t0 = t0
        return source


def _normalised_mode(u_traj, v_traj, alpha, beta, meta):
    u, ud, v, vd = _pair_values(u_traj, v_traj, None)
    wr = float(wronskian(u[0], ud[0], v[0], vd[0]))
    if wr == 0:
        raise DegenerateSolutionError("Wr[u, v] = 0: solutions are dependent")
    # Wr[w, w*] = 2 i Im(alpha conj(beta)) Wr[u, v]
    k = 2.0 * float(np.imag(alpha * np.conj(beta))) * wr
    if k == 0:
        raise DegenerateSolutionError("complex combination is real up to a phase")
    conjugated = k < 0
    if conjugated:
        alpha, beta = np.conj(alpha), np.conj(beta)
        k = -k
    scale = 1.0 / math.sqrt(k)
    a, b = alpha * scale, beta * scale
    w = a * u + b * v
    wd = a * ud + b * vd

    def dense(t):
        uu, uud = u_traj(t)
        vv, vvd = v_traj(t)
        return a * uu + b * vv, a * uud + b * vvd

    meta = dict(meta, normalisation=scale, conjugated=bool(conjugated))
    return ModeFunction(u_traj.t, w, wd, dense, meta)


def complex_mode_from_pair(u_traj: Trajectory, v_traj: Trajectory,
                           coeffs: PinneyCoefficients) -> ModeFunction:
    """``w = sqrt(A) u + (B - i sqrt(AC - B^2))/sqrt(A) v``, rescaled to ``Wr[w, w*] = i``.

    If the combination rotates clockwise the conjugate is used, so the
    returned phase always increases.
    """
    A, B, C = coeffs.A, coeffs.B, coeffs.C
    if not A > 0:
        raise DegenerateSolutionError("A must be positive")
    disc = A * C - B * B
    if not disc > 0:
        raise DegenerateSolutionError("AC = B^2: no complex mode")
    alpha = math.sqrt(A)
    beta = (B - 1j * math.sqrt(disc)) / math.sqrt(A)
    return _normalised_mode(u_traj, v_traj, alpha, beta, dict(u_traj.meta, A=A, B=B, C=C))


def mode_from_squeeze(u_traj, v_traj, D, r, phi) -> ModeFunction:
    """``w ~ (cosh r e^{-i phi/2} u + (sinh r - i) v)``, normalised to ``Wr = i``."""
    if not D > 0:
        raise ValueError("D must be positive")
    pref = math.sqrt(D) / math.sqrt(math.cosh(r))
    alpha = pref * math.cosh(r) * np.exp(-0.5j * phi)
    beta = pref * (math.sinh(r) - 1j)
    return _normalised_mode(u_traj, v_traj, alpha, beta, dict(u_traj.meta, D=D, r=r, phi=phi))


def anchored_mode(model: FrequencyModel, span, grid=None, rtol=DEFAULT_RTOL,
                  atol=DEFAULT_ATOL, t_anchor=None) -> ModeFunction:
    """Numerical mode whose amplitude should reproduce the model's ``xi``.

    Initial data at ``t_anchor`` (default: left end of ``span``):
    ``w = xi``, ``w_dot = xi_dot - i/(2 xi)``, the unique normalised value
    with zero phase. Integrates ``u = Re w`` and ``v = -Im w`` and combines
    them with ``A = C = 1, B = 0``.
    """
    t0 = float(span[0]) if t_anchor is None else float(t_anchor)
    g, e = model.amplitude_squared(t0), model.epsilon(t0)
    xi0 = math.sqrt(g)
    w0 = complex(xi0, 0.0)
    wd0 = complex(e / (2 * xi0), -1.0 / (2 * xi0))
    u_tr, v_tr = integrate_pair(model, t0, (w0.real, wd0.real), (-w0.imag, -wd0.imag),
                                span, rtol, atol, grid)
    return complex_mode_from_pair(u_tr, v_tr, PinneyCoefficients(1.0, 0.0, 1.0))


def phase_integral(xi, t_a, t_b, rtol=1e-10):
    """``int_{t_a}^{t_b} dt / (2 xi^2)`` by adaptive Gauss–Kronrod quadrature.

    ``xi`` is a callable or a :class:`ModeFunction` (its dense output is used).
    """
    f = xi.xi_at if isinstance(xi, ModeFunction) else xi

    def integrand(t):
        x = float(f(t))
        if not x > 0:
            raise DomainError(f"xi vanishes at t={t}")
        return 0.5 / (x * x)

    val, err = quad(integrand, float(t_a), float(t_b), epsrel=rtol, epsabs=0.0, limit=500)
    if not np.isfinite(val) or err > max(1e3 * rtol * abs(val), 1e-300):
        raise DomainError("phase quadrature failed to converge (xi -> 0?)")
    return val


def ermakov_invariant(q, qdot, xi, xidot):
    """Classical Ermakov–Lewis invariant along a trajectory ``q(t)``.

    ``I = ((x q_dot - x_dot q)^2 + (q/x)^2) / 2`` with ``x = sqrt(2) xi``, i.e.
    ``(xi q_dot - xi_dot q)^2 + q^2 / (4 xi^2)``. With ``xi`` normalised by
    ``xi'' + omega^2 xi = 1/(4 xi^3)`` this is the combination that stays
    constant, and it equals ``a^dagger a + 1/2`` after quantisation.
    """
    q, qdot, xi, xidot = (np.asarray(a, dtype=float) for a in (q, qdot, xi, xidot))
    if np.any(xi <= 0):
        raise DomainError("xi must be positive")
    out = (xi * qdot - xidot * q) ** 2 + (q / (2 * xi)) ** 2
    return out[()] if out.ndim == 0 else out


def ermakov_invariant_printed(q, qdot, xi, xidot):
    """``((xi q_dot - xi_dot q)^2 + (q/xi)^2) / 2`` with ``xi`` left unscaled.

    Not conserved for the ``1/(4 xi^3)`` normalisation; kept to document that.
    """
    q, qdot, xi, xidot = (np.asarray(a, dtype=float) for a in (q, qdot, xi, xidot))
    out = 0.5 * ((xi * qdot - xidot * q) ** 2 + (q / xi) ** 2)
    return out[()] if out.ndim == 0 else out


def gelfand_dikii_residual(G, t, model, domega2=None):
    """Max of ``|G''' + 4 omega^2 G' + 2 (omega^2)' G|`` on interior knots.

    Seven-point stencils for ``G'`` and ``G'''``. ``(omega^2)'`` is taken from
    the model when it provides one, else from ``domega2`` or by differencing.
    """
    G = np.asarray(G, dtype=float)
    t = np.asarray(t, dtype=float)
    if G.size < 7:
        raise ValueError("need at least 7 grid points")
    h = _fd.uniform_step(t)
    ti = t[3:-3]
    if isinstance(model, FrequencyModel):
        w2, dw2, _ = model.omega_squared_derivatives(ti)
    else:
        w2 = _omega2_on(model, ti)
        if domega2 is not None:
            dw2 = _omega2_on(domega2, ti)
        else:
            dw2 = _fd.d1_5_scalar(lambda s: _omega2_on(model, s), ti, 1e-4)
    res = _fd.d3_7(G, h) + 4 * w2 * _fd.d1_7(G, h) + 2 * dw2 * G[3:-3]
    return float(np.max(np.abs(res)))
