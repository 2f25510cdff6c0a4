"""Time-dependent frequencies built from a prescribed amplitude profile.

Every catalog model is specified through its squared amplitude ``xi2(t)``.
The frequency follows from

    omega^2 = (1 + eps^2 - 2 eps_dot xi2) / (4 xi2^2),   eps = d(xi2)/dt,

which makes ``xi`` an exact solution of the auxiliary equation
``xi'' + omega^2 xi = 1 / (4 xi^3)`` by construction. Units: hbar = m = 1.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, ClassVar, Optional

import numpy as np
from scipy.interpolate import PchipInterpolator
from scipy.optimize import bisect
from scipy.special import hankel2

__all__ = [
    "DomainError",
    "UnsupportedOperation",
    "ValidityDomain",
    "FrequencyModel",
    "Constant",
    "Exponential",
    "HyperbolicCosh",
    "HyperbolicSinh",
    "PowerLaw",
    "LogAmplitude",
    "OscillatoryCos",
    "OscillatorySin",
    "Tabulated",
    "CustomAmplitude",
    "CATALOG",
    "construct_frequency",
    "amplitude_squared",
    "epsilon",
    "epsilon_dot",
    "omega_squared",
    "closed_form_mode",
    "find_frequency_zero",
    "printed_omega_squared",
    "corrected_omega_squared",
    "hankel_mode_experimental",
    "model_from_dict",
    "model_to_dict",
]


class DomainError(ValueError):
    """Raised when a model is evaluated outside its validity domain."""


class UnsupportedOperation(TypeError):
    """Raised when an operation has no meaning for a model variant."""


@dataclass(frozen=True)
class ValidityDomain:
    """Open time interval ``(t_min, t_max)`` on which a model is defined.

    ``inclusive`` closes the interval, which is what tabulated data needs.
    """

    t_min: float = -math.inf
    t_max: float = math.inf
    reason: str = "defined for all t"
    inclusive: bool = False

    def __post_init__(self):
        if not self.t_min < self.t_max:
            raise ValueError(f"empty domain ({self.t_min}, {self.t_max})")

    def contains(self, t):
        t = np.asarray(t, dtype=float)
        if self.inclusive:
            return (t >= self.t_min) & (t <= self.t_max)
        return (t > self.t_min) & (t < self.t_max)

    def check(self, t):
        ok = self.contains(t)
        if not np.all(ok):
            bad = np.atleast_1d(np.asarray(t, dtype=float))[~np.atleast_1d(ok)][0]
            raise DomainError(
                f"t={float(bad)!r} outside ({self.t_min}, {self.t_max}): {self.reason}"
            )

    def restrict(self, t_min, t_max):
        """Sub-domain; the new interval must lie inside this one."""
        t_min = self.t_min if t_min is None else float(t_min)
        t_max = self.t_max if t_max is None else float(t_max)
        if t_min < self.t_min or t_max > self.t_max:
            raise DomainError(
                f"requested domain ({t_min}, {t_max}) exceeds natural domain "
                f"({self.t_min}, {self.t_max}): {self.reason}"
            )
        return ValidityDomain(t_min, t_max, self.reason, self.inclusive)


def construct_frequency(xi_squared, epsilon, epsilon_dot):
    """Squared frequency realising a given amplitude profile.

    Parameters
    ----------
    xi_squared : float or ndarray
        Squared amplitude, must be positive.
    epsilon, epsilon_dot : float or ndarray
        First and second time derivatives of ``xi_squared``.

    Returns
    -------
    float or ndarray
        ``(1 + eps^2 - 2 eps_dot xi2) / (4 xi2^2)``. Negative values mark an
        unstable (inverted) oscillator and are not an error.
    """
    g = np.asarray(xi_squared, dtype=float)
    if np.any(~(g > 0)):
        raise DomainError("xi_squared must be positive")
    e = np.asarray(epsilon, dtype=float)
    ed = np.asarray(epsilon_dot, dtype=float)
    out = (1.0 + e * e - 2.0 * ed * g) / (4.0 * g * g)
    return out[()] if out.ndim == 0 else out


def _omega2_jet(g0, g1, g2, g3, g4):
    # omega^2 = N / D with N = 1 + g1^2 - 2 g2 g0, D = 4 g0^2; note N' = -2 g0 g3.
    N = 1.0 + g1 * g1 - 2.0 * g2 * g0
    N1 = -2.0 * g0 * g3
    N2 = -2.0 * (g1 * g3 + g0 * g4)
    D = 4.0 * g0 * g0
    D1 = 8.0 * g0 * g1
    D2 = 8.0 * (g1 * g1 + g0 * g2)
    w2 = N / D
    dw2 = (N1 * D - N * D1) / (D * D)
    ddw2 = N2 / D - 2.0 * N1 * D1 / D**2 - N * D2 / D**2 + 2.0 * N * D1**2 / D**3
    return w2, dw2, ddw2


class FrequencyModel:
    """Base class for the frequency catalog.

    Subclasses provide ``_jet(t)`` returning ``xi2`` and its first four time
    derivatives. All public methods accept scalars or arrays and check the
    validity domain first.
    """

    variant: ClassVar[str] = ""
    label: ClassVar[str] = ""
    domain_rule: ClassVar[str] = ""

    @property
    def domain(self) -> ValidityDomain:
        custom = getattr(self, "user_domain", None)
        natural = self._natural_domain()
        if custom is None:
            return natural
        return natural.restrict(*custom)

    def _natural_domain(self) -> ValidityDomain:
        return ValidityDomain()

    def params(self) -> dict:
        raise NotImplementedError

    def _jet(self, t):
        raise UnsupportedOperation(f"{self.variant} has no amplitude profile")

    def _checked(self, t):
        t = np.asarray(t, dtype=float)
        self.domain.check(t)
        return t

    def xi2_jet(self, t):
        """``(xi2, eps, eps_dot, eps_ddot, eps_dddot)`` at ``t``."""
        return self._jet(self._checked(t))

    def amplitude_squared(self, t):
        return _out(self.xi2_jet(t)[0])

    def epsilon(self, t):
        return _out(self.xi2_jet(t)[1])

    def epsilon_dot(self, t):
        return _out(self.xi2_jet(t)[2])

    def omega_squared(self, t):
        g = self.xi2_jet(t)
        return construct_frequency(g[0], g[1], g[2])

    def omega_squared_derivatives(self, t):
        """``(omega^2, d omega^2/dt, d^2 omega^2/dt^2)``."""
        return tuple(_out(a) for a in _omega2_jet(*self.xi2_jet(t)))

    def omega_derivatives(self, t):
        """``(omega, omega_dot, omega_ddot)``; needs ``omega^2 > 0``."""
        w2, dw2, ddw2 = (np.asarray(a) for a in self.omega_squared_derivatives(t))
        if np.any(w2 <= 0):
            raise DomainError("omega^2 <= 0: turning point")
        w = np.sqrt(w2)
        wd = dw2 / (2.0 * w)
        wdd = (ddw2 - 2.0 * wd * wd) / (2.0 * w)
        return _out(w), _out(wd), _out(wdd)

    def _omega2_raw(self, t):
        # Unchecked scalar evaluation for ODE right-hand sides.
        g = self._jet(np.asarray(t, dtype=float))
        return (1.0 + g[1] * g[1] - 2.0 * g[2] * g[0]) / (4.0 * g[0] * g[0])

    def describe(self) -> str:
        p = ", ".join(f"{k}={v!r}" for k, v in self.params().items())
        return f"{self.variant}({p})"


def _out(a):
    a = np.asarray(a)
    return a[()] if a.ndim == 0 else a


def _positive(name, value):
    if not value > 0:
        raise ValueError(f"{name} must be positive, got {value!r}")
    return float(value)


@dataclass(frozen=True)
class Constant(FrequencyModel):
    omega0: float
    user_domain: Optional[tuple] = None

    variant: ClassVar[str] = "constant"
    label: ClassVar[str] = "static oscillator, xi2 = 1/(2 omega0)"
    domain_rule: ClassVar[str] = "all t"

    def __post_init__(self):
        _positive("omega0", self.omega0)

    def params(self):
        return {"omega0": self.omega0}

    def _jet(self, t):
        g = np.full_like(t, 1.0 / (2.0 * self.omega0))
        z = np.zeros_like(t)
        return g, z, z, z, z

    def omega_squared(self, t):
        t = self._checked(t)
        return _out(np.full_like(t, self.omega0**2))


@dataclass(frozen=True)
class Exponential(FrequencyModel):
    """``xi2 = eps0 exp(lam t) / lam``."""

    epsilon0: float
    lam: float
    user_domain: Optional[tuple] = None

    variant: ClassVar[str] = "exponential"
    label: ClassVar[str] = "exponential amplitude; omega^2 changes sign at t0 = -ln(eps0)/lam"
    domain_rule: ClassVar[str] = "all t (requires lam > 0 so that xi2 > 0)"

    def __post_init__(self):
        _positive("epsilon0", self.epsilon0)
        if self.lam == 0:
            raise ValueError("lam must be non-zero")
        if self.lam < 0:
            raise ValueError("lam < 0 with epsilon0 > 0 gives xi2 < 0 everywhere")

    def params(self):
        return {"epsilon0": self.epsilon0, "lam": self.lam}

    def _jet(self, t):
        e = self.epsilon0 * np.exp(self.lam * t)
        lam = self.lam
        return e / lam, e, lam * e, lam**2 * e, lam**3 * e


@dataclass(frozen=True)
class HyperbolicCosh(FrequencyModel):
    """``xi2 = eps0 tau cosh(t/tau)``."""

    epsilon0: float
    tau: float
    user_domain: Optional[tuple] = None

    variant: ClassVar[str] = "hyperbolic_cosh"
    label: ClassVar[str] = "1/cosh^2 frequency: second Pöschl–Teller potential"
    domain_rule: ClassVar[str] = "all t (requires tau > 0)"

    def __post_init__(self):
        _positive("epsilon0", self.epsilon0)
        if self.tau == 0:
            raise ValueError("tau must be non-zero")
        if self.tau < 0:
            raise ValueError("tau < 0 gives xi2 < 0 everywhere")

    def params(self):
        return {"epsilon0": self.epsilon0, "tau": self.tau}

    def _jet(self, t):
        s = t / self.tau
        c, sh = np.cosh(s), np.sinh(s)
        e0, tau = self.epsilon0, self.tau
        return e0 * tau * c, e0 * sh, e0 * c / tau, e0 * sh / tau**2, e0 * c / tau**3


@dataclass(frozen=True)
class HyperbolicSinh(FrequencyModel):
    """``xi2 = eps0 tau sinh(t/tau)``; positive only for t > 0 (either sign of tau)."""

    epsilon0: float
    tau: float
    user_domain: Optional[tuple] = None

    variant: ClassVar[str] = "hyperbolic_sinh"
    label: ClassVar[str] = "1/sinh^2 frequency: second Pöschl–Teller potential"
    domain_rule: ClassVar[str] = "t > 0 (xi2 > 0)"

    def __post_init__(self):
        _positive("epsilon0", self.epsilon0)
        if self.tau == 0:
            raise ValueError("tau must be non-zero")

    def _natural_domain(self):
        return ValidityDomain(0.0, math.inf, "xi2 = eps0 tau sinh(t/tau) > 0 requires t > 0")

    def params(self):
        return {"epsilon0": self.epsilon0, "tau": self.tau}

    def _jet(self, t):
        s = t / self.tau
        c, sh = np.cosh(s), np.sinh(s)
        e0, tau = self.epsilon0, self.tau
        return e0 * tau * sh, e0 * c, e0 * sh / tau, e0 * c / tau**2, e0 * sh / tau**3


@dataclass(frozen=True)
class PowerLaw(FrequencyModel):
    """``xi2 = tau eps0 / (n+1) (t/tau)^(n+1)`` for t > 0."""

    epsilon0: float
    tau: float
    n: float
    user_domain: Optional[tuple] = None

    variant: ClassVar[str] = "power_law"
    label: ClassVar[str] = "power-law amplitude; cross-over in sign of omega^2 for n > 1"
    domain_rule: ClassVar[str] = "t > 0 (requires n > -1 so that xi2 > 0)"

    def __post_init__(self):
        _positive("epsilon0", self.epsilon0)
        _positive("tau", self.tau)
        if self.n == -1:
            raise ValueError("n = -1 is the log_amplitude variant")
        if self.n < -1:
            raise ValueError("n < -1 gives xi2 < 0")

    def _natural_domain(self):
        return ValidityDomain(0.0, math.inf, "(t/tau)^(n+1) requires t > 0")

    def params(self):
        return {"epsilon0": self.epsilon0, "tau": self.tau, "n": self.n}

    def _jet(self, t):
        s = t / self.tau
        e0, tau, n = self.epsilon0, self.tau, self.n
        out = []
        coeff = 1.0
        for k in range(5):
            out.append(e0 * tau ** (1 - k) / (n + 1) * coeff * s ** (n + 1 - k))
            coeff *= n + 1 - k
        return tuple(out)


@dataclass(frozen=True)
class LogAmplitude(FrequencyModel):
    """``xi2 = eps0 tau ln t``, the n = -1 member of the power-law family."""

    epsilon0: float
    tau: float
    user_domain: Optional[tuple] = None

    variant: ClassVar[str] = "log_amplitude"
    label: ClassVar[str] = "logarithmic amplitude (power law n = -1)"
    domain_rule: ClassVar[str] = "t > 1 (ln t > 0)"

    def __post_init__(self):
        _positive("epsilon0", self.epsilon0)
        _positive("tau", self.tau)

    def _natural_domain(self):
        return ValidityDomain(1.0, math.inf, "ln t > 0 requires t > 1")

    def params(self):
        return {"epsilon0": self.epsilon0, "tau": self.tau}

    def _jet(self, t):
        k = self.epsilon0 * self.tau
        return k * np.log(t), k / t, -k / t**2, 2 * k / t**3, -6 * k / t**4


@dataclass(frozen=True)
class OscillatoryCos(FrequencyModel):
    """``xi2 = a + b cos(2 omega0 t)`` with a > |b|."""

    a: float
    b: float
    omega0: float
    user_domain: Optional[tuple] = None

    variant: ClassVar[str] = "oscillatory_cos"
    label: ClassVar[str] = "oscillating amplitude; a = 0 limit is the first Pöschl–Teller potential"
    domain_rule: ClassVar[str] = "all t (requires a > |b|)"

    def __post_init__(self):
        if not self.a > abs(self.b):
            raise ValueError("need a > |b| so that xi2 never vanishes")

    def params(self):
        return {"a": self.a, "b": self.b, "omega0": self.omega0}

    def _jet(self, t):
        w, b = self.omega0, self.b
        c, s = np.cos(2 * w * t), np.sin(2 * w * t)
        return (self.a + b * c, -2 * b * w * s, -4 * b * w**2 * c,
                8 * b * w**3 * s, 16 * b * w**4 * c)


@dataclass(frozen=True)
class OscillatorySin(FrequencyModel):
    """``xi2 = a + b sin(2 omega0 t)`` with a > |b|."""

    a: float
    b: float
    omega0: float
    user_domain: Optional[tuple] = None

    variant: ClassVar[str] = "oscillatory_sin"
    label: ClassVar[str] = "oscillating amplitude (sine phase); first Pöschl–Teller family"
    domain_rule: ClassVar[str] = "all t (requires a > |b|)"

    def __post_init__(self):
        if not self.a > abs(self.b):
            raise ValueError("need a > |b| so that xi2 never vanishes")

    def params(self):
        return {"a": self.a, "b": self.b, "omega0": self.omega0}

    def _jet(self, t):
        w, b = self.omega0, self.b
        c, s = np.cos(2 * w * t), np.sin(2 * w * t)
        return (self.a + b * s, 2 * b * w * c, -4 * b * w**2 * s,
                -8 * b * w**3 * c, 16 * b * w**4 * s)


@dataclass(frozen=True, eq=False)
class Tabulated(FrequencyModel):
    """Sampled ``omega^2`` with monotone-cubic (default) or linear interpolation.

    There is no amplitude profile attached; ``amplitude_squared`` and friends
    raise :class:`UnsupportedOperation`.
    """

    times: np.ndarray
    omega_squared_samples: np.ndarray
    interp: str = "monotone_cubic"
    user_domain: Optional[tuple] = None
    _spline: object = field(init=False, repr=False, compare=False)

    variant: ClassVar[str] = "tabulated"
    label: ClassVar[str] = "user-sampled omega^2(t)"
    domain_rule: ClassVar[str] = "[times[0], times[-1]]"

    def __post_init__(self):
        t = np.array(self.times, dtype=float)
        y = np.array(self.omega_squared_samples, dtype=float)
        if t.ndim != 1 or t.shape != y.shape or t.size < 2:
            raise ValueError("times and omega_squared must be 1-d arrays of equal length >= 2")
        if np.any(np.diff(t) <= 0):
            raise ValueError("times must be strictly increasing")
        if not np.all(np.isfinite(y)):
            raise ValueError("omega_squared samples must be finite")
        if self.interp not in ("monotone_cubic", "linear"):
            raise ValueError(f"unknown interpolation {self.interp!r}")
        t.setflags(write=False)
        y.setflags(write=False)
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "omega_squared_samples", y)
        spline = PchipInterpolator(t, y) if self.interp == "monotone_cubic" else None
        object.__setattr__(self, "_spline", spline)

    def _natural_domain(self):
        return ValidityDomain(float(self.times[0]), float(self.times[-1]),
                              "tabulated range", inclusive=True)

    def params(self):
        return {"times": self.times.tolist(),
                "omega_squared": self.omega_squared_samples.tolist(),
                "interp": self.interp}

    def _omega2_raw(self, t):
        if self._spline is not None:
            return self._spline(t)
        return np.interp(t, self.times, self.omega_squared_samples)

    def omega_squared(self, t):
        return _out(self._omega2_raw(self._checked(t)))

    def omega_squared_derivatives(self, t):
        t = self._checked(t)
        if self._spline is not None:
            return (_out(self._spline(t)), _out(self._spline(t, 1)), _out(self._spline(t, 2)))
        # piecewise-linear: slope of the containing segment, zero curvature
        idx = np.clip(np.searchsorted(self.times, t, side="right") - 1, 0, self.times.size - 2)
        slope = np.diff(self.omega_squared_samples) / np.diff(self.times)
        return _out(self._omega2_raw(t)), _out(slope[idx]), _out(np.zeros_like(t))


@dataclass(frozen=True)
class CustomAmplitude(FrequencyModel):
    """Frequency generated by a user-supplied squared amplitude.

    ``xi2`` must accept ndarrays. Missing derivatives are taken by central
    differences with step ``h = fd_step or max(|t|, 1) * cbrt(eps)``.
    """

    xi2: Callable
    dxi2: Optional[Callable] = None
    ddxi2: Optional[Callable] = None
    fd_step: Optional[float] = None
    user_domain: Optional[tuple] = None

    variant: ClassVar[str] = "custom_amplitude"
    label: ClassVar[str] = "user amplitude profile"
    domain_rule: ClassVar[str] = "user supplied"

    def params(self):
        return {"xi2": getattr(self.xi2, "__name__", repr(self.xi2))}

    def _step(self, t, order):
        if self.fd_step is not None and order <= 2:
            return np.full_like(t, self.fd_step)
        # eps^(1/(k+2)) balances truncation and roundoff for the k-th derivative
        return np.maximum(np.abs(t), 1.0) * np.finfo(float).eps ** (1.0 / (order + 2))

    def _d(self, f, t, order):
        h = self._step(t, order)
        if order == 1:
            return (f(t + h) - f(t - h)) / (2 * h)
        if order == 2:
            return (f(t + h) - 2 * f(t) + f(t - h)) / h**2
        if order == 3:
            return (f(t + 2 * h) - 2 * f(t + h) + 2 * f(t - h) - f(t - 2 * h)) / (2 * h**3)
        return (f(t + 2 * h) - 4 * f(t + h) + 6 * f(t) - 4 * f(t - h) + f(t - 2 * h)) / h**4

    def _jet(self, t):
        g = np.asarray(self.xi2(t), dtype=float)
        g1 = np.asarray(self.dxi2(t), dtype=float) if self.dxi2 else self._d(self.xi2, t, 1)
        if self.ddxi2:
            g2 = np.asarray(self.ddxi2(t), dtype=float)
        elif self.dxi2:
            g2 = self._d(self.dxi2, t, 1)
        else:
            g2 = self._d(self.xi2, t, 2)
        g3 = self._d(self.xi2, t, 3)
        g4 = self._d(self.xi2, t, 4)
        return g, g1, g2, g3, g4


CATALOG = (Constant, Exponential, HyperbolicCosh, HyperbolicSinh, PowerLaw,
           LogAmplitude, OscillatoryCos, OscillatorySin)


# Spec-facing free functions -------------------------------------------------

def amplitude_squared(model: FrequencyModel, t):
    return model.amplitude_squared(t)


def epsilon(model: FrequencyModel, t):
    return model.epsilon(t)


def epsilon_dot(model: FrequencyModel, t):
    return model.epsilon_dot(t)


def omega_squared(model: FrequencyModel, t):
    return model.omega_squared(t)


def closed_form_mode(model: FrequencyModel, t):
    """Exact Wronskian-normalised positive-frequency mode ``(w, w_dot)``.

    Only the static oscillator and the ``n = 0`` power law have a vetted
    closed form; every other variant returns ``None``.

    The power-law mode is ``w = t^p`` up to normalisation, with
    ``p = 1/2 - i/(2 eps0)`` when ``tau = 1``; for general ``tau`` the
    amplitude is ``sqrt(eps0 t)`` and the phase ``ln(t)/(2 eps0)``.
    """
    if isinstance(model, Constant):
        t = model._checked(t)
        w = np.exp(-1j * model.omega0 * t) / math.sqrt(2 * model.omega0)
        return _out(w), _out(-1j * model.omega0 * w)
    if isinstance(model, PowerLaw) and model.n == 0:
        t = model._checked(t)
        e0 = model.epsilon0
        w = np.sqrt(e0 * t) * np.exp(-1j * np.log(t) / (2 * e0))
        wdot = w * (0.5 - 0.5j / e0) / t
        return _out(w), _out(wdot)
    return None


def hankel_mode_experimental(model: PowerLaw, t, *, experimental: bool = False):
    """Hankel-function power-law mode in its commonly printed form.

    The printed order ``(n^2 + n - 1)/(4n)`` and argument linear in ``t`` do
    not solve the power-law oscillator in general; this is exposed only for
    residual comparisons and requires ``experimental=True``.
    """
    if not experimental:
        raise UnsupportedOperation("Hankel power-law mode requires experimental=True")
    if not isinstance(model, PowerLaw) or model.n == 0:
        raise UnsupportedOperation("defined for power_law with n != 0")
    t = model._checked(t)
    n = model.n
    nu = (n * n + n - 1) / (4 * n)
    k = (n + 1) / (2 * model.epsilon0 * model.tau * n)
    w = np.sqrt(np.pi * t) / 2 * hankel2(nu, k * t)
    return _out(w)


def printed_omega_squared(model: FrequencyModel, t):
    """Closed-form frequencies exactly as commonly printed for each family.

    Two of these (exponential, general power law) differ from what the
    amplitude profile actually generates; :func:`omega_squared` is the
    authoritative value and these serve as regression cross-checks.
    """
    t = model._checked(t)
    if isinstance(model, Exponential):
        e0, lam = model.epsilon0, model.lam
        out = (lam / (2 * e0)) ** 2 * np.exp(2 * lam * t) - lam**2 / 4
    elif isinstance(model, HyperbolicCosh):
        e0, tau = model.epsilon0, model.tau
        out = (1 - e0**2) / (4 * (e0 * tau) ** 2) / np.cosh(t / tau) ** 2 - 1 / (4 * tau**2)
    elif isinstance(model, HyperbolicSinh):
        e0, tau = model.epsilon0, model.tau
        out = (1 + e0**2) / (4 * (e0 * tau) ** 2) / np.sinh(t / tau) ** 2 - 1 / (4 * tau**2)
    elif isinstance(model, PowerLaw):
        e0, tau, n = model.epsilon0, model.tau, model.n
        s = t / tau
        if n == 0:
            out = (1 + e0**2) / (4 * (e0 * t) ** 2)
        else:
            out = ((n + 1) ** 2 + e0**2 * (1 - n) * (n + 1) ** 2 * s ** (2 * n)) / (
                4 * (e0 * tau) ** 2 * s ** (2 * n + 2))
    elif isinstance(model, LogAmplitude):
        k = model.epsilon0 * model.tau
        out = (t**2 + k**2 + 2 * k**2 * np.log(t)) / (4 * (k * t) ** 2 * np.log(t) ** 2)
    elif isinstance(model, (OscillatoryCos, OscillatorySin)):
        a, b, w = model.a, model.b, model.omega0
        trig = np.cos(2 * w * t) if isinstance(model, OscillatoryCos) else np.sin(2 * w * t)
        out = (1 - 4 * (a**2 - b**2) * w**2) / (4 * (a + b * trig) ** 2) + w**2
    elif isinstance(model, Constant):
        out = np.full_like(t, model.omega0**2)
    else:
        raise UnsupportedOperation(f"no printed closed form for {model.variant}")
    return _out(out)


def corrected_omega_squared(model: FrequencyModel, t):
    """Closed forms that agree with the amplitude pipeline.

    Exponential: ``(lam/2 eps0)^2 exp(-2 lam t) - lam^2/4``.
    Power law: numerator coefficient ``eps0^2 (1-n)(n+1)`` (one power of
    ``n+1`` fewer than usually printed).
    """
    t = model._checked(t)
    if isinstance(model, Exponential):
        e0, lam = model.epsilon0, model.lam
        return _out((lam / (2 * e0)) ** 2 * np.exp(-2 * lam * t) - lam**2 / 4)
    if isinstance(model, PowerLaw):
        e0, tau, n = model.epsilon0, model.tau, model.n
        s = t / tau
        return _out(((n + 1) ** 2 + e0**2 * (1 - n) * (n + 1) * s ** (2 * n)) / (
            4 * (e0 * tau) ** 2 * s ** (2 * n + 2)))
    return printed_omega_squared(model, t)


def find_frequency_zero(model: FrequencyModel, bracket, rtol: float = 1e-12) -> float:
    """Bisection root of ``omega^2(t)`` inside ``bracket``."""
    a, b = (float(x) for x in bracket)
    fa, fb = float(model.omega_squared(a)), float(model.omega_squared(b))
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    if np.sign(fa) == np.sign(fb):
        raise ValueError(f"omega^2 has no sign change on [{a}, {b}]")
    return bisect(lambda t: float(model.omega_squared(t)), a, b,
                  xtol=1e-15, rtol=max(rtol, 4 * np.finfo(float).eps), maxiter=500)


# JSON round trip -------------------------------------------------------------

_PARAM_ALIASES = {"epsilon0": "epsilon0", "eps0": "epsilon0", "lambda": "lam",
                  "lam": "lam", "tau": "tau", "n": "n", "a": "a", "b": "b",
                  "omega0": "omega0"}

_VARIANTS = {cls.variant: cls for cls in CATALOG}


def model_from_dict(doc: dict) -> FrequencyModel:
    """Build a model from its JSON description.

    ``{"variant": "hyperbolic_cosh", "params": {"epsilon0": 0.5, "tau": 1.0},
    "domain": [t_min, t_max]}``, or for sampled data
    ``{"variant": "tabulated", "times": [...], "omega_squared": [...],
    "interp": "monotone_cubic"}``.
    """
    variant = doc.get("variant")
    domain = doc.get("domain")
    user_domain = None if domain is None else (
        None if domain[0] is None else float(domain[0]),
        None if domain[1] is None else float(domain[1]))
    if variant == "tabulated":
        model = Tabulated(doc["times"], doc["omega_squared"],
                          doc.get("interp", "monotone_cubic"), user_domain)
    elif variant in _VARIANTS:
        raw = doc.get("params", {})
        try:
            kwargs = {_PARAM_ALIASES[k]: float(v) for k, v in raw.items()}
        except KeyError as exc:
            raise ValueError(f"unknown parameter {exc.args[0]!r} for {variant}") from None
        model = _VARIANTS[variant](**kwargs, user_domain=user_domain)
    else:
        raise ValueError(f"unknown model variant {variant!r}")
    model.domain  # validates user_domain against the natural one
    return model


def model_to_dict(model: FrequencyModel) -> dict:
    if isinstance(model, Tabulated):
        doc = {"variant": "tabulated", **{
            "times": model.times.tolist(),
            "omega_squared": model.omega_squared_samples.tolist(),
            "interp": model.interp}}
    else:
        doc = {"variant": model.variant, "params": model.params()}
    if getattr(model, "user_domain", None) is not None:
        doc["domain"] = list(model.user_domain)
    return doc
