"""Self-validation suite: property checks and documented closed-form discrepancies.

Every check yields records ``{check, model, max_err, tol, pass}``; the
``kind`` field separates ordinary checks from ``expected_discrepancy``
entries, which pass when the misprinted closed form is shown to fail the
amplitude equation while the pipeline value satisfies it.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np
from scipy.stats import qmc

from . import _fd
from .dynamics import (PinneyCoefficients, Trajectory, anchored_mode, complex_mode_from_pair,
                       ermakov_invariant, ermakov_invariant_printed, gelfand_dikii_residual,
                       integrate_oscillator, integrate_pair, make_grid, mode_from_squeeze,
                       phase_integral, pinney_residual, pinney_solution, wronskian)
from .models import (Constant, Exponential, HyperbolicCosh, HyperbolicSinh, LogAmplitude,
                     OscillatoryCos, OscillatorySin, PowerLaw, construct_frequency,
                     corrected_omega_squared, find_frequency_zero, hankel_mode_experimental,
                     printed_omega_squared)
from .perturbation import (PerturbationState, adiabatic_parameter, convergence_report, iterate,
                           iterate_to, wkb_second_order)
from .quantum import (catalog_amplitude_source, invariant_expectation, invariant_quadrature,
                      norm, overlap, schrodinger_residual, uncertainties)

__all__ = ["catalog_cases", "MODULES", "run_validation", "richardson_slopes"]

TIGHT = dict(rtol=1e-12, atol=1e-14)


def catalog_cases():
    """One representative parameter set and span per amplitude family."""
    return [
        (Exponential(1.0, 1.0), (-2.0, 1.5)),
        (HyperbolicCosh(0.5, 1.0), (-3.0, 3.0)),
        (HyperbolicSinh(0.5, 1.0), (0.5, 3.0)),
        (PowerLaw(1.0, 1.0, 2.0), (0.5, 2.0)),
        (LogAmplitude(1.0, 1.0), (1.5, 4.0)),
        (OscillatoryCos(1.0, 0.5, 1.0), (0.0, 6.0)),
        (OscillatorySin(1.0, 0.5, 1.0), (0.0, 6.0)),
    ]


def all_cases():
    return [(Constant(1.0), (0.0, 2 * math.pi))] + catalog_cases()


def _rec(check, model, max_err, tol, passed=None, **extra):
    max_err = float(max_err)
    if passed is None:
        passed = bool(max_err <= tol)
    out = {"check": check, "model": model if isinstance(model, str) else model.describe(),
           "max_err": max_err, "tol": float(tol), "pass": bool(passed), "kind": "check"}
    out.update(extra)
    return out


def random_coefficients(rng, k=3):
    """Admissible ``(A, B, C)`` with ``|B| <= sqrt(AC)/2``."""
    out = []
    for _ in range(k):
        A, C = rng.uniform(0.5, 2.0, size=2)
        B = rng.uniform(-0.5, 0.5) * math.sqrt(A * C)
        out.append(PinneyCoefficients(float(A), float(B), float(C)))
    return out


def mode_pair(mode):
    """Real solutions ``u = Re w``, ``v = -Im w`` of an anchored mode."""
    def du(t):
        w, wd = mode(t)
        return np.stack([np.real(w), np.real(wd)])

    def dv(t):
        w, wd = mode(t)
        return np.stack([-np.imag(w), -np.imag(wd)])

    return (Trajectory(mode.t, mode.w.real, mode.wdot.real, du),
            Trajectory(mode.t, -mode.w.imag, -mode.wdot.imag, dv))


def richardson_slopes(values):
    v = np.asarray(values, dtype=float)
    return np.log2(v[:-1] / v[1:])


# frequency_models ------------------------------------------------------------

def check_fd_consistency(rng):
    out = []
    sampler = qmc.Halton(1, seed=int(rng.integers(2**31)))
    u = sampler.random(100)[:, 0]
    for model, (a, b) in all_cases():
        t = a + (b - a) * u
        h = 1e-3
        g = lambda s: model.amplitude_squared(s)  # noqa: E731
        e = lambda s: model.epsilon(s)  # noqa: E731
        fd_e = _fd.d1_5_scalar(g, t, h)
        fd_ed = _fd.d1_5_scalar(e, t, h)
        err1 = np.max(np.abs(model.epsilon(t) - fd_e) / np.maximum(1, np.abs(model.epsilon(t))))
        err2 = np.max(np.abs(model.epsilon_dot(t) - fd_ed)
                      / np.maximum(1, np.abs(model.epsilon_dot(t))))
        out.append(_rec("epsilon_fd_consistency", model, max(err1, err2), 1e-6))
    return out


def check_pipeline(rng):
    out = []
    for model, (a, b) in all_cases():
        t = np.linspace(a, b, 101)[1:-1]
        g, e, ed = model.xi2_jet(t)[:3]
        pipe = construct_frequency(g, e, ed)
        w2 = model.omega_squared(t)
        ulps = np.max(np.abs(w2 - pipe) / np.spacing(np.maximum(np.abs(pipe), 1e-300)))
        out.append(_rec("pipeline_agreement_ulps", model, ulps, 4))
    for w0 in (0.5, 1.0, 2.0, 4.0):
        val = construct_frequency(1 / (2 * w0), 0, 0)
        out.append(_rec("constant_fixed_point", f"constant(omega0={w0})", abs(val - w0**2), 0.0))
    return out


def check_printed_agreement(rng):
    out = []
    u = qmc.Halton(1, seed=int(rng.integers(2**31))).random(100)[:, 0]
    faithful = [(HyperbolicCosh(0.5, 1.0), (-3, 3)), (HyperbolicSinh(0.5, 1.0), (0.2, 3)),
                (PowerLaw(1.0, 1.0, 0.0), (0.2, 3)), (PowerLaw(0.7, 1.3, 0.0), (0.2, 3)),
                (PowerLaw(0.7, 1.3, 1.0), (0.2, 3)), (LogAmplitude(1.0, 1.0), (1.2, 4)),
                (OscillatoryCos(1.0, 0.5, 1.0), (0, 6)), (OscillatorySin(1.0, 0.5, 1.0), (0, 6))]
    for model, (a, b) in faithful:
        t = a + (b - a) * u
        p, q = printed_omega_squared(model, t), model.omega_squared(t)
        out.append(_rec("printed_closed_form_agreement", model,
                        np.max(np.abs(p - q) / np.abs(q)), 1e-12))
    for model, (a, b) in [(Exponential(2.0, 1.0), (-2, 1)), (PowerLaw(1.0, 1.0, 2.0), (0.5, 2)),
                          (PowerLaw(0.8, 1.5, 3.0), (0.5, 2))]:
        t = a + (b - a) * u
        c, q = corrected_omega_squared(model, t), model.omega_squared(t)
        out.append(_rec("corrected_closed_form_agreement", model,
                        np.max(np.abs(c - q) / np.abs(q)), 1e-12))
    return out


def _amplitude_residual_table(model, span, printed):
    t = make_grid(span, num=2001)
    xi = np.sqrt(model.amplitude_squared(t))
    scale = np.max(np.abs(model.omega_squared(t) * xi))
    r_pipe = pinney_residual(xi, t, model, 0.5) / scale
    r_print = pinney_residual(xi, t, printed, 0.5) / scale
    ts = np.linspace(span[0], span[1], 7)
    rows = [{"t": float(s), "printed": float(printed(s)), "pipeline": float(model.omega_squared(s))}
            for s in ts]
    return r_pipe, r_print, rows


def check_discrepancies(rng):
    out = []
    for key, model, span in [
            ("eq28_printed_vs_pipeline", Exponential(2.0, 1.0), (-2.0, 1.0)),
            ("eq31_printed_vs_pipeline", PowerLaw(1.0, 1.0, 2.0), (0.5, 2.0))]:
        r_pipe, r_print, rows = _amplitude_residual_table(
            model, span, lambda s, m=model: printed_omega_squared(m, s))
        mismatch = max(abs(r["printed"] - r["pipeline"]) / abs(r["pipeline"]) for r in rows)
        ok = mismatch > 1e-6 and r_pipe <= 1e-6 and r_print > 1e-3
        out.append(_rec(f"{key}: mismatch documented", model, r_pipe, 1e-6, ok,
                        kind="expected_discrepancy", printed_residual=r_print,
                        pipeline_residual=r_pipe, max_rel_mismatch=mismatch, table=rows))

    # Hankel power-law mode vs the polar closed form xi exp(-i theta)
    rows = []
    worst_polar, best_hankel = 0.0, math.inf
    for n in (0.5, 2.0, 3.0):
        model = PowerLaw(1.0, 1.0, n)
        t = make_grid((0.6, 2.0), num=2001)
        h = t[1] - t[0]
        w2 = model.omega_squared(t[2:-2])
        hk = hankel_mode_experimental(model, t, experimental=True)
        xi = np.sqrt(model.amplitude_squared(t))
        theta = -(n + 1) / (2 * model.epsilon0 * n) * (t / model.tau) ** (-n)
        polar = xi * np.exp(-1j * theta)
        r_h = np.max(np.abs(_fd.d2_5(hk, h) + w2 * hk[2:-2])) / np.max(np.abs(w2 * hk[2:-2]))
        r_p = np.max(np.abs(_fd.d2_5(polar, h) + w2 * polar[2:-2])) / np.max(
            np.abs(w2 * polar[2:-2]))
        worst_polar = max(worst_polar, r_p)
        best_hankel = min(best_hankel, r_h)
        rows.append({"n": n, "hankel_residual": float(r_h), "polar_residual": float(r_p)})
    ok = worst_polar <= 1e-6 and best_hankel > 1e-3
    out.append(_rec("eq32_hankel_vs_ode: mismatch documented", "power_law(epsilon0=1, tau=1)",
                    worst_polar, 1e-6, ok, kind="expected_discrepancy", table=rows))

    # n = 0 mode: printed tau placement vs consistent form, tau != 1
    model = PowerLaw(1.0, 2.0, 0.0)
    t = make_grid((0.5, 3.0), num=2001)
    h = t[1] - t[0]
    e0, tau = model.epsilon0, model.tau
    printed = np.sqrt(e0 * t / tau) * np.exp(-1j * (tau / (2 * e0)) * np.log(t))
    consistent = np.sqrt(e0 * t) * np.exp(-1j * np.log(t) / (2 * e0))
    w2 = model.omega_squared(t[2:-2])

    def res(w):
        return float(np.max(np.abs(_fd.d2_5(w, h) + w2 * w[2:-2])) / np.max(np.abs(w2 * w[2:-2])))

    def wr(w):
        wd = _fd.d1_5(w, h)
        return float(np.max(np.abs(w[2:-2] * np.conj(wd) - np.conj(w[2:-2]) * wd - 1j)))

    ok = res(consistent) <= 1e-6 and wr(consistent) <= 1e-8 and (res(printed) > 1e-3
                                                                   or wr(printed) > 1e-3)
    out.append(_rec("eq34_tau_placement: mismatch documented", model, res(consistent), 1e-6, ok,
                    kind="expected_discrepancy",
                    table=[{"form": "printed", "ode_residual": res(printed),
                            "wronskian_err": wr(printed)},
                           {"form": "consistent", "ode_residual": res(consistent),
                            "wronskian_err": wr(consistent)}]))
    return out


def check_zero_crossings(rng):
    out = []
    for e0, lam in [(2.0, 1.0), (0.5, 2.0), (1.0, 1.0), (3.0, 0.5)]:
        model = Exponential(e0, lam)
        t0 = -math.log(e0) / lam
        root = find_frequency_zero(model, (t0 - 1.3, t0 + 0.9))
        out.append(_rec("exponential_zero_crossing", model, abs(root - t0), 1e-10))
    for n in (2.0, 3.0):
        model = PowerLaw(1.0, 1.0, n)
        exact = ((n + 1) / (n - 1)) ** (1 / (2 * n))
        root = find_frequency_zero(model, (0.5, 3.0))
        out.append(_rec("power_law_crossover", model, abs(root - exact), 1e-10))
    t = np.linspace(0, 20, 2001)
    for a, b in [(1.0, 0.999), (1.0, -0.5), (0.3, 0.29)]:
        for cls in (OscillatoryCos, OscillatorySin):
            m = cls(a, b, 1.3)
            gmin = float(np.min(m.amplitude_squared(t)))
            out.append(_rec("oscillatory_positivity", m, -gmin, 0.0, gmin > 0))
    return out


# classical_dynamics ----------------------------------------------------------

def check_pinney(rng):
    out = []
    for model, span in catalog_cases() + [all_cases()[0]]:
        grid = make_grid(span, 1e-3)
        mode = anchored_mode(model, span, grid=grid, **TIGHT)
        u, v = mode_pair(mode)
        worst = 0.0
        for coeffs in random_coefficients(rng):
            p = pinney_solution(u, v, coeffs)
            scale = np.max(np.abs(model.omega_squared(grid) * p.x))
            worst = max(worst, pinney_residual(p.x, grid, model, p.L) / scale)
        out.append(_rec("pinney_residual", model, worst, 1e-6))
        wr = wronskian(u.u, u.udot, v.u, v.udot)
        out.append(_rec("wronskian_conservation", model, np.max(np.abs(wr / wr[0] - 1)), 1e-9))
    return out


def check_modes(rng):
    out = []
    for model, span in all_cases():
        grid = make_grid(span, 1e-3)
        mode = anchored_mode(model, span, grid=grid, **TIGHT)
        out.append(_rec("wronskian_normalisation", model, np.max(np.abs(mode.wronskian - 1j)), 1e-9))
        out.append(_rec("phase_law", model, np.max(np.abs(2 * mode.xi**2 * mode.theta_dot - 1)),
                        1e-8))
        exact = np.sqrt(model.amplitude_squared(grid))
        out.append(_rec("round_trip_xi", model, np.max(np.abs(mode.xi / exact - 1)), 1e-6))
        unc = uncertainties(mode)
        out.append(_rec("uncertainty_identity", model,
                        np.max(np.abs(unc.product2 / unc.product2_identity - 1)), 1e-10))
        a, b = grid[0], grid[len(grid) // 3]
        dtheta = mode.theta[len(grid) // 3] - mode.theta[0]
        out.append(_rec("phase_integral_vs_theta", model, abs(phase_integral(mode, a, b) - dtheta),
                        1e-8))
        # squeezed constructions stay normalised
        u, v = mode_pair(mode)
        worst = 0.0
        for r, phi in [(0.0, 0.0), (1.0, 0.0), (0.5, 1.2)]:
            sq = mode_from_squeeze(u, v, 1.0, r, phi)
            worst = max(worst, np.max(np.abs(sq.wronskian - 1j)))
        out.append(_rec("squeezed_mode_normalisation", model, worst, 1e-9))
    return out


def check_invariants(rng):
    out = []
    for model, span in all_cases():
        grid = make_grid(span, 1e-3)
        tr = integrate_oscillator(model, span[0], 0.7, -0.3, span, grid=grid, **TIGHT)
        g, e = model.xi2_jet(grid)[:2]
        xi = np.sqrt(g)
        I = ermakov_invariant(tr.u, tr.udot, xi, e / (2 * xi))
        out.append(_rec("ermakov_invariant_constancy", model, np.max(np.abs(I / I[0] - 1)), 1e-8))
    # the unscaled form is not conserved unless xi is constant
    model, span = OscillatoryCos(1.0, 0.5, 1.0), (0.0, 6.0)
    grid = make_grid(span, 1e-3)
    tr = integrate_oscillator(model, 0.0, 0.7, -0.3, span, grid=grid, **TIGHT)
    g, e = model.xi2_jet(grid)[:2]
    xi = np.sqrt(g)
    good = ermakov_invariant(tr.u, tr.udot, xi, e / (2 * xi))
    bad = ermakov_invariant_printed(tr.u, tr.udot, xi, e / (2 * xi))
    d_good = float(np.max(np.abs(good / good[0] - 1)))
    d_bad = float(np.max(np.abs(bad / bad[0] - 1)))
    out.append(_rec("eq15_invariant_normalisation: mismatch documented", model, d_good, 1e-8,
                    d_good <= 1e-8 and d_bad > 1e-3, kind="expected_discrepancy",
                    table=[{"form": "1/2[(xi qdot - xidot q)^2 + (q/xi)^2]", "drift": d_bad},
                           {"form": "(xi qdot - xidot q)^2 + (q/(2 xi))^2", "drift": d_good}]))

    # x = sqrt(2) xi solves the L = 1 Ermakov equation but not other L
    model, span = HyperbolicCosh(0.5, 1.0), (-3.0, 3.0)
    t = make_grid(span, num=2001)
    x = np.sqrt(2 * model.amplitude_squared(t))
    scale = np.max(np.abs(model.omega_squared(t) * x))
    r1 = pinney_residual(x, t, model, 1.0) / scale
    r_other = pinney_residual(x, t, model, 0.5) / scale
    out.append(_rec("sqrt2_xi_identity_L1", model, r1, 1e-6, r1 <= 1e-6 and r_other > 1e-3,
                    kind="expected_discrepancy", residual_L_half=r_other))

    # Gel'fand–Dikii equation for G = x^2
    for model, span in all_cases():
        t = make_grid(span, 1e-3)
        G = model.amplitude_squared(t)
        scale = np.max(np.abs(4 * model.omega_squared(t) * model.epsilon(t))) + np.max(
            np.abs(model.omega_squared_derivatives(t)[1] * G)) + 1e-300
        r = gelfand_dikii_residual(G, t, model)
        out.append(_rec("gelfand_dikii_residual", model, r / max(scale, 1.0), 1e-5))

    # scale covariance of the Pinney construction
    model, span = OscillatoryCos(1.0, 0.5, 1.0), (0.0, 3.0)
    u, v = integrate_pair(model, 0.0, (1.0, 0.0), (0.0, 1.0), span, **TIGHT)
    c = PinneyCoefficients(1.3, 0.2, 0.9)
    p1, p2 = pinney_solution(u, v, c), pinney_solution(u, v, c.scaled(4.0))
    m1, m2 = complex_mode_from_pair(u, v, c), complex_mode_from_pair(u, v, c.scaled(4.0))
    err = max(np.max(np.abs(p2.x / (2 * p1.x) - 1)), abs(p2.L / (4 * p1.L) - 1),
              np.max(np.abs(m1.w - m2.w)))
    out.append(_rec("scale_covariance", model, err, 1e-12))
    return out


# quantum_states --------------------------------------------------------------

def check_wavefunctions(rng):
    out = []
    for model, span in all_cases():
        src = catalog_amplitude_source(model, span[0])
        worst = 0.0
        for t in np.linspace(span[0], span[1], 5):
            xi, xd, ph = src(t)
            for n in range(11):
                worst = max(worst, abs(norm(n, xi, xd, ph) - 1))
        out.append(_rec("wavefunction_normalisation_n0_10", model, worst, 1e-8))
    model, span = OscillatoryCos(1.0, 0.5, 1.0), (0.0, 6.0)
    xi, xd, ph = catalog_amplitude_source(model, 0.0)(1.1)
    worst = 0.0
    for m in range(11):
        for n in range(m + 1, 11):
            worst = max(worst, abs(overlap(m, n, xi, xd, ph)))
    out.append(_rec("wavefunction_orthogonality", model, worst, 1e-8))

    for model, t, n in [(Constant(1.0), 0.7, 0), (OscillatoryCos(1.0, 0.5, 1.0), 0.7, 2)]:
        src = catalog_amplitude_source(model, 0.0)
        q = np.arange(-8.0, 8.0 + 1e-9, 0.01)
        res = [schrodinger_residual(model, n, t, q, dt, src) for dt in (1e-2, 5e-3, 2.5e-3)]
        slopes = richardson_slopes(res)
        out.append(_rec("schrodinger_dt_order", model, np.max(np.abs(slopes - 2)), 0.2,
                        slopes=slopes.tolist()))
    for model, n in [(Constant(1.0), 0), (OscillatoryCos(1.0, 0.5, 1.0), 2)]:
        src = catalog_amplitude_source(model, 0.0)
        res = []
        for dq in (0.2, 0.1, 0.05):
            q = np.arange(-10.0, 10.0 + 1e-9, dq)
            res.append(schrodinger_residual(model, n, 0.7, q, 1e-5, src))
        slopes = richardson_slopes(res)
        out.append(_rec("schrodinger_dq_order", model, np.max(np.abs(slopes / 4 - 1)), 0.1,
                        slopes=slopes.tolist()))

    model = OscillatoryCos(1.0, 0.5, 1.0)
    src = catalog_amplitude_source(model, 0.0)
    for n in range(4):
        vals = [invariant_quadrature(n, *src(t)[:2], omega0=1.0) for t in np.linspace(0, 6, 5)]
        drift = max(abs(v - invariant_expectation(n, 1.0)) for v in vals)
        out.append(_rec(f"invariant_constancy_n{n}", model, drift, 1e-6))

    for e0 in (0.5, 1.0, 2.0):
        model = PowerLaw(e0, 1.0, 0.0)
        grid = make_grid((1.0, 3.0), 1e-3)
        mode = anchored_mode(model, (1.0, 3.0), grid=grid, **TIGHT)
        unc = uncertainties(mode)
        target = (1 + e0**2) / 4
        out.append(_rec("power_law_n0_uncertainty", model,
                        np.max(np.abs(unc.product2_identity / target - 1)), 1e-10))
    return out


# adiabatic_perturbation ------------------------------------------------------

def check_perturbation(rng):
    out = []
    t = np.linspace(0, 5, 501)
    st = iterate_to(Constant(2.0), t, 4)
    err = max(np.max(np.abs(s.xi - 0.5)) for s in st)
    out.append(_rec("perturbation_fixed_point_constant", "constant(omega0=2.0)", err, 0.0))

    model = HyperbolicCosh(0.1, 20.0)
    rep = convergence_report(model, (-20.0, 20.0), 2, dt=0.02)
    e = rep.errors
    out.append(_rec("perturbation_error_ordering", model, 0.0, 0.0,
                    e[0] > e[1] > e[2], errors=e))

    def prefactor(m, span):
        tt = np.linspace(span[0], span[1], 2001)
        s1 = iterate_to(m, tt, 1)[1]
        diff = np.abs(1 / (2 * s1.xi2) - wkb_second_order(m, tt))
        w = np.sqrt(m.omega_squared(tt))
        d = adiabatic_parameter(m, tt)
        return float(np.max(diff) / np.max(w * d**4))

    c1 = prefactor(HyperbolicCosh(0.1, 20.0), (-20, 20))
    c2 = prefactor(HyperbolicCosh(0.1, 40.0), (-40, 40))
    c3 = prefactor(HyperbolicCosh(0.05, 20.0), (-20, 20))
    out.append(_rec("wkb_quartic_prefactor_tau_doubling", model, abs(c2 / c1 - 1), 0.25,
                    prefactors=[c1, c2]))
    out.append(_rec("wkb_quartic_prefactor_halved_adiabaticity", model, abs(c3 / c1 - 1), 0.25,
                    prefactors=[c1, c3]))

    for model, span in catalog_cases():
        tt = make_grid(span, num=2001)
        st = PerturbationState.from_amplitude(model, tt)
        nxt = iterate(st, model)
        out.append(_rec("exactness_certificate", model, nxt.max_change, 1e-6))

    for model, span in [(HyperbolicCosh(0.1, 20.0), (-20, 20)), (OscillatoryCos(1.0, 0.1, 0.2),
                                                                   (0, 10))]:
        tt = make_grid(span, num=2001)
        seed = PerturbationState.initial(tt)
        a = iterate(seed, model, derivatives="analytic")
        s = iterate(seed, model, derivatives="spline")
        err = max(np.max(np.abs(a.eps - s.eps)), np.max(np.abs(a.eps_dot - s.eps_dot)))
        out.append(_rec("differentiation_strategy_equivalence", model, err, 1e-6))

    rep = convergence_report(OscillatoryCos(1.0, 0.95, 1.0), (0.0, 6.0), 3, dt=1e-3)
    out.append(_rec("near_degenerate_oscillatory_flagged", "oscillatory_cos(a=1, b=0.95)",
                    0.0, 0.0, rep.diverged or rep.non_monotone, kind="diagnostic"))
    return out


MODULES = {
    "frequency_models": [check_fd_consistency, check_pipeline, check_printed_agreement,
                         check_discrepancies, check_zero_crossings],
    "classical_dynamics": [check_pinney, check_modes, check_invariants],
    "quantum_states": [check_wavefunctions],
    "adiabatic_perturbation": [check_perturbation],
}


def run_validation(scope="all", seed=20240611, threads=None):
    """Run the check suite; returns ``{"scope", "seed", "passed", "results"}``."""
    if scope == "all":
        fns = [(mod, f) for mod, lst in MODULES.items() for f in lst]
    elif scope in MODULES:
        fns = [(scope, f) for f in MODULES[scope]]
    else:
        raise ValueError(f"unknown scope {scope!r}; choose all or one of {sorted(MODULES)}")
    if threads is None:
        threads = int(os.environ.get("ERMAKOV_LAB_THREADS", "0") or 0) or min(4, os.cpu_count() or 1)
    seeds = np.random.SeedSequence(seed).spawn(len(fns))

    def run(item):
        (mod, fn), ss = item
        try:
            recs = fn(np.random.default_rng(ss))
        except Exception as exc:  # a crashing check is a failed check
            recs = [_rec(fn.__name__, "-", math.inf, 0.0, False, error=repr(exc))]
        for r in recs:
            r["module"] = mod
        return recs

    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        chunks = list(pool.map(run, zip(fns, seeds)))
    results = [r for chunk in chunks for r in chunk]
    return {"scope": scope, "seed": seed, "passed": all(r["pass"] for r in results),
            "results": results}
