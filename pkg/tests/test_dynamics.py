"""Classical oscillator, Pinney construction and mode functions.

Oracles: closed-form solutions of the static oscillator, the closed-form
amplitudes of the catalog, and the n = 0 power-law mode.
"""
import math

import numpy as np
import pytest

import ermakov_lab.dynamics as dyn
from ermakov_lab.dynamics import (
    DegenerateSolutionError,
    IntegrationError,
    PinneyCoefficients,
    anchored_mode,
    complex_mode_from_pair,
    ermakov_invariant,
    ermakov_invariant_printed,
    gelfand_dikii_residual,
    integrate_oscillator,
    integrate_pair,
    make_grid,
    mode_from_squeeze,
    phase_integral,
    pinney_residual,
    pinney_solution,
    wronskian,
)
from ermakov_lab.models import (Constant, DomainError, HyperbolicCosh, LogAmplitude, OscillatoryCos,
                                PowerLaw, Tabulated, closed_form_mode)
from ermakov_lab.quantum import uncertainties
from ermakov_lab.validation import mode_pair, random_coefficients

TIGHT = dict(rtol=1e-12, atol=1e-14)


def test_make_grid_row_count():
    assert make_grid((0.0, 2 * math.pi), 1e-3).size == 6284
    assert make_grid((0.0, 1.0), 0.25).tolist() == [0.0, 0.25, 0.5, 0.75, 1.0]
    np.testing.assert_allclose(make_grid((1, 2), num=5), np.linspace(1, 2, 5))
    with pytest.raises(ValueError):
        make_grid((1.0, 1.0))


def test_static_oscillator_matches_cosine():
    w0 = 1.7
    tr = integrate_oscillator(Constant(w0), 0.0, 1.0, 0.0, (0.0, 10.0), **TIGHT)
    np.testing.assert_allclose(tr.u, np.cos(w0 * tr.t), atol=1e-10)
    np.testing.assert_allclose(tr.udot, -w0 * np.sin(w0 * tr.t), atol=1e-10)


def test_interior_start_integrates_both_ways():
    tr = integrate_oscillator(Constant(1.0), 1.0, math.cos(1.0), -math.sin(1.0), (-2.0, 4.0),
                              **TIGHT)
    np.testing.assert_allclose(tr.u, np.cos(tr.t), atol=1e-10)
    u, ud = tr(np.array([-1.2345, 0.5, 3.3]))
    np.testing.assert_allclose(u, np.cos([-1.2345, 0.5, 3.3]), atol=1e-10)


def test_dense_output_snaps_to_knots():
    tr = integrate_oscillator(Constant(1.0), 0.0, 1.0, 0.0, (0.0, 1.0))
    u, ud = tr(tr.t[::100])
    assert np.array_equal(u, tr.u[::100])
    assert np.array_equal(ud, tr.udot[::100])


def test_span_outside_domain_raises():
    with pytest.raises(DomainError):
        integrate_oscillator(LogAmplitude(1.0, 1.0), 1.5, 1.0, 0.0, (0.5, 3.0))


def test_bad_tolerances_raise():
    with pytest.raises(ValueError):
        integrate_oscillator(Constant(1.0), 0.0, 1.0, 0.0, (0.0, 1.0), rtol=0.0)


def test_integration_failure_reports_reached_time(monkeypatch):
    class Failed:
        status = -1
        message = "step size too small"
        t = np.array([0.0, 0.25])

    monkeypatch.setattr(dyn, "solve_ivp", lambda *a, **k: Failed())
    with pytest.raises(IntegrationError) as info:
        integrate_oscillator(Constant(1.0), 0.0, 1.0, 0.0, (0.0, 1.0))
    assert info.value.reached_time == 0.25


def test_wronskian_conserved(catalog_case):
    model, span = catalog_case
    u, v = integrate_pair(model, span[0], (1.0, 0.0), (0.0, 1.0), span, **TIGHT)
    wr = wronskian(u.u, u.udot, v.u, v.udot)
    np.testing.assert_allclose(wr, 1.0, atol=1e-9)


def test_pinney_static_oscillator_closed_form():
    # u = cos t, v = sin t: x^2 = A cos^2 + 2B cos sin + C sin^2, L^2 = AC - B^2
    c = PinneyCoefficients(2.0, 0.5, 1.0)
    u, v = integrate_pair(Constant(1.0), 0.0, (1.0, 0.0), (0.0, 1.0), (0.0, 5.0), **TIGHT)
    p = pinney_solution(u, v, c)
    t = u.t
    exact = np.sqrt(2 * np.cos(t) ** 2 + np.sin(2 * t) * 0.5 + np.sin(t) ** 2)
    np.testing.assert_allclose(p.x, exact, rtol=1e-10)
    assert p.L == pytest.approx(math.sqrt(1.75))


def test_pinney_residual_catalog(catalog_case, rng):
    model, span = catalog_case
    grid = make_grid(span, 1e-3)
    u, v = mode_pair(anchored_mode(model, span, grid=grid, **TIGHT))
    for coeffs in random_coefficients(rng):
        p = pinney_solution(u, v, coeffs)
        scale = np.max(np.abs(model.omega_squared(grid) * p.x))
        assert pinney_residual(p.x, grid, model, p.L) <= 1e-6 * scale


def test_pinney_residual_detects_wrong_L():
    model, span = HyperbolicCosh(0.5, 1.0), (-2.0, 2.0)
    t = make_grid(span, 1e-3)
    x = np.sqrt(2 * model.amplitude_squared(t))
    assert pinney_residual(x, t, model, 1.0) < 1e-7
    assert pinney_residual(x, t, model, 0.9) > 1e-2


def test_pinney_coefficients_validation():
    with pytest.raises(ValueError):
        PinneyCoefficients(1.0, 2.0, 1.0)
    sq = PinneyCoefficients.from_squeeze(2.0, 0.3, 1.0)
    assert sq.discriminant == pytest.approx(4.0)


def test_degenerate_pair():
    u, _ = integrate_pair(Constant(1.0), 0.0, (1.0, 0.0), (0.0, 1.0), (0.0, 1.0))
    with pytest.raises(DegenerateSolutionError):
        complex_mode_from_pair(u, u, PinneyCoefficients(1.0, 0.0, 1.0))
    with pytest.raises(DegenerateSolutionError):
        complex_mode_from_pair(u, u, PinneyCoefficients(1.0, 1.0, 1.0))


def test_mode_normalisation_and_phase_law(any_case):
    model, span = any_case
    mode = anchored_mode(model, span, **TIGHT)
    np.testing.assert_allclose(mode.wronskian, 1j, atol=1e-9)
    np.testing.assert_allclose(2 * mode.xi**2 * mode.theta_dot, 1.0, atol=1e-8)
    assert np.all(np.diff(mode.theta) > 0)


def test_round_trip_amplitude(any_case):
    model, span = any_case
    mode = anchored_mode(model, span, **TIGHT)
    exact = np.sqrt(model.amplitude_squared(mode.t))
    np.testing.assert_allclose(mode.xi, exact, rtol=1e-6)


def test_conjugate_branch_is_taken():
    u, v = integrate_pair(Constant(1.0), 0.0, (1.0, 0.0), (0.0, 1.0), (0.0, 2.0))
    m1 = complex_mode_from_pair(u, v, PinneyCoefficients(1.0, 0.0, 1.0))
    m2 = complex_mode_from_pair(v, u, PinneyCoefficients(1.0, 0.0, 1.0))
    assert m1.meta["conjugated"] != m2.meta["conjugated"]
    for m in (m1, m2):
        np.testing.assert_allclose(m.wronskian, 1j, atol=1e-12)


def test_mode_matches_closed_form_power_law():
    model = PowerLaw(0.8, 1.0, 0.0)
    span = (1.0, 4.0)
    mode = anchored_mode(model, span, **TIGHT)
    w, _ = closed_form_mode(model, mode.t)
    ratio = mode.w / w  # a constant phase
    np.testing.assert_allclose(np.abs(ratio), 1.0, atol=1e-9)
    np.testing.assert_allclose(ratio, ratio[0], atol=1e-9)


def test_squeezed_modes_are_normalised():
    u, v = integrate_pair(OscillatoryCos(1.0, 0.5, 1.0), 0.0, (1.0, 0.0), (0.0, 1.0), (0.0, 3.0))
    for r, phi in [(0.0, 0.0), (0.7, 0.3), (1.5, -2.0)]:
        m = mode_from_squeeze(u, v, 1.3, r, phi)
        np.testing.assert_allclose(m.wronskian, 1j, atol=1e-9)


def test_scale_covariance():
    model = OscillatoryCos(1.0, 0.5, 1.0)
    u, v = integrate_pair(model, 0.0, (1.0, 0.0), (0.0, 1.0), (0.0, 3.0))
    c = PinneyCoefficients(1.2, -0.3, 0.8)
    p1, p4 = pinney_solution(u, v, c), pinney_solution(u, v, c.scaled(4.0))
    np.testing.assert_allclose(p4.x, 2 * p1.x, rtol=1e-14)
    assert p4.L == pytest.approx(4 * p1.L)
    np.testing.assert_allclose(complex_mode_from_pair(u, v, c.scaled(4.0)).w,
                               complex_mode_from_pair(u, v, c).w, atol=1e-14)


def test_phase_integral_static():
    w0 = 2.5
    xi = lambda t: 1 / math.sqrt(2 * w0)  # noqa: E731
    assert phase_integral(xi, 0.0, 3.0) == pytest.approx(w0 * 3.0, rel=1e-12)


def test_phase_integral_matches_theta(catalog_case):
    model, span = catalog_case
    mode = anchored_mode(model, span, **TIGHT)
    k = mode.t.size // 2
    assert phase_integral(mode, mode.t[0], mode.t[k]) == pytest.approx(
        mode.theta[k] - mode.theta[0], abs=1e-8)


def test_phase_integral_rejects_vanishing_xi():
    with pytest.raises(DomainError):
        phase_integral(lambda t: t, -1.0, 1.0)


def test_invariant_conserved_and_printed_form_not():
    model, span = OscillatoryCos(1.0, 0.5, 1.0), (0.0, 6.0)
    tr = integrate_oscillator(model, 0.0, 0.4, 1.1, span, **TIGHT)
    xi = np.sqrt(model.amplitude_squared(tr.t))
    xd = model.epsilon(tr.t) / (2 * xi)
    inv = ermakov_invariant(tr.u, tr.udot, xi, xd)
    np.testing.assert_allclose(inv, inv[0], rtol=1e-8)
    bad = ermakov_invariant_printed(tr.u, tr.udot, xi, xd)
    assert np.ptp(bad) / bad[0] > 1e-2


def test_invariant_of_amplitude_itself():
    # q = xi is a classical solution only when xi is constant; the invariant is then 1/4
    xi = 1 / math.sqrt(2.0)
    assert ermakov_invariant(xi, 0.0, xi, 0.0) == pytest.approx(0.25)


def test_gelfand_dikii(catalog_case):
    model, span = catalog_case
    t = make_grid(span, 1e-3)
    G = model.amplitude_squared(t)
    scale = max(1.0, float(np.max(np.abs(model.omega_squared(t) * model.epsilon(t)))))
    assert gelfand_dikii_residual(G, t, model) <= 1e-5 * scale


def test_gelfand_dikii_with_callable_frequency():
    model = HyperbolicCosh(0.5, 1.0)
    t = make_grid((-1, 1), 1e-3)
    G = model.amplitude_squared(t)
    r = gelfand_dikii_residual(G, t, model.omega_squared)
    assert r < 1e-5


def test_tabulated_mode_normalised():
    t = np.linspace(0, 4, 41)
    model = Tabulated(t, 1 + 0.3 * np.sin(t))
    u, v = integrate_pair(model, 0.0, (1.0, 0.0), (0.0, 1.0), (0.0, 4.0))
    mode = complex_mode_from_pair(u, v, PinneyCoefficients(1.0, 0.0, 1.0))
    np.testing.assert_allclose(mode.wronskian, 1j, atol=1e-9)


def test_uncertainty_identity(any_case):
    model, span = any_case
    mode = anchored_mode(model, span, **TIGHT)
    unc = uncertainties(mode)
    np.testing.assert_allclose(unc.product2, unc.product2_identity, rtol=1e-10)
    # Heisenberg bound, up to the normalisation error of the mode
    assert np.all(unc.product2 >= 0.25 * (1 - 1e-9))
