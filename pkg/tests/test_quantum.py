"""Number states: Hermite evaluation, normalisation, dynamics and invariants."""
import math

import numpy as np
import pytest
from scipy.special import eval_hermite, factorial

from ermakov_lab.dynamics import anchored_mode
from ermakov_lab.models import Constant, DomainError, HyperbolicCosh, OscillatoryCos, PowerLaw
from ermakov_lab.quantum import (
    HERMITE_MAX_N,
    catalog_amplitude_source,
    hermite,
    hermite_function,
    invariant_expectation,
    invariant_quadrature,
    norm,
    overlap,
    psi_values,
    quadrature_cutoff,
    schrodinger_residual,
    uncertainties,
    vacuum_energy,
    wavefunction,
)
from ermakov_lab.validation import richardson_slopes


@pytest.mark.parametrize("n", [0, 1, 2, 5, 10, 20])
def test_hermite_matches_scipy(n):
    x = np.linspace(-4, 4, 33)
    np.testing.assert_allclose(hermite(n, x), eval_hermite(n, x), rtol=1e-12, atol=1e-12)


@pytest.mark.parametrize("n", [0, 3, 12, 30])
def test_hermite_function_normalisation_formula(n):
    x = np.linspace(-5, 5, 41)
    ref = eval_hermite(n, x) * np.exp(-x**2 / 2) / math.sqrt(2.0**n * factorial(n) * math.sqrt(math.pi))
    np.testing.assert_allclose(hermite_function(n, x), ref, rtol=1e-10, atol=1e-14)


def test_hermite_function_large_n_is_finite():
    x = np.linspace(-25, 25, 2001)
    p = hermite_function(HERMITE_MAX_N, x)
    assert np.all(np.isfinite(p))
    assert np.trapezoid(p**2, x) == pytest.approx(1.0, abs=1e-8)


def test_hermite_guards():
    with pytest.raises(ValueError):
        hermite(-1, 0.0)
    with pytest.raises(ValueError):
        hermite_function(HERMITE_MAX_N + 1, 0.0)


def test_ground_state_of_static_oscillator():
    w0 = 1.3
    xi = 1 / math.sqrt(2 * w0)
    q = np.linspace(-5, 5, 101)
    psi = psi_values(0, q, xi, 0.0, 0.0)
    np.testing.assert_allclose(psi, (w0 / math.pi) ** 0.25 * np.exp(-w0 * q**2 / 2), rtol=1e-13)


@pytest.mark.parametrize("n", range(0, 11))
def test_norm(n):
    assert norm(n, 0.8, 0.3, 1.7) == pytest.approx(1.0, abs=1e-8)


def test_orthogonality():
    for m in range(11):
        for n in range(m + 1, 11):
            assert abs(overlap(m, n, 0.6, -0.4, 0.9)) <= 1e-8


def test_trapezoid_oracle_for_norm():
    # independent route: plain trapezoid on a fine grid
    xi, xd = 0.9, 0.2
    q = np.linspace(-15, 15, 6001)
    for n in (0, 4, 9):
        psi = psi_values(n, q, xi, xd, 0.3)
        assert np.trapezoid(np.abs(psi) ** 2, q) == pytest.approx(1.0, abs=1e-10)


def test_wavefunction_sample_and_grid_checks():
    xi = 1 / math.sqrt(2)
    q = np.linspace(-10, 10, 2001)
    s = wavefunction(3, q, xi, 0.0, 0.0, t=0.0)
    assert s.node_count() == 3
    assert q[np.argmax(wavefunction(0, q, xi, 0.0, 0.0).abs2)] == 0.0
    with pytest.raises(DomainError):
        wavefunction(0, np.linspace(-1, 1, 11), xi, 0.0, 0.0)
    with pytest.raises(DomainError):
        wavefunction(0, np.linspace(-10, 12, 11), xi, 0.0, 0.0)
    with pytest.raises(DomainError):
        psi_values(0, q, 0.0, 0.0, 0.0)


def test_quadrature_cutoff_grows_with_n():
    assert quadrature_cutoff(50, 1.0) > quadrature_cutoff(0, 1.0)
    q = quadrature_cutoff(10, 0.7)
    assert abs(psi_values(10, q, 0.7, 0.0, 0.0)) < 1e-12


@pytest.mark.parametrize("model", [Constant(1.0), OscillatoryCos(1.0, 0.5, 1.0)],
                         ids=["constant", "oscillatory_cos"])
def test_schrodinger_second_order_in_dt(model):
    src = catalog_amplitude_source(model, 0.0)
    q = np.arange(-8.0, 8.0 + 1e-9, 0.01)
    res = [schrodinger_residual(model, 2, 0.7, q, dt, src) for dt in (1e-2, 5e-3, 2.5e-3)]
    np.testing.assert_allclose(richardson_slopes(res), 2.0, atol=0.2)


def test_schrodinger_residual_small_for_exact_state():
    model = HyperbolicCosh(0.5, 1.0)
    q = np.arange(-8.0, 8.0 + 1e-9, 0.02)
    assert schrodinger_residual(model, 1, 0.3, q, 1e-4) < 1e-6


def test_schrodinger_residual_detects_wrong_phase():
    model = OscillatoryCos(1.0, 0.5, 1.0)
    good = catalog_amplitude_source(model, 0.0)

    def bad(t):
        xi, xd, ph = good(t)
        return xi, xd, 2 * ph

    q = np.arange(-8.0, 8.0 + 1e-9, 0.02)
    assert schrodinger_residual(model, 1, 0.7, q, 1e-4, bad) > 1e-2


def test_numerical_mode_as_source():
    model = OscillatoryCos(1.0, 0.5, 1.0)
    mode = anchored_mode(model, (0.0, 2.0), rtol=1e-12, atol=1e-14)
    q = np.arange(-8.0, 8.0 + 1e-9, 0.02)
    assert schrodinger_residual(model, 1, 1.0, q, 1e-4, mode) < 1e-6


@pytest.mark.parametrize("n", range(4))
def test_invariant_expectation(n):
    model = OscillatoryCos(1.0, 0.5, 1.0)
    src = catalog_amplitude_source(model, 0.0)
    for t in np.linspace(0, 6, 5):
        xi, xd, _ = src(t)
        assert invariant_quadrature(n, xi, xd) == pytest.approx(invariant_expectation(n), abs=1e-6)


def test_invariant_trapezoid_oracle():
    # (xi p - xi_dot q) Psi by numerical differentiation of Psi
    xi, xd, n = 0.8, 0.35, 2
    q = np.linspace(-12, 12, 24001)
    psi = psi_values(n, q, xi, xd, 0.0)
    dpsi = np.gradient(psi, q)
    a = -1j * xi * dpsi - xd * q * psi
    val = np.trapezoid(np.abs(a) ** 2 + (q / (2 * xi)) ** 2 * np.abs(psi) ** 2, q)
    assert val == pytest.approx(n + 0.5, rel=1e-6)


def test_uncertainty_constant_is_exactly_quarter():
    m = Constant(1.9)
    xi = math.sqrt(m.amplitude_squared(0.0))
    w, wd = xi + 0j, -1j / (2 * xi)
    assert uncertainties((w, wd)).product2 == 0.25


@pytest.mark.parametrize("e0", [0.5, 1.0, 2.0])
def test_power_law_n0_uncertainty(e0):
    model = PowerLaw(e0, 1.0, 0.0)
    mode = anchored_mode(model, (1.0, 3.0), rtol=1e-12, atol=1e-14)
    unc = uncertainties(mode)
    np.testing.assert_allclose(unc.product2_identity, (1 + e0**2) / 4, rtol=1e-10)


def test_vacuum_energy_static():
    assert vacuum_energy(Constant(2.0)) == pytest.approx(1.0)
    mode = anchored_mode(Constant(2.0), (0.0, 1.0))
    assert vacuum_energy(Constant(2.0), mode, 0.5) == pytest.approx(1.0, rel=1e-9)


def test_invariant_expectation_validation():
    with pytest.raises(ValueError):
        invariant_expectation(0, 0.0)
