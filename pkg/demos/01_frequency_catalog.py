# # Frequency models from amplitude profiles
#
# Every catalog family starts from a squared amplitude xi^2(t). The frequency
# follows from omega^2 = (1 + eps^2 - 2 eps_dot xi^2) / (4 xi^4) with
# eps = d(xi^2)/dt, so the amplitude is an exact solution by construction.

import numpy as np

from ermakov_lab.models import (Exponential, HyperbolicCosh, PowerLaw, construct_frequency,
                                corrected_omega_squared, find_frequency_zero,
                                printed_omega_squared)

# Build omega^2 by hand for the cosh profile and compare with the model.

model = HyperbolicCosh(0.5, 1.0)
t = np.linspace(-2, 2, 5)
g, e, ed = model.xi2_jet(t)[:3]
print("pipeline :", construct_frequency(g, e, ed))
print("model    :", model.omega_squared(t))

# The exponential closed form as usually printed does not match its own
# amplitude. The corrected form (with exp(-2 lam t)) does.

exp_model = Exponential(1.0, 1.0)
t = np.linspace(-2, 1.5, 8)
print("printed   - pipeline:", np.max(np.abs(printed_omega_squared(exp_model, t)
                                          - exp_model.omega_squared(t))))
print("corrected - pipeline:", np.max(np.abs(corrected_omega_squared(exp_model, t)
                                          - exp_model.omega_squared(t))))

# omega^2 changes sign for the exponential at t = -ln(eps0)/lam.

e0, lam = 2.0, 1.0
root = find_frequency_zero(Exponential(e0, lam), (-2.0, 1.0))
print("zero crossing:", root, "expected:", -np.log(e0) / lam)

# Power laws with n > 1 cross over from oscillating to inverted.

e0, tau, n = 1.0, 1.0, 2.0
exact = tau * ((n + 1) / (e0**2 * (n - 1))) ** (1 / (2 * n))
print("cross-over:", find_frequency_zero(PowerLaw(e0, tau, n), (0.3, 3.0)), "expected:", exact)
