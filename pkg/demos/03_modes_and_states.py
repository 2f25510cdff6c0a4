# # Normalised modes, uncertainties and number states
#
# A mode w = xi exp(-i theta) with Wr[w, w*] = i fixes the quantum vacuum.
# Its modulus is the amplitude, and the number states follow from it.

import numpy as np

from ermakov_lab.dynamics import anchored_mode, make_grid
from ermakov_lab.models import HyperbolicCosh
from ermakov_lab.quantum import (catalog_amplitude_source, invariant_expectation,
                                 invariant_quadrature, norm, overlap, uncertainties, wavefunction)

model = HyperbolicCosh(0.5, 1.0)
span = (-3.0, 3.0)
mode = anchored_mode(model, span, grid=make_grid(span, 1e-2))

print("max |Wr - i|       :", np.max(np.abs(mode.wronskian - 1j)))
print("max rel xi error   :", np.max(np.abs(mode.xi / np.sqrt(model.amplitude_squared(mode.t)) - 1)))

# The vacuum uncertainty product satisfies Dq^2 Dp^2 = (xi xi_dot)^2 + 1/4.

unc = uncertainties(mode)
print("identity error     :", np.max(np.abs(unc.product2 / unc.product2_identity - 1)))
print("min product        :", unc.product2.min())

# Number states at one time: normalised and mutually orthogonal.

src = catalog_amplitude_source(model, span[0])
xi, xd, ph = src(0.7)
print("norms              :", [round(norm(n, xi, xd, ph), 12) for n in range(4)])
print("<0|2>              :", abs(overlap(0, 2, xi, xd, ph)))

# The invariant has eigenvalues n + 1/2 whatever the time.

for t in (-2.0, 0.0, 2.0):
    xi, xd, _ = src(t)
    print(f"t={t:+.1f}: <I> for n=0..2 =",
          [round(invariant_quadrature(n, xi, xd), 10) for n in range(3)],
          "expected", [invariant_expectation(n) for n in range(3)])

q = np.linspace(-10, 10, 801)
sample = wavefunction(1, q, *src(0.0), t=0.0)
print("|Psi_1|^2 peaks at q =", q[np.argmax(np.abs(sample.psi) ** 2)])
