# # Adiabatic iteration against WKB
#
# Starting from xi^2 = 1/(2 omega), each step solves the amplitude equation
# for xi^2 with the previous derivatives frozen. For slowly varying
# frequencies the error drops with every step.

import numpy as np

from ermakov_lab.models import Exponential, HyperbolicCosh
from ermakov_lab.perturbation import (adiabatic_parameter, convergence_report, iterate_to,
                                      wkb_second_order)

model = HyperbolicCosh(0.1, 20.0)
rep = convergence_report(model, (-20.0, 20.0), 3, dt=0.02)
for r in rep.iterations:
    print(f"n={r.n}: max rel error {r.max_rel_err:.3e}")

# The first iterate reproduces second-order WKB up to terms of fourth order
# in the adiabatic parameter.

t = np.linspace(-20, 20, 2001)
s1 = iterate_to(model, t, 1)[1]
diff = np.abs(1 / (2 * s1.xi2) - wkb_second_order(model, t))
w = np.sqrt(model.omega_squared(t))
print("max diff / (omega delta^4):", np.max(diff / (w * adiabatic_parameter(model, t) ** 4)))

# Where omega^2 < 0 the scheme does not apply; those points are flagged.

rep = convergence_report(Exponential(2.0, 1.0), (-2.0, 1.0), 1)
print("excluded intervals:", rep.iterations[0].excluded_intervals)
