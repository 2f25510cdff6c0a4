# # Ermakov-Pinney solutions from two linear solutions
#
# Given independent solutions u, v of q'' + omega^2 q = 0 and coefficients
# A, B, C, the combination x = sqrt(A u^2 + 2 B u v + C v^2) solves
# x'' + omega^2 x = L^2 / x^3 with L^2 = (AC - B^2) W^2.

import numpy as np

from ermakov_lab.dynamics import (PinneyCoefficients, integrate_pair, make_grid,
                                  pinney_residual, pinney_solution)
from ermakov_lab.models import OscillatoryCos

model = OscillatoryCos(1.0, 0.5, 1.0)
span = (0.0, 6.0)
grid = make_grid(span, 1e-3)
u, v = integrate_pair(model, 0.0, (1.0, 0.0), (0.0, 1.0), span, grid=grid)

for coeffs in [PinneyCoefficients(1.0, 0.0, 1.0), PinneyCoefficients(1.5, 0.4, 0.8)]:
    p = pinney_solution(u, v, coeffs)
    res = pinney_residual(p.x, grid, model, p.L)
    print(f"A={coeffs.A} B={coeffs.B} C={coeffs.C}: L={p.L:.6f}, residual={res:.2e}")

# At the default tolerances the integrator error dominates the residual.
# Tightening them exposes the finite-difference floor.

for rtol in (1e-8, 1e-10, 1e-12):
    u, v = integrate_pair(model, 0.0, (1.0, 0.0), (0.0, 1.0), span, grid=grid,
                          rtol=rtol, atol=rtol * 1e-2)
    p = pinney_solution(u, v, PinneyCoefficients(1.0, 0.0, 1.0))
    print(f"rtol={rtol:g}: residual {pinney_residual(p.x, grid, model, p.L):.2e}")
