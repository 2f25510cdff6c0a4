"""Central finite-difference stencils on uniform grids.

Each function returns the derivative at interior knots only, so the output
is shorter than the input by the stencil width minus one.
"""
import numpy as np


def uniform_step(t, rtol=1e-9):
    t = np.asarray(t, dtype=float)
    if t.ndim != 1 or t.size < 2:
        raise ValueError("need a 1-d grid with at least two points")
    h = np.diff(t)
    if np.any(h <= 0):
        raise ValueError("grid must be strictly increasing")
    if np.ptp(h) > rtol * max(abs(t[0]), abs(t[-1]), 1.0) + 1e-6 * h.mean():
        raise ValueError("grid must be uniform")
    return (t[-1] - t[0]) / (t.size - 1)


def d1_5(f, h):
    return (f[:-4] - 8 * f[1:-3] + 8 * f[3:-1] - f[4:]) / (12 * h)


def d2_5(f, h):
    return (-f[:-4] + 16 * f[1:-3] - 30 * f[2:-2] + 16 * f[3:-1] - f[4:]) / (12 * h * h)


def d1_7(f, h):
    return (-f[:-6] + 9 * f[1:-5] - 45 * f[2:-4] + 45 * f[4:-2] - 9 * f[5:-1] + f[6:]) / (60 * h)


def d3_7(f, h):
    return (f[:-6] - 8 * f[1:-5] + 13 * f[2:-4] - 13 * f[4:-2] + 8 * f[5:-1] - f[6:]) / (
        8 * h**3)


def d1_5_scalar(f, t, h):
    """Five-point first derivative of a callable at ``t``."""
    return (f(t - 2 * h) - 8 * f(t - h) + 8 * f(t + h) - f(t + 2 * h)) / (12 * h)
