"""Scalar formulas shared by the Python API and the compiled integrator.

Every function here takes the four precomputed constants
``(le, beta, q, alpha)`` with ``q = sqrt(1 + beta**2)`` so the same source
serves numpy arrays (plain call) and numba scalars (``*_jit``).
"""
import numba
import numpy as np


def energy(s, th, le, beta, q, alpha):
    r = np.sqrt(1.0 - s * s)
    c = np.cos(th)
    de = alpha - le * r * (1.0 - beta * beta) * c
    return le * beta * s * s - le * beta * (r * c - q) * r * c + de * s


def velocity(s, th, le, beta, q, alpha):
    r = np.sqrt(1.0 - s * s)
    c = np.cos(th)
    u = (1.0 - 2.0 * s * s) / r
    ds = -le * (s * (1.0 - beta * beta) - beta * q + 2.0 * beta * r * c) * r * np.sin(th)
    dth = (alpha - le * u * c
           + 2.0 * le * beta * (s - q * s / (2.0 * r) * c + s * c * c + 0.5 * beta * u * c))
    return ds, dth


energy_jit = numba.njit(cache=True, nogil=True)(energy)
velocity_jit = numba.njit(cache=True, nogil=True)(velocity)


@numba.njit(cache=True, nogil=True)
def rk4_run(s0, th0, le, beta, q, alpha, h, n_steps, stride, sign, edge):
    """Fixed-step classical RK4.

    Returns ``(out, n_rec, hit_edge)``; ``out`` rows are ``(tau, s, theta, H)``.
    ``sign = -1`` integrates the time-reversed flow.
    """
    n_out = n_steps // stride + 2
    out = np.empty((n_out, 4))
    lim = 1.0 - edge
    s = s0
    th = th0
    out[0, 0] = 0.0
    out[0, 1] = s
    out[0, 2] = th
    out[0, 3] = energy_jit(s, th, le, beta, q, alpha)
    k = 1
    for i in range(1, n_steps + 1):
        a1, b1 = velocity_jit(s, th, le, beta, q, alpha)
        s2 = s + 0.5 * h * sign * a1
        if abs(s2) > lim:
            return out, k, True
        a2, b2 = velocity_jit(s2, th + 0.5 * h * sign * b1, le, beta, q, alpha)
        s3 = s + 0.5 * h * sign * a2
        if abs(s3) > lim:
            return out, k, True
        a3, b3 = velocity_jit(s3, th + 0.5 * h * sign * b2, le, beta, q, alpha)
        s4 = s + h * sign * a3
        if abs(s4) > lim:
            return out, k, True
        a4, b4 = velocity_jit(s4, th + h * sign * b3, le, beta, q, alpha)
        s = s + h * sign * (a1 + 2.0 * a2 + 2.0 * a3 + a4) / 6.0
        th = th + h * sign * (b1 + 2.0 * b2 + 2.0 * b3 + b4) / 6.0
        if not abs(s) <= lim:
            return out, k, True
        if i % stride == 0 or i == n_steps:
            out[k, 0] = i * h
            out[k, 1] = s
            out[k, 2] = th
            out[k, 3] = energy_jit(s, th, le, beta, q, alpha)
            k += 1
    return out, k, False
