"""Pure-Python/numpy implementations of the hot kernels.

Same signatures and results as the compiled ``_ckernels`` module; used when
the extension is unavailable or ``RINGRES_PURE_PYTHON`` is set.
"""

import math

import numpy as np


def sin_power_sums(n, phase=0.0):
    """Return (sum 1/s, sum 1/s^2, sum 1/s^3), s = sin((2 pi j/n + phase)/2), j=1..n-1."""
    j = np.arange(1, int(n), dtype=float)
    inv = 1.0 / np.sin(0.5 * (2.0 * math.pi * j / n + phase))
    inv2 = inv * inv
    return float(inv.sum()), float(inv2.sum()), float((inv2 * inv).sum())


def discrete_ring_sum(n, ring_radius, radius, power=1.5):
    """sum_{j=0}^{n-1} (R^2 + R0^2 - 2 R R0 cos(2 pi j/n))^(-power)."""
    lam = 2.0 * math.pi * np.arange(int(n), dtype=float) / n
    d2 = radius * radius + ring_radius * ring_radius - 2.0 * radius * ring_radius * np.cos(lam)
    return float(np.sum(d2 ** (-power)))


def interaction_propagator(omega, omega0_sq, harmonics, nu, t0, steps):
    """RK4 propagation of W' = A(t)(I + W), W(0) = 0, over one period 2 pi/|nu|.

    A(t) is the interaction-picture coefficient of x'' + (omega^2 + p(t)) x = 0
    in the variables (x, x'/omega), with
    p(t) = omega0_sq * sum_k h_k cos(k nu (t + t0)).
    Returns (W11, W12, W21, W22).
    """
    nu = abs(nu)
    period = 2.0 * math.pi / nu
    dt = period / steps
    t = np.arange(2 * steps + 1, dtype=float) * (0.5 * dt)
    h = np.asarray(harmonics, dtype=float)
    if h.size:
        k = np.arange(1, h.size + 1, dtype=float)
        p = omega0_sq * (np.cos(np.outer(nu * (t + t0), k)) @ h)
    else:
        p = np.zeros_like(t)
    s = np.sin(omega * t)
    c = np.cos(omega * t)
    g = -p / omega
    # A = g * [[-sc, -s^2], [c^2, sc]]
    a11 = (-g * s * c).tolist()
    a12 = (-g * s * s).tolist()
    a21 = (g * c * c).tolist()

    w11 = w12 = w21 = w22 = 0.0
    for i in range(steps):
        i0 = 2 * i
        i1 = i0 + 1
        i2 = i0 + 2
        # stage 1
        b11, b12, b21 = a11[i0], a12[i0], a21[i0]
        u11, u12, u21, u22 = 1.0 + w11, w12, w21, 1.0 + w22
        k1_11 = b11 * u11 + b12 * u21
        k1_12 = b11 * u12 + b12 * u22
        k1_21 = b21 * u11 - b11 * u21
        k1_22 = b21 * u12 - b11 * u22
        # stage 2
        b11, b12, b21 = a11[i1], a12[i1], a21[i1]
        hd = 0.5 * dt
        u11 = 1.0 + w11 + hd * k1_11
        u12 = w12 + hd * k1_12
        u21 = w21 + hd * k1_21
        u22 = 1.0 + w22 + hd * k1_22
        k2_11 = b11 * u11 + b12 * u21
        k2_12 = b11 * u12 + b12 * u22
        k2_21 = b21 * u11 - b11 * u21
        k2_22 = b21 * u12 - b11 * u22
        # stage 3
        u11 = 1.0 + w11 + hd * k2_11
        u12 = w12 + hd * k2_12
        u21 = w21 + hd * k2_21
        u22 = 1.0 + w22 + hd * k2_22
        k3_11 = b11 * u11 + b12 * u21
        k3_12 = b11 * u12 + b12 * u22
        k3_21 = b21 * u11 - b11 * u21
        k3_22 = b21 * u12 - b11 * u22
        # stage 4
        b11, b12, b21 = a11[i2], a12[i2], a21[i2]
        u11 = 1.0 + w11 + dt * k3_11
        u12 = w12 + dt * k3_12
        u21 = w21 + dt * k3_21
        u22 = 1.0 + w22 + dt * k3_22
        k4_11 = b11 * u11 + b12 * u21
        k4_12 = b11 * u12 + b12 * u22
        k4_21 = b21 * u11 - b11 * u21
        k4_22 = b21 * u12 - b11 * u22
        sixth = dt / 6.0
        w11 += sixth * (k1_11 + 2.0 * (k2_11 + k3_11) + k4_11)
        w12 += sixth * (k1_12 + 2.0 * (k2_12 + k3_12) + k4_12)
        w21 += sixth * (k1_21 + 2.0 * (k2_21 + k3_21) + k4_21)
        w22 += sixth * (k1_22 + 2.0 * (k2_22 + k3_22) + k4_22)
    return w11, w12, w21, w22
