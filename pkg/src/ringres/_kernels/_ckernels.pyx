# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels; see ``_pykernels`` for the reference implementations."""

from libc.math cimport sin, cos, pow, sqrt, fabs, M_PI
from libc.stdlib cimport malloc, free

import numpy as np


def sin_power_sums(long n, double phase=0.0):
    cdef long j
    cdef double s, inv, inv2
    cdef double s1 = 0.0, s2 = 0.0, s3 = 0.0
    with nogil:
        for j in range(1, n):
            s = sin(0.5 * (2.0 * M_PI * j / n + phase))
            inv = 1.0 / s
            inv2 = inv * inv
            s1 += inv
            s2 += inv2
            s3 += inv2 * inv
    return s1, s2, s3


def discrete_ring_sum(long n, double ring_radius, double radius, double power=1.5):
    cdef long j
    cdef double d2, total = 0.0
    cdef double rr = radius * radius + ring_radius * ring_radius
    cdef double cross = 2.0 * radius * ring_radius
    cdef bint newtonian = power == 1.5
    with nogil:
        for j in range(n):
            d2 = rr - cross * cos(2.0 * M_PI * j / n)
            if newtonian:
                total += 1.0 / (d2 * sqrt(d2))
            else:
                total += pow(d2, -power)
    return total


cdef inline double _forcing(double omega0_sq, const double* h, int nh,
                            double theta) noexcept nogil:
    # sum_k h_k cos(k theta) by the Chebyshev recurrence
    cdef double c1 = cos(theta)
    cdef double cprev = 1.0, ccur = c1, cnext, total = 0.0
    cdef int k
    if nh == 0:
        return 0.0
    total = h[0] * ccur
    for k in range(1, nh):
        cnext = 2.0 * c1 * ccur - cprev
        cprev = ccur
        ccur = cnext
        total += h[k] * ccur
    return omega0_sq * total


cdef inline void _coeff(double omega, double omega0_sq, const double* h, int nh,
                        double nu, double t0, double t,
                        double* a11, double* a12, double* a21) noexcept nogil:
    cdef double p = _forcing(omega0_sq, h, nh, nu * (t + t0))
    cdef double s = sin(omega * t)
    cdef double c = cos(omega * t)
    cdef double g = -p / omega
    a11[0] = -g * s * c
    a12[0] = -g * s * s
    a21[0] = g * c * c


def interaction_propagator(double omega, double omega0_sq, harmonics, double nu,
                           double t0, long steps):
    cdef double[::1] hv = np.ascontiguousarray(harmonics, dtype=np.float64)
    cdef int nh = hv.shape[0]
    cdef const double* h = &hv[0] if nh > 0 else NULL
    cdef double period, dt, hd, sixth, t
    cdef double w11 = 0.0, w12 = 0.0, w21 = 0.0, w22 = 0.0
    cdef double b11, b12, b21, m11, m12, m21, e11, e12, e21
    cdef double u11, u12, u21, u22
    cdef double k1_11, k1_12, k1_21, k1_22
    cdef double k2_11, k2_12, k2_21, k2_22
    cdef double k3_11, k3_12, k3_21, k3_22
    cdef double k4_11, k4_12, k4_21, k4_22
    cdef long i
    nu = fabs(nu)
    period = 2.0 * M_PI / nu
    dt = period / steps
    hd = 0.5 * dt
    sixth = dt / 6.0
    with nogil:
        _coeff(omega, omega0_sq, h, nh, nu, t0, 0.0, &b11, &b12, &b21)
        for i in range(steps):
            t = i * dt
            u11 = 1.0 + w11
            u12 = w12
            u21 = w21
            u22 = 1.0 + w22
            k1_11 = b11 * u11 + b12 * u21
            k1_12 = b11 * u12 + b12 * u22
            k1_21 = b21 * u11 - b11 * u21
            k1_22 = b21 * u12 - b11 * u22

            _coeff(omega, omega0_sq, h, nh, nu, t0, t + hd, &m11, &m12, &m21)
            u11 = 1.0 + w11 + hd * k1_11
            u12 = w12 + hd * k1_12
            u21 = w21 + hd * k1_21
            u22 = 1.0 + w22 + hd * k1_22
            k2_11 = m11 * u11 + m12 * u21
            k2_12 = m11 * u12 + m12 * u22
            k2_21 = m21 * u11 - m11 * u21
            k2_22 = m21 * u12 - m11 * u22

            u11 = 1.0 + w11 + hd * k2_11
            u12 = w12 + hd * k2_12
            u21 = w21 + hd * k2_21
            u22 = 1.0 + w22 + hd * k2_22
            k3_11 = m11 * u11 + m12 * u21
            k3_12 = m11 * u12 + m12 * u22
            k3_21 = m21 * u11 - m11 * u21
            k3_22 = m21 * u12 - m11 * u22

            _coeff(omega, omega0_sq, h, nh, nu, t0, (i + 1) * dt, &e11, &e12, &e21)
            u11 = 1.0 + w11 + dt * k3_11
            u12 = w12 + dt * k3_12
            u21 = w21 + dt * k3_21
            u22 = 1.0 + w22 + dt * k3_22
            k4_11 = e11 * u11 + e12 * u21
            k4_12 = e11 * u12 + e12 * u22
            k4_21 = e21 * u11 - e11 * u21
            k4_22 = e21 * u12 - e11 * u22

            w11 += sixth * (k1_11 + 2.0 * (k2_11 + k3_11) + k4_11)
            w12 += sixth * (k1_12 + 2.0 * (k2_12 + k3_12) + k4_12)
            w21 += sixth * (k1_21 + 2.0 * (k2_21 + k3_21) + k4_21)
            w22 += sixth * (k1_22 + 2.0 * (k2_22 + k3_22) + k4_22)
            b11 = e11
            b12 = e12
            b21 = e21
    return w11, w12, w21, w22
