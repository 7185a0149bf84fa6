"""Sums over the regular polygon of ring particles.

Exact finite sums over the N-1 companions of a test particle, the radial
force expansion about the equilibrium radius, the interaction density
alpha, the corrected rotation rate and the full nonlinear equations of motion
of one particle of the polygon.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy import integrate, special

from . import _kernels
from .core import (
    CentralConfiguration,
    DomainError,
    PrimaryBody,
    SingularityError,
    ValidationError,
)

#: Constant of the closed-form interaction density, alpha = C rho sigma^3.
ALPHA_CONSTANT = 1.258784
#: Rounded constant used by the planetary-ring estimates.
ALPHA_CONSTANT_ROUNDED = 1.25
#: Large-N limit of polygon_sum(N, 3) * pi^3 / N^3, zeta(3)/4.
ZETA3_QUARTER = float(special.zeta(3.0)) / 4.0
#: Above this count the sums switch to their asymptotic forms.
EXACT_SUM_LIMIT = 1_000_000


@dataclass(frozen=True)
class PolygonSum:
    N: int
    power: int
    value: float

    def __float__(self):
        return self.value


class ForceSeries(NamedTuple):
    c0: float
    c1: float
    c2: float


class RingBulk(NamedTuple):
    count: float
    fill: float
    alpha: float
    overfilled: bool


def _check_count(N):
    if int(N) != N or N < 2:
        raise DomainError(f"polygon needs N >= 2 particles, got {N!r}")
    return int(N)


def polygon_sum(N: int, p: int) -> PolygonSum:
    """Exact sum_{j=1}^{N-1} (2 sin(pi j/N))^-p for p in {1, 3}.

    For N above ``EXACT_SUM_LIMIT`` the leading asymptotic forms are used:
    ``N^3 zeta(3)/(4 pi^3)`` for p = 3 and ``N/pi (ln(2N/pi) + gamma)`` for
    p = 1, both with relative error below 1e-10 there.
    """
    N = _check_count(N)
    if p not in (1, 3):
        raise DomainError(f"power must be 1 or 3, got {p!r}")
    if N > EXACT_SUM_LIMIT:
        if p == 3:
            value = N**3 * ZETA3_QUARTER / math.pi**3
        else:
            value = N / math.pi * (math.log(2.0 * N / math.pi) + np.euler_gamma)
        return PolygonSum(N, p, value)
    s1, _, s3 = _kernels.sin_power_sums(N, 0.0)
    value = 0.5 * s1 if p == 1 else 0.125 * s3
    return PolygonSum(N, p, value)


def radial_force_series(cc: CentralConfiguration, phase: float = 0.0, G: float = 1.0) -> ForceSeries:
    """Coefficients of the radial companion force expanded in the offset x.

    With psi_j = 2 pi j/N + phase and s_j = sin(psi_j/2)::

        c0 = -sum G m / (R^2 (2 s_j)^2)
        c1 =  sum G m / R^3 * (3/(4 s_j) - 1/(2 s_j)^3)
        c2 =  sum G m / R^4 * (3.75/(2 s_j)^3 - 15/4 / (8 s_j))

    The quadratic coefficient keeps the grouping of its source expression
    verbatim.
    """
    N = cc.count
    if abs(phase) >= 2.0 * math.pi / N:
        raise DomainError("phase offset must satisfy |phi0| < 2 pi / N")
    if cc.particle_mass == 0:
        return ForceSeries(0.0, 0.0, 0.0)
    s1, s2, s3 = _kernels.sin_power_sums(N, phase)
    gm = G * cc.particle_mass
    R = cc.ring_radius
    c0 = -gm / R**2 * 0.25 * s2
    c1 = gm / R**3 * (0.75 * s1 - 0.125 * s3)
    c2 = gm / R**4 * (3.75 * 0.125 * s3 - 3.75 * 0.125 * s1)
    return ForceSeries(c0, c1, c2)


def ring_integral_force(surface_density: float, ring_radius: float, radius: float,
                        power: float = 1.5) -> float:
    """Continuous-ring kernel integral over the ring azimuth.

    ``int_0^{2pi} rho dl / (R0^2 + R^2 - 2 R R0 cos l)^power``.  The default
    power 3/2 is the force kernel whose discrete counterpart is
    ``discrete_ring_sum``; ``power=1`` evaluates the printed first-power
    form.
    """
    if surface_density == 0:
        return 0.0
    if not ring_radius > 0:
        raise ValidationError("ring radius must be positive")
    if abs(radius - ring_radius) / ring_radius < 1e-6:
        raise SingularityError("integrand is singular on the ring (R == R0)")

    def integrand(lam):
        return (ring_radius**2 + radius**2 - 2.0 * radius * ring_radius * math.cos(lam)) ** (-power)

    total = 0.0
    for a, b in ((0.0, math.pi), (math.pi, 2.0 * math.pi)):
        value, _ = integrate.quad(integrand, a, b, epsabs=0.0, epsrel=1e-10, limit=500)
        total += value
    return surface_density * total


def discrete_ring_sum(N: int, total_mass: float, ring_radius: float, radius: float,
                      power: float = 1.5) -> float:
    """Polygon of N equal masses (total ``total_mass``) seen from radius R.

    Discrete analogue of ``ring_integral_force`` with mass per unit azimuth
    ``total_mass / (2 pi)``.
    """
    N = _check_count(N)
    return total_mass / N * _kernels.discrete_ring_sum(N, ring_radius, radius, power)


def alpha_from_fill(particle_density: float, fill: float,
                    constant: float = ALPHA_CONSTANT) -> float:
    return constant * particle_density * fill**3


def alpha_density(cc: CentralConfiguration, constant: float = ALPHA_CONSTANT) -> float:
    """Interaction density alpha = 1.258784 rho sigma^3 (closed form)."""
    if cc.particle_density is None or cc.fill is None:
        raise ValidationError("alpha_density needs particle density and fill")
    return alpha_from_fill(cc.particle_density, cc.fill, constant)


def alpha_exact(cc: CentralConfiguration) -> float:
    """sum m / (2 R0 sin(pi i/N))^3, the exact-sum route to alpha."""
    return cc.particle_mass * polygon_sum(cc.count, 3).value / cc.ring_radius**3


def ring_bulk_properties(radius: float, surface_density: float, particle_density: float,
                         particle_radius: float) -> RingBulk:
    """Particle count, fill and alpha of a ring band of given surface density.

    N = 3 R rho_s / (2 rho r_k^2), sigma = rho_s / (4 rho r_k) and
    alpha = 1.25 rho sigma^3.  ``overfilled`` flags sigma > 1.
    """
    if not (radius > 0 and particle_density > 0 and particle_radius > 0):
        raise ValidationError("radius, particle density and particle radius must be positive")
    if surface_density < 0:
        raise ValidationError("surface density must be >= 0")
    count = 3.0 * radius * surface_density / (2.0 * particle_density * particle_radius**2)
    fill = surface_density / (4.0 * particle_density * particle_radius)
    alpha = alpha_from_fill(particle_density, fill, ALPHA_CONSTANT_ROUNDED)
    return RingBulk(count, fill, alpha, fill > 1.0)


def corrected_rotation(cc: CentralConfiguration, primary: PrimaryBody, G: float = 1.0) -> float:
    """Equilibrium angular velocity of the rotating polygon.

    Omega^2 = G M / R0^3 + G m sum_j 1/sin(pi j/N) / (4 R0^3); never below the
    Keplerian rate.
    """
    R = cc.ring_radius
    inv_sin_sum = 2.0 * polygon_sum(cc.count, 1).value
    return math.sqrt(G * primary.mass / R**3 + G * cc.particle_mass * inv_sin_sum / (4.0 * R**3))


def polygon_accelerations(cc: CentralConfiguration, primary: PrimaryBody, state, omega: float,
                          G: float = 1.0) -> tuple[float, float]:
    """Radial and angular accelerations of one particle of the polygon.

    ``state`` is (x, xdot, phi, phidot): radial offset from R0, its rate, the
    angular displacement from the stationary vertex and its rate, in the frame
    rotating at ``omega``.  Returns (xddot, phiddot).
    """
    x, xdot, phi, phidot = (float(v) for v in state)
    N = cc.count
    R0 = cc.ring_radius
    R = R0 + x
    if R <= 0:
        raise SingularityError("particle at or through the centre")
    radial = R * (phidot + omega) ** 2 - G * primary.mass / R**2
    tangential = 0.0
    if cc.particle_mass != 0:
        a = 2.0 * math.pi * np.arange(1, N) / N + phi
        s = np.sin(0.5 * a)
        c = np.cos(0.5 * a)
        chord = 2.0 * R0 * s
        den = x * x + chord * chord * (1.0 + x / R0)
        if np.min(np.abs(den)) < 1e-12 * R0 * R0:
            raise SingularityError("coincident particles")
        den32 = den**1.5
        gm = G * cc.particle_mass
        radial -= gm * np.sum((2.0 * R0 * s * s + x) / den32)
        tangential = -gm * np.sum(2.0 * R0 * s * c / den32)
    phiddot = (tangential - 2.0 * (phidot + omega) * xdot) / R
    return radial, phiddot
