"""Perturbation of a ring particle by a distant satellite on a circular orbit.

The satellite's tidal stiffness (the x-coefficient of its radial force) is
periodic in the synodic angle; its Fourier decomposition gives the harmonic
amplitudes h_n of the Hill coefficient

    omega^2(t) = omega0^2 (1 + h_0 + sum_n h_n cos(n nu t)),   nu = Omega - omega_s.

All functions take an explicit gravitational constant ``G`` (1 in
normalized units).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy import special

from .core import (
    CentralConfiguration,
    DegenerateConfigurationError,
    DomainError,
    PrimaryBody,
    SatelliteRecord,
    SingularityError,
)
from .polygon import polygon_sum


@dataclass(frozen=True)
class HillCoefficient:
    """Periodic coefficient of the homogeneous Hill equation.

    ``harmonics[k]`` is h_{k+1}.  ``mean_offset`` (h_0) is the synodic mean of
    the satellite stiffness relative to ``omega0_sq``; it moves the natural
    frequency but does not modulate it.  ``forcing_mean`` is the mean of the
    satellite's constant radial force (the inhomogeneous term), kept for
    reference only.
    """

    omega0_sq: float
    harmonics: tuple[float, ...]
    forcing_freq: float
    mean_offset: float = 0.0
    forcing_mean: float = 0.0

    @property
    def omega0(self) -> float:
        return math.sqrt(self.omega0_sq)

    @property
    def effective_omega(self) -> float:
        return math.sqrt(self.omega0_sq * (1.0 + self.mean_offset))

    def harmonic(self, n: int) -> float:
        if 1 <= n <= len(self.harmonics):
            return self.harmonics[n - 1]
        return 0.0


class LegendreTerm(NamedTuple):
    value: float
    tail_bound: float


def laplace_coefficient(s: float, n: int, ratio: float) -> float:
    """b_s^(n)(ratio) = 2/pi int_0^pi cos(n t) (1 - 2 ratio cos t + ratio^2)^-s dt."""
    if not 0 <= ratio < 1:
        raise DomainError(f"Laplace coefficient needs 0 <= ratio < 1, got {ratio!r}")
    n = int(n)
    if n < 0:
        raise DomainError("Laplace coefficient index must be >= 0")
    if ratio == 0:
        return 2.0 if n == 0 else 0.0
    # trapezoid rule on the full period converges like ratio^K for this analytic integrand
    k = max(64, 4 * n)
    prev = None
    while True:
        t = 2.0 * math.pi * np.arange(k) / k
        value = 2.0 / k * float(np.sum(np.cos(n * t) * (1.0 - 2.0 * ratio * np.cos(t)
                                                        + ratio * ratio) ** (-s)))
        if prev is not None and abs(value - prev) <= 1e-15 * max(1.0, abs(value)):
            return value
        if k > 1 << 20:
            raise DomainError("Laplace coefficient quadrature did not converge")
        prev = value
        k *= 2


def _distance_sq(R, r, dl):
    d2 = R * R + r * r - 2.0 * R * r * np.cos(dl)
    if np.any(np.asarray(d2) <= 0):
        raise SingularityError("ring particle coincides with the satellite")
    return d2


def radial_expansion(R: float, r: float, m: float, dl: float, G: float = 1.0) -> tuple[float, float]:
    """Radial satellite force and its x-coefficient at synodic angle ``dl``.

    Returns (-G m (R - r cos dl) / D^{3/2},
    -G m / D^{3/2} + 3 G m (R - r cos dl)^2 / D^{5/2}) with
    D = R^2 + r^2 - 2 R r cos dl.
    """
    if m == 0:
        return 0.0, 0.0
    d2 = float(_distance_sq(R, r, dl))
    gm = G * m
    u = R - r * math.cos(dl)
    return -gm * u / d2**1.5, -gm / d2**1.5 + 3.0 * gm * u * u / d2**2.5


def tangential_expansion(R: float, r: float, m: float, dl: float, G: float = 1.0) -> tuple[float, float]:
    """Tangential satellite term and its x-coefficient at synodic angle ``dl``."""
    if m == 0:
        return 0.0, 0.0
    d2 = float(_distance_sq(R, r, dl))
    gm = G * m
    sin_dl = math.sin(dl)
    u = R - r * math.cos(dl)
    const = -gm * R * r * sin_dl / d2**1.5
    linear = (-gm / d2**1.5 + 3.0 * gm * u * R / d2**2.5) * r * sin_dl
    return const, linear


def satellite_stiffness(R, r, m, dl, G=1.0):
    """x-coefficient of the radial satellite force, vectorized over ``dl``."""
    dl = np.asarray(dl, dtype=float)
    if m == 0:
        return np.zeros_like(dl)
    d2 = _distance_sq(R, r, dl)
    u = R - r * np.cos(dl)
    gm = G * m
    return -gm / d2**1.5 + 3.0 * gm * u * u / d2**2.5


def _legendre_tail(y: float, p_max: int) -> float:
    # sum_{p > p_max} p (p-1) y^(p-2), terms decrease once p > 2/(1-y)
    tail = 0.0
    p = p_max + 1
    while True:
        term = p * (p - 1) * y ** (p - 2)
        tail += term
        if p > 2.0 / (1.0 - y) + 2 and term <= 1e-17 * tail:
            break
        p += 1
    return tail


def legendre_omega_term(R: float, r: float, m: float, dl: float, p_max: int,
                        G: float = 1.0) -> LegendreTerm:
    """(G m / r^3) sum_{p=2}^{p_max} p (p-1) (R/r)^(p-2) P_p(cos dl).

    Interior Legendre form of the satellite stiffness. ``tail_bound`` bounds
    the truncated remainder using |P_p| <= 1.
    """
    if not R < r:
        raise DomainError("Legendre expansion needs R < r")
    if p_max < 2:
        raise DomainError("p_max must be >= 2")
    y = R / r
    scale = G * m / r**3
    if m == 0:
        return LegendreTerm(0.0, 0.0)
    p = np.arange(2, p_max + 1)
    terms = p * (p - 1) * y ** (p - 2) * special.eval_legendre(p, math.cos(dl))
    return LegendreTerm(float(scale * terms.sum()), abs(scale) * _legendre_tail(y, p_max))


def hill_coefficient_at(radius: float, central_mass: float, satellite: SatelliteRecord,
                        n_max: int = 64, interaction: float = 0.0, G: float = 1.0,
                        grid_points: int | None = None) -> HillCoefficient:
    """Hill coefficient of a ring particle at ``radius``.

    ``interaction`` is the companion contribution to omega0^2 (G alpha in
    1/time^2).  Harmonics come from trapezoidal quadrature of the satellite
    stiffness on ``grid_points`` (default 4 n_max) equally spaced synodic
    angles, normalized by omega0^2.
    """
    if n_max < 1:
        raise DomainError("n_max must be >= 1")
    if not radius < satellite.orbit_radius:
        raise DomainError("ring radius must lie inside the satellite orbit")
    omega0_sq = G * central_mass / radius**3 + interaction
    if not omega0_sq > 0:
        raise DegenerateConfigurationError(f"omega0^2 = {omega0_sq!r} is not positive")
    k = grid_points or 4 * n_max
    dl = 2.0 * math.pi * np.arange(k) / k
    stiff = satellite_stiffness(radius, satellite.orbit_radius, satellite.mass, dl, G)
    n = np.arange(1, n_max + 1)
    coeffs = (2.0 / k) * (np.cos(np.outer(n, dl)) @ stiff)
    harmonics = tuple(float(v) for v in coeffs / omega0_sq)
    mean_offset = float(stiff.mean() / omega0_sq)
    forcing_mean = 0.0
    if satellite.mass:
        r = satellite.orbit_radius
        d2 = radius**2 + r * r - 2.0 * radius * r * np.cos(dl)
        forcing_mean = float(np.mean(-G * satellite.mass * (radius - r * np.cos(dl)) / d2**1.5))
    nu = math.sqrt(G * central_mass / radius**3) - math.sqrt(G * central_mass / satellite.orbit_radius**3)
    return HillCoefficient(omega0_sq, harmonics, nu, mean_offset, forcing_mean)


def build_hill_coefficient(cc: CentralConfiguration, primary: PrimaryBody, sat: SatelliteRecord,
                           n_max: int = 64, G: float = 1.0) -> HillCoefficient:
    """Hill coefficient for a particle of ``cc`` perturbed by ``sat``.

    omega0^2 = G M / R0^3 + sum_i G m / (2 R0 sin(pi i/N))^3.
    """
    interaction = G * cc.particle_mass * polygon_sum(cc.count, 3).value / cc.ring_radius**3
    return hill_coefficient_at(cc.ring_radius, primary.mass, sat, n_max, interaction, G)
