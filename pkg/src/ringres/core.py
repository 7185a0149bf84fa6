"""Domain types, unit conventions and conversions shared across the package.

Computations run in normalized units (G = 1, central mass = 1, reference
radius = 1) or in CGS; the conversion helpers below move values between the
two.  Dimensioned quantities are described by their (mass, length, time)
exponents.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from enum import Enum

#: Gravitational constant at the CGS boundary [cm^3 g^-1 s^-2].
G_CGS = 6.674e-8
#: Centimetres per kilometre.
KM = 1.0e5
#: Consistency tolerance for (fill, count, particle radius, ring radius).
FILL_RTOL = 1e-9


class RingresError(Exception):
    """Base class for all package errors."""


class ValidationError(RingresError, ValueError):
    """Invalid construction arguments for a domain value."""


class DomainError(RingresError, ValueError):
    """Arguments outside the domain of a formula."""


class SingularityError(RingresError, ArithmeticError):
    """An expression is evaluated at (or numerically at) a singular point."""


class DegenerateConfigurationError(RingresError):
    """The configuration has no meaningful oscillation frequency."""


class UnitSystem(Enum):
    CGS = "cgs"
    NORMALIZED = "normalized"


# (mass, length, time) exponents
DIMENSIONS: dict[str, tuple[int, int, int]] = {
    "dimensionless": (0, 0, 0),
    "mass": (1, 0, 0),
    "length": (0, 1, 0),
    "time": (0, 0, 1),
    "frequency": (0, 0, -1),
    "frequency_sq": (0, 0, -2),
    "acceleration": (0, 1, -2),
    "density": (1, -3, 0),
    "surface_density": (1, -2, 0),
}


@dataclass(frozen=True)
class PrimaryBody:
    name: str
    mass: float

    def __post_init__(self):
        if not self.mass > 0:
            raise ValidationError(f"central mass must be positive, got {self.mass!r}")


@dataclass(frozen=True)
class SatelliteRecord:
    name: str
    mass: float
    orbit_radius: float

    def __post_init__(self):
        if not self.mass >= 0:
            raise ValidationError(f"satellite mass must be >= 0, got {self.mass!r}")
        if not self.orbit_radius > 0:
            raise ValidationError(
                f"satellite orbit radius must be positive, got {self.orbit_radius!r}"
            )

    def with_mass(self, mass: float) -> "SatelliteRecord":
        return SatelliteRecord(self.name, mass, self.orbit_radius)


@dataclass(frozen=True)
class CentralConfiguration:
    """N equal particles at the vertices of a regular polygon.

    Parameters
    ----------
    count : int
        Number of particles N (>= 2).
    particle_mass : float
        Mass of one particle. Zero is accepted for massless test rings.
    ring_radius : float
        Polygon circumradius R0.
    particle_radius, particle_density : float, optional
        Physical particle size and bulk density.
    fill : float, optional
        Coefficient of filling ``r_k N / (pi R0)``. Derived from
        ``particle_radius`` when omitted; checked against it when both given.
    """

    count: int
    particle_mass: float
    ring_radius: float
    particle_radius: float | None = None
    particle_density: float | None = None
    fill: float | None = None

    def __post_init__(self):
        if int(self.count) != self.count or self.count < 2:
            raise ValidationError(f"particle count must be an integer >= 2, got {self.count!r}")
        if not self.particle_mass >= 0:
            raise ValidationError("particle mass must be >= 0")
        if not self.ring_radius > 0:
            raise ValidationError("ring radius must be positive")
        for name in ("particle_radius", "particle_density"):
            value = getattr(self, name)
            if value is not None and not value > 0:
                raise ValidationError(f"{name} must be positive")
        implied = None
        if self.particle_radius is not None:
            implied = self.particle_radius * self.count / (math.pi * self.ring_radius)
        if self.fill is None:
            if implied is not None:
                object.__setattr__(self, "fill", implied)
        elif implied is not None and abs(implied - self.fill) > FILL_RTOL * max(abs(self.fill), 1e-300):
            raise ValidationError(
                f"inconsistent fill: sigma={self.fill!r} but r_k*N/(pi*R0)={implied!r}"
            )
        if self.fill is not None and not 0 < self.fill <= 1:
            raise ValidationError(f"fill coefficient must lie in (0, 1], got {self.fill!r}")

    @classmethod
    def from_particles(cls, count, ring_radius, particle_radius, particle_density):
        """Build a configuration of homogeneous spheres; mass = 4/3 pi r^3 rho."""
        mass = 4.0 / 3.0 * math.pi * particle_radius**3 * particle_density
        return cls(count, mass, ring_radius, particle_radius, particle_density)

    @property
    def total_mass(self) -> float:
        return self.count * self.particle_mass


@dataclass(frozen=True)
class Normalization:
    """Scales for G = 1, M = 1, r_ref = 1 units.

    ``G`` is the gravitational constant of the dimensioned system the
    quantities come from (CGS by default).
    """

    primary: PrimaryBody
    reference_radius: float
    G: float = G_CGS
    _time: float = field(init=False, repr=False)

    def __post_init__(self):
        if not self.reference_radius > 0:
            raise ValidationError("reference radius must be positive")
        if not self.G > 0:
            raise ValidationError("gravitational constant must be positive")
        t = math.sqrt(self.reference_radius**3 / (self.G * self.primary.mass))
        object.__setattr__(self, "_time", t)

    def scale(self, kind: str) -> float:
        try:
            a, b, c = DIMENSIONS[kind]
        except KeyError:
            raise ValidationError(f"unknown quantity kind {kind!r}") from None
        return self.primary.mass**a * self.reference_radius**b * self._time**c


def to_normalized(value: float, kind: str, ctx: Normalization) -> float:
    """Express a dimensioned value in G = 1, M = 1, r_ref = 1 units."""
    return value / ctx.scale(kind)


def from_normalized(value: float, kind: str, ctx: Normalization) -> float:
    return value * ctx.scale(kind)


def km_to_cm(value: float) -> float:
    return value * KM


def cm_to_km(value: float) -> float:
    return value / KM


def worker_count(default: int | None = None) -> int:
    """Worker cap from ``RINGRES_THREADS`` (falls back to the CPU count)."""
    env = os.environ.get("RINGRES_THREADS")
    if env:
        try:
            n = int(env)
        except ValueError:
            n = 1
        return max(1, n)
    if default is not None:
        return max(1, default)
    return max(1, os.cpu_count() or 1)
