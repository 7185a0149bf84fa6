"""Parametric-resonance zones of ring particles perturbed by satellites.

A p:q commensurability drives the parametric resonance of order
n = 2p/(p - q).  The zone centre solves 2 omega0 = n (Omega - omega_s) with
omega0^2 = G M / R^3 + G alpha (+ satellite mean term), which in
beta = R^{3/2} is the quadratic

    (4 alpha + 2 m/r^3 - n^2 M/r^3) beta^2 + 2 n^2 M / r^{3/2} beta + 4 M - n^2 M = 0.

Positive alpha (companion attraction) moves the zone toward the planet;
the halved negative value that applies beyond the linear region moves a
second, broad gap outward, so a multi-ring system shows two gaps per
resonance.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Mapping, NamedTuple, Sequence

import numpy as np
from scipy import optimize

from .core import (
    DomainError,
    G_CGS,
    PrimaryBody,
    RingresError,
    SatelliteRecord,
    ValidationError,
    worker_count,
)
from .polygon import ALPHA_CONSTANT_ROUNDED, ring_bulk_properties
from .satellite import hill_coefficient_at, satellite_stiffness


class NotIntegerOrderError(DomainError):
    """2p/(p-q) is not an integer."""


class NoRealResonanceError(DomainError):
    """The resonance condition has no real root."""


class SingularOrderError(DomainError):
    """The width formula is singular at order 2."""


def parametric_order(p: int, q: int) -> int:
    """Parametric order n = 2p/(p-q) of a p:q commensurability."""
    if int(p) != p or int(q) != q:
        raise DomainError("p and q must be integers")
    p, q = int(p), int(q)
    if not p > q >= 1:
        raise DomainError(f"need p > q >= 1, got {p}:{q}")
    if math.gcd(p, q) != 1:
        raise DomainError(f"{p}:{q} is not in lowest terms")
    n, rem = divmod(2 * p, p - q)
    if rem:
        raise NotIntegerOrderError(f"{p}:{q} gives 2p/(p-q) = {2 * p}/{p - q}: "
                                   "not an integer-order parametric resonance")
    return n


@dataclass(frozen=True)
class ResonanceSpec:
    p: int
    q: int

    def __post_init__(self):
        parametric_order(self.p, self.q)

    @property
    def order(self) -> int:
        return parametric_order(self.p, self.q)

    @classmethod
    def parse(cls, text: str) -> "ResonanceSpec":
        p, sep, q = text.strip().partition(":")
        if not sep:
            raise DomainError(f"resonance must look like 'p:q', got {text!r}")
        return cls(int(p), int(q))

    def __str__(self):
        return f"{self.p}:{self.q}"


class Branch(Enum):
    SINGLE_NARROW_GAP = "single"
    INNER_GAP = "inner_gap"
    OUTER_GAP = "outer_gap"
    OUTER_COMMENSURABILITY = "outer_commensurability"


@dataclass(frozen=True)
class InstabilityZone:
    """An unstable radial interval around a shifted commensurability.

    ``alpha`` is the interaction density used for this zone's centre
    (negative for the outer gap of a ring system).
    """

    satellite: str
    spec: ResonanceSpec
    center: float
    half_width: float
    branch: Branch
    alpha: float = 0.0

    def __post_init__(self):
        if not self.center > 0:
            raise ValidationError("zone centre must be positive")
        if not self.half_width >= 0:
            raise ValidationError("half width must be >= 0")


class ZoneCenters(NamedTuple):
    r_minus: float
    r_plus: float | None
    degenerate: bool


class ZoneWidth(NamedTuple):
    first: float
    second: float
    satellite: float


def _resonance_roots(n, a, mu):
    # beta / r^{3/2} roots in units M = r = 1; a = alpha r^3/M, mu = m/M
    A = 4.0 * a + 2.0 * mu - n * n
    B = 2.0 * n * n
    C = 4.0 - n * n
    disc = B * B - 4.0 * A * C
    if disc < 0:
        raise NoRealResonanceError(f"no real resonance for n={n}, alpha r^3/M={a}")
    root = math.sqrt(disc)
    beta_minus = -2.0 * C / (B + root)
    beta_plus = (B + root) / (-2.0 * A) if A < 0 else None
    return beta_minus, beta_plus


def zone_center(n: int, r: float, alpha: float, M: float, m: float = 0.0) -> ZoneCenters:
    """Both roots of the resonance quadratic, as radii.

    ``alpha`` (density), ``M`` and ``m`` may be in any consistent units; only
    alpha r^3/M and m/M enter.  ``r_minus`` is the inner commensurability,
    r (1 - 2/n)^{2/3} at alpha = m = 0; ``r_plus`` the outer one (None when
    the quadratic has no second positive root).  Order 2 returns the
    degenerate r_minus = 0 with ``degenerate`` set.
    """
    if int(n) != n or n < 2:
        raise DomainError("order must be an integer >= 2")
    if not (r > 0 and M > 0):
        raise DomainError("r and M must be positive")
    a = alpha * r**3 / M
    mu = m / M
    if 4.0 * a + 2.0 * mu == n * n:
        raise DomainError("n^2 = 4 alpha r^3/M + 2 m/M: resonance quadratic degenerates")
    beta_minus, beta_plus = _resonance_roots(n, a, mu)
    r_minus = r * beta_minus ** (2.0 / 3.0) if beta_minus > 0 else 0.0
    r_plus = r * beta_plus ** (2.0 / 3.0) if beta_plus is not None and beta_plus > 0 else None
    return ZoneCenters(r_minus, r_plus, n == 2)


def zone_center_closed_form(n: int, r: float, alpha: float, M: float) -> float:
    """R = r [(n^2 - 2 sqrt(n^2 + (n^2 - 4) alpha r^3/M)) / (n^2 - 4 alpha r^3/M)]^{2/3}."""
    a = alpha * r**3 / M
    inner = n * n + (n * n - 4) * a
    if inner < 0:
        raise NoRealResonanceError("negative discriminant")
    den = n * n - 4.0 * a
    if den == 0:
        raise DomainError("n^2 = 4 alpha r^3/M")
    beta = (n * n - 2.0 * math.sqrt(inner)) / den
    if beta < 0:
        raise NoRealResonanceError("closed form gives a negative radius")
    return r * beta ** (2.0 / 3.0)


def zone_width(k: int, omega0: float, omega_s: float = 0.0, mass_ratio: float = 0.0,
               b: float = 0.0, h: float = 0.0) -> ZoneWidth:
    """Frequency half-widths of the order-k zone.

    ``first`` = omega0 k h / (2(k-2)) and ``second`` = omega0 k h^2 / (8(k-2))
    from the harmonic amplitude; ``satellite`` = k omega_s (m/M) b / (2(k-2))
    from the Laplace coefficient.  Widths refer to the forcing frequency
    k Omega.
    """
    if k == 2:
        raise SingularOrderError("width formula is singular at order 2")
    if h < 0 or b < 0:
        raise DomainError("h and b must be >= 0")
    f = k / (2.0 * (k - 2))
    return ZoneWidth(omega0 * f * h, omega0 * f * h * h / 4.0, omega_s * mass_ratio * b * f)


def critical_radius(M: float, rho: float, sigma: float) -> float:
    """Distance beyond which companion attraction dominates: M / R^3 < 1.25 rho sigma^3."""
    if not M > 0:
        raise DomainError("M must be positive")
    if rho < 0 or sigma < 0:
        raise DomainError("density and fill must be >= 0")
    strength = ALPHA_CONSTANT_ROUNDED * rho * sigma**3
    if strength == 0:
        return math.inf
    return (M / strength) ** (1.0 / 3.0)


# -- exact resonance condition -------------------------------------------------

_MEAN_GRID = 256


def _mean_stiffness(R, mu):
    if mu == 0:
        return 0.0
    dl = 2.0 * math.pi * np.arange(_MEAN_GRID) / _MEAN_GRID
    return float(satellite_stiffness(R, 1.0, mu, dl).mean())


def resonance_mismatch(R: float, n: int, a: float, mu: float) -> float:
    """2 omega_eff - n (Omega - omega_s) at R, in units G = M = r = 1.

    omega_eff^2 includes the full synodic mean of the satellite stiffness.
    """
    w2 = R**-3 + a + _mean_stiffness(R, mu)
    if w2 <= 0:
        raise DomainError("non-positive stiffness")
    return 2.0 * math.sqrt(w2) - n * (R**-1.5 - 1.0)


def _refine(n, a, mu, seed):
    if mu == 0:
        return seed
    f = lambda R: resonance_mismatch(R, n, a, mu)  # noqa: E731
    lo, hi = seed * (1 - 1e-3), min(seed * (1 + 1e-3), 0.999)
    for _ in range(20):
        if f(lo) * f(hi) < 0:
            return optimize.brentq(f, lo, hi, xtol=1e-15, rtol=1e-15)
        lo, hi = lo * (1 - 1e-2), min(hi * (1 + 1e-2), 0.999)
    raise NoRealResonanceError("could not bracket the refined resonance")


def landau_half_width(center: float, n: int, a: float, mu: float, n_max: int = 64) -> float:
    """Radial half-width (units of r) of the order-n zone from its harmonic amplitude."""
    if mu == 0:
        return 0.0
    coeff = hill_coefficient_at(center, 1.0, SatelliteRecord("", mu, 1.0), max(n_max, n), a)
    h_eff = abs(coeff.harmonic(n)) / (1.0 + coeff.mean_offset)
    eps = zone_width(n, coeff.effective_omega, h=h_eff).first
    step = 1e-6 * center
    slope = (resonance_mismatch(center + step, n, a, mu)
             - resonance_mismatch(center - step, n, a, mu)) / (2.0 * step)
    return eps * (n - 2) / n / abs(slope)


def _single_zone(name, spec, r, alpha, M, m, branch, n_max):
    n = spec.order
    a = alpha * r**3 / M
    mu = m / M
    seed = zone_center(n, r, alpha, M, m).r_minus / r
    center = _refine(n, a, mu, seed)
    hw = landau_half_width(center, n, a, mu, n_max)
    return InstabilityZone(name, spec, center * r, hw * r, branch, alpha)


def negative_alpha_zones(n: int, r: float, alpha: float, M: float, N: float, R_ctx: float,
                         satellite: str = "", m: float = 0.0, spec: ResonanceSpec | None = None,
                         n_max: int = 64) -> tuple[InstabilityZone, InstabilityZone]:
    """The two gaps of a resonance in a system of rings.

    The inner gap is the narrow single-configuration zone (interaction
    density +alpha, shifted toward the planet).  The outer gap uses
    alpha_1 = -alpha/2, which applies once a particle leaves the linear
    region of the companion potential; it is shifted away from the planet
    and spans +- dx = 2 pi R_ctx / N, the extent of that region.
    """
    if N < 2:
        raise DomainError("particle count must be >= 2")
    if spec is None:
        spec = next(ResonanceSpec(p, q) for q in range(1, n) for p in range(q + 1, 4 * n)
                    if math.gcd(p, q) == 1 and 2 * p == n * (p - q))
    elif spec.order != n:
        raise DomainError("spec order does not match n")
    inner = _single_zone(satellite, spec, r, alpha, M, m, Branch.INNER_GAP, n_max)
    outer_core = _single_zone(satellite, spec, r, -0.5 * alpha, M, m, Branch.OUTER_GAP, n_max)
    dx = 2.0 * math.pi * R_ctx / N
    outer = InstabilityZone(satellite, spec, outer_core.center,
                            max(dx, outer_core.half_width), Branch.OUTER_GAP, -0.5 * alpha)
    return inner, outer


# -- scans ------------------------------------------------------------------------

@dataclass(frozen=True)
class RingProperties:
    """Bulk ring parameters entering the interaction density (CGS)."""

    surface_density: float
    particle_density: float
    particle_radius: float

    def bulk(self, radius: float):
        return ring_bulk_properties(radius, self.surface_density, self.particle_density,
                                    self.particle_radius)

    @property
    def alpha(self) -> float:
        # independent of radius for the band estimates used here
        return self.bulk(1.0).alpha


@dataclass
class ScanResult:
    zones: list[InstabilityZone] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    def __iter__(self):
        return iter(self.zones)

    def __len__(self):
        return len(self.zones)

    def __getitem__(self, i):
        return self.zones[i]


class ScanMode(Enum):
    SINGLE = "single"
    SYSTEM = "system"


def _pairs(satellites, specs):
    for sat in satellites:
        if specs is None:
            chosen = getattr(sat, "resonances", ())
        elif isinstance(specs, Mapping):
            chosen = specs.get(sat.name, ())
        else:
            chosen = specs
        for s in chosen:
            yield sat, s if isinstance(s, ResonanceSpec) else ResonanceSpec(*s)


def scan(primary: PrimaryBody, ring_band: tuple[float, float], satellites: Iterable[SatelliteRecord],
         specs: Sequence | Mapping | None = None, mode: ScanMode | str = ScanMode.SINGLE,
         ring_props: RingProperties | None = None, alpha: float | None = None,
         particle_count: float | None = None, n_max: int = 64,
         workers: int | None = None) -> ScanResult:
    """Instability zones of every (satellite, commensurability) pair inside a band.

    ``specs`` is a list of (p, q) applied to every satellite or a mapping from
    satellite name to its list.  ``alpha`` overrides the interaction density
    derived from ``ring_props``.  SINGLE mode gives one zone per pair, SYSTEM
    mode an inner and an outer gap.  Zones outside ``ring_band`` are dropped;
    per-pair failures are collected in ``warnings``.  Output is sorted by
    centre.
    """
    mode = ScanMode(mode) if not isinstance(mode, ScanMode) else mode
    r_in, r_out = ring_band
    if not r_in < r_out:
        raise DomainError("ring band must satisfy R_in < R_out")
    satellites = list(satellites)
    if alpha is None:
        alpha = ring_props.alpha if ring_props is not None else 0.0
    pairs = list(_pairs(satellites, specs))

    def one(pair):
        sat, spec = pair
        try:
            if mode is ScanMode.SINGLE:
                return [_single_zone(sat.name, spec, sat.orbit_radius, alpha, primary.mass,
                                     sat.mass, Branch.SINGLE_NARROW_GAP, n_max)], None
            seed = zone_center(spec.order, sat.orbit_radius, alpha, primary.mass, sat.mass).r_minus
            if ring_props is not None:
                N = ring_props.bulk(seed).count
            else:
                N = particle_count if particle_count is not None else math.inf
            if not N >= 2:
                raise DomainError("ring has fewer than two particles")
            return list(negative_alpha_zones(spec.order, sat.orbit_radius, alpha, primary.mass,
                                             N, seed, sat.name, sat.mass, spec, n_max)), None
        except RingresError as exc:
            return [], f"{sat.name} {spec}: {exc}"

    n_workers = workers or worker_count(1)
    if n_workers > 1 and len(pairs) > 1:
        with ThreadPoolExecutor(max_workers=n_workers) as pool:
            outcomes = list(pool.map(one, pairs))
    else:
        outcomes = [one(pair) for pair in pairs]

    result = ScanResult()
    for zones, warning in outcomes:
        if warning:
            result.warnings.append(warning)
        result.zones.extend(z for z in zones if r_in <= z.center <= r_out)
    result.zones.sort(key=lambda z: (z.center, z.satellite, z.branch.value))
    return result


# -- figure data ---------------------------------------------------------------------

def shift_vs_order(alpha_norm: float = 0.1, orders: Iterable[int] = range(3, 13)) -> list[dict]:
    """Zone-centre shift against resonance order at fixed alpha r^3/M (m = 0)."""
    rows = []
    for n in orders:
        base = (1.0 - 2.0 / n) ** (2.0 / 3.0)
        shifted = zone_center(n, 1.0, alpha_norm, 1.0).r_minus
        rows.append({"n": n, "commensurability": base, "center": shifted,
                     "shift": shifted - base, "relative_shift": (shifted - base) / base})
    return rows


def shift_vs_particle_size(M: float, r: float, n: int, particle_radii: Iterable[float],
                           particle_density: float = 1.0, surface_density: float | None = 60.0,
                           count: float | None = None, ring_radius: float | None = None) -> list[dict]:
    """Zone-centre shift against particle radius.

    With ``surface_density`` the fill follows the band estimate
    sigma = rho_s / (4 rho r_k); with ``count`` and ``ring_radius`` instead it
    is the geometric fill r_k N / (pi R).
    """
    base = zone_center(n, r, 0.0, M).r_minus
    rows = []
    for rk in particle_radii:
        if count is not None:
            sigma = rk * count / (math.pi * ring_radius)
        else:
            sigma = surface_density / (4.0 * particle_density * rk)
        alpha = ALPHA_CONSTANT_ROUNDED * particle_density * sigma**3
        center = zone_center(n, r, alpha, M).r_minus
        rows.append({"particle_radius": rk, "fill": sigma, "alpha": alpha, "center": center,
                     "shift": center - base})
    return rows


def resonance_structure(alpha_norm: float = 0.5, orders: Iterable[int] = range(3, 13)) -> list[dict]:
    """Gap positions per order, three-body commensurability against the two-gap structure."""
    rows = []
    for n in orders:
        base = (1.0 - 2.0 / n) ** (2.0 / 3.0)
        inner = zone_center(n, 1.0, alpha_norm, 1.0).r_minus
        outer = zone_center(n, 1.0, -0.5 * alpha_norm, 1.0).r_minus
        rows.append({"n": n, "commensurability": base, "inner_gap": inner, "outer_gap": outer})
    return rows
