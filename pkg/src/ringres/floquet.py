"""Floquet analysis of the homogeneous Hill equation x'' + omega^2(t) x = 0.

The monodromy matrix is propagated with fixed-step RK4 in the interaction
picture: the unperturbed rotation at the mean frequency is applied exactly
and only the O(h) remainder is integrated.  This keeps the stability margin
``|trace| - 2`` accurate to O(h^2) even when the harmonics are of order 1e-8,
where the trace itself sits within rounding of 2.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Mapping, NamedTuple, Sequence

import numpy as np

from . import _kernels
from .core import (
    DegenerateConfigurationError,
    DomainError,
    G_CGS,
    PrimaryBody,
    SatelliteRecord,
    worker_count,
)
from .satellite import HillCoefficient, hill_coefficient_at

DEFAULT_STEPS = 1024
MIN_STEPS = 256
#: Largest phase (rad) the fastest local oscillation may advance per RK4 step.
MAX_PHASE_STEP = 0.015
#: Classification tolerance on |trace| - 2.
CLASSIFICATION_TOL = 1e-9


class NonPeriodicError(DomainError):
    """Zero forcing frequency: the coefficient has no period."""


@dataclass(frozen=True)
class MonodromyResult:
    trace: float
    determinant: float
    multipliers: tuple[complex, complex]
    stable: bool
    growth_exponent: float
    margin: float
    period: float
    matrix: np.ndarray = field(repr=False, compare=False)


class TongueInterval(NamedTuple):
    nu_lo: float
    nu_hi: float
    max_growth_exponent: float


def monodromy(coeff: HillCoefficient, steps_per_period: int = DEFAULT_STEPS,
              phase: float = 0.0, tol: float = CLASSIFICATION_TOL) -> MonodromyResult:
    """Monodromy matrix of the Hill equation over one period 2 pi/|nu|.

    Parameters
    ----------
    coeff : HillCoefficient
    steps_per_period : int
        Minimum RK4 steps per period (>= 256).  Raised when needed so that a
        step advances the fastest local phase by at most ``MAX_PHASE_STEP``.
    phase : float
        Time-origin shift of the periodic coefficient.
    tol : float
        Instability threshold on ``|trace| - 2``, applied relative to the
        squared size of the perturbation propagator when that is below one.

    Returns
    -------
    MonodromyResult
        ``matrix`` is in (x, xdot) coordinates.  ``margin`` is
        ``|trace| - 2``; ``growth_exponent`` is ln(max |multiplier|) / period.
    """
    nu = coeff.forcing_freq
    if nu == 0:
        raise NonPeriodicError("forcing frequency is zero")
    if steps_per_period < MIN_STEPS:
        raise DomainError(f"steps_per_period must be >= {MIN_STEPS}")
    omega_sq = coeff.omega0_sq * (1.0 + coeff.mean_offset)
    if not omega_sq > 0:
        raise DegenerateConfigurationError("mean stiffness is not positive")
    omega = math.sqrt(omega_sq)
    period = 2.0 * math.pi / abs(nu)
    peak = coeff.omega0_sq * (1.0 + coeff.mean_offset + sum(abs(v) for v in coeff.harmonics))
    steps = max(int(steps_per_period), math.ceil(math.sqrt(peak) * period / MAX_PHASE_STEP))
    w11, w12, w21, w22 = _kernels.interaction_propagator(
        omega, coeff.omega0_sq, np.asarray(coeff.harmonics, dtype=float), nu, phase, steps)

    theta = omega * period
    k = round(theta / math.pi)
    delta = theta - k * math.pi
    sign = -1.0 if k % 2 else 1.0
    det_w = w11 * w22 - w12 * w21
    # tr W = -det W exactly for the traceless flow; the product form keeps
    # O(h^2) precision where the sum cancels
    margin = -4.0 * math.sin(0.5 * delta) ** 2 - math.cos(delta) * det_w \
        + math.sin(delta) * (w21 - w12)
    determinant = 1.0 + (w11 + w22) + det_w
    size_sq = w11 * w11 + w12 * w12 + w21 * w21 + w22 * w22
    threshold = tol * min(1.0, size_sq)
    stable = margin <= threshold
    trace = sign * (2.0 + margin)

    if margin > 0:
        mu = 2.0 * math.asinh(math.sqrt(0.25 * margin))
        multipliers = (complex(sign * math.exp(mu)), complex(sign * math.exp(-mu)))
        growth = mu / period
    else:
        phi = 2.0 * math.asin(min(1.0, math.sqrt(-0.25 * margin)))
        rot = complex(math.cos(phi), math.sin(phi))
        multipliers = (sign * rot, sign * rot.conjugate())
        growth = 0.0
    if stable:
        growth = 0.0

    c, s = math.cos(theta), math.sin(theta)
    rot_t = np.array([[c, s], [-s, c]])
    m_xu = rot_t @ np.array([[1.0 + w11, w12], [w21, 1.0 + w22]])
    scale = np.diag([1.0, omega])
    matrix = scale @ m_xu @ np.diag([1.0, 1.0 / omega])
    return MonodromyResult(trace, determinant, multipliers, bool(stable), growth, margin,
                           period, matrix)


def _harmonic_tuple(h) -> tuple[float, ...]:
    if isinstance(h, Mapping):
        if not h:
            return ()
        n_max = max(int(n) for n in h)
        out = [0.0] * n_max
        for n, value in h.items():
            if int(n) < 1:
                raise DomainError("harmonic index must be >= 1")
            out[int(n) - 1] = float(value)
        return tuple(out)
    if isinstance(h, Sequence) or isinstance(h, np.ndarray):
        return tuple(float(v) for v in h)
    return (float(h),)


def _classify(omega0_sq, harmonics, steps, nu):
    return monodromy(HillCoefficient(omega0_sq, harmonics, nu), steps)


def tongue_scan(omega0: float, h, nu_range: tuple[float, float], resolution: int = 200,
                steps_per_period: int = DEFAULT_STEPS, rtol: float = 1e-6,
                workers: int | None = None) -> list[TongueInterval]:
    """Unstable forcing-frequency intervals of x'' + omega0^2 (1 + sum h_n cos(n nu t)) x = 0.

    ``h`` is a scalar (first harmonic), a sequence (h_1, h_2, ...) or a
    mapping {n: h_n}.  The range is sampled at ``resolution`` points and each
    stability boundary is refined by bisection to relative ``rtol``.
    """
    lo, hi = (float(v) for v in nu_range)
    if not 0 < lo < hi:
        raise DomainError("nu range must satisfy 0 < lo < hi")
    if resolution < 100:
        raise DomainError("resolution must be >= 100")
    harmonics = _harmonic_tuple(h)
    if sum(abs(v) for v in harmonics) >= 1:
        raise DomainError("harmonic amplitudes must sum below 1")
    if not any(harmonics):
        return []
    omega0_sq = omega0 * omega0
    grid = np.linspace(lo, hi, resolution)
    n_workers = workers or worker_count()

    def run(nu):
        return _classify(omega0_sq, harmonics, steps_per_period, float(nu))

    if n_workers > 1 and _kernels.BACKEND == "cython":
        with ThreadPoolExecutor(max_workers=n_workers) as pool:
            results = list(pool.map(run, grid))
    else:
        results = [run(nu) for nu in grid]
    unstable = [not r.stable for r in results]

    def boundary(a, b, a_unstable):
        # a and b bracket a stability change; returns the crossing
        while abs(b - a) > rtol * abs(0.5 * (a + b)):
            mid = 0.5 * (a + b)
            if (not run(mid).stable) == a_unstable:
                a = mid
            else:
                b = mid
        return 0.5 * (a + b)

    intervals = []
    i = 0
    while i < len(grid):
        if not unstable[i]:
            i += 1
            continue
        j = i
        while j + 1 < len(grid) and unstable[j + 1]:
            j += 1
        nu_lo = grid[i] if i == 0 else boundary(grid[i], grid[i - 1], True)
        nu_hi = grid[j] if j == len(grid) - 1 else boundary(grid[j], grid[j + 1], True)
        growth = max(r.growth_exponent for r in results[i:j + 1])
        growth = max(growth, run(0.5 * (nu_lo + nu_hi)).growth_exponent)
        intervals.append(TongueInterval(float(nu_lo), float(nu_hi), float(growth)))
        i = j + 1
    return intervals


@dataclass(frozen=True)
class ZoneVerification:
    satellite: str
    order: int
    analytic: tuple[float, float] | None
    measured: tuple[float, float] | None
    overlap: float
    status: str
    max_growth_exponent: float = 0.0


def interval_overlap(a, b) -> float:
    """Intersection over union of two closed intervals (1.0 when both empty)."""
    if a is None and b is None:
        return 1.0
    if a is None or b is None:
        return 0.0
    inter = max(0.0, min(a[1], b[1]) - max(a[0], b[0]))
    union = max(a[1], b[1]) - min(a[0], b[0])
    return inter / union if union > 0 else 1.0


def verify_zone(zone, primary: PrimaryBody, satellite: SatelliteRecord, alpha: float | None = None,
                G: float = G_CGS, samples: int = 61, steps_per_period: int = DEFAULT_STEPS,
                n_max: int | None = None) -> ZoneVerification:
    """Measure the unstable radial interval around an analytic zone by Floquet analysis.

    The Hill coefficient is rebuilt at ``samples`` radii spanning
    ``center +- 3 half_width`` (in units where G = M = r_sat = 1); the
    unstable run nearest the centre is refined by bisection.  ``alpha`` is
    the interaction density in force for the zone (defaults to the value
    recorded on the zone).
    """
    n = zone.spec.order
    r_sat = satellite.orbit_radius
    if alpha is None:
        alpha = zone.alpha
    a_norm = alpha * r_sat**3 / primary.mass
    sat_norm = SatelliteRecord(satellite.name, satellite.mass / primary.mass, 1.0)
    n_max = n_max or max(16, 2 * n)
    grid_points = max(4 * n_max, 256)
    c = zone.center / r_sat
    hw = zone.half_width / r_sat
    analytic = (zone.center - zone.half_width, zone.center + zone.half_width) if hw > 0 else None
    half_window = 3.0 * hw if hw > 0 else 1e-6 * c
    tol = (hw if hw > 0 else half_window) * 1e-4

    def result_at(R):
        coeff = hill_coefficient_at(R, 1.0, sat_norm, n_max, a_norm, 1.0, grid_points)
        return monodromy(coeff, steps_per_period)

    radii = np.linspace(c - half_window, c + half_window, samples)
    results = [result_at(R) for R in radii]
    unstable = [not r.stable for r in results]
    runs = []
    i = 0
    while i < samples:
        if unstable[i]:
            j = i
            while j + 1 < samples and unstable[j + 1]:
                j += 1
            runs.append((i, j))
            i = j + 1
        else:
            i += 1

    def boundary(a, b):
        # a unstable, b stable
        while abs(b - a) > tol:
            mid = 0.5 * (a + b)
            if not result_at(mid).stable:
                a = mid
            else:
                b = mid
        return 0.5 * (a + b)

    measured = None
    growth = 0.0
    if runs:
        i, j = min(runs, key=lambda ij: abs(0.5 * (radii[ij[0]] + radii[ij[1]]) - c))
        lo = radii[i] if i == 0 else boundary(radii[i], radii[i - 1])
        hi = radii[j] if j == samples - 1 else boundary(radii[j], radii[j + 1])
        measured = (lo * r_sat, hi * r_sat)
        # growth in 1/time of the dimensioned system
        t_unit = math.sqrt(r_sat**3 / (G * primary.mass))
        growth = max(r.growth_exponent for r in results[i:j + 1]) / t_unit

    overlap = interval_overlap(analytic, measured)
    if analytic is None and measured is None:
        status = "empty vs empty"
    elif analytic is None:
        status = "measured vs empty"
    elif measured is None:
        status = "empty vs analytic"
    else:
        status = "overlap"
    return ZoneVerification(satellite.name, n, analytic, measured, overlap, status, growth)
