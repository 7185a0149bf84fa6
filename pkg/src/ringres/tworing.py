"""Two coaxial polygonal rings sharing a common angular velocity.

The inner ring sits at R and the outer at R + d, each a regular N-gon of
equal particles.  The module evaluates the closed-form existence and
linear-stability predicates of such a pair: the common-rotation condition,
the radial and tangential inequalities, the admissible mass-ratio band
1 - 3d/R < m_i/m_o < 1 and the minimum separation.  Expressions are
evaluated as written, including their mixed dimensions; s is taken to be
pure geometry (1/length^3) so that every predicate is invariant under a
common rescaling of all masses.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from enum import Enum
from typing import NamedTuple

import numpy as np
from scipy import optimize

from .core import CentralConfiguration, DomainError, PrimaryBody, ValidationError
from .polygon import corrected_rotation, polygon_sum


class Verdict(Enum):
    STABLE = "STABLE"
    UNSTABLE = "UNSTABLE"
    UNDECIDED = "UNDECIDED"


class Which(Enum):
    INNER = "inner"
    OUTER = "outer"


@dataclass(frozen=True)
class TwoRingSystem:
    """Two N-gons at R (inner, particle mass m_i) and R + d (outer, m_o).

    ``m_s`` is the reference particle mass entering the frequency shift
    Omega_1k.  ``collinear`` selects the aligned geometry (vertices of both
    rings on common radii); the predicates do not depend on it.
    """

    N: int
    m_i: float
    m_o: float
    R: float
    d: float
    M: float
    m_s: float
    G: float = 1.0
    collinear: bool = False

    def __post_init__(self):
        if int(self.N) != self.N or self.N < 2:
            raise ValidationError("N must be an integer >= 2")
        if not (self.m_i > 0 and self.m_o > 0):
            raise ValidationError("particle masses must be positive")
        if not self.R > 0:
            raise ValidationError("R must be positive")
        if not self.d > 0:
            raise ValidationError("separation d must be positive")
        if self.M < 0 or self.m_s < 0 or not self.G > 0:
            raise ValidationError("M, m_s must be >= 0 and G positive")

    @property
    def mass_ratio(self) -> float:
        return self.m_i / self.m_o

    def ring(self, which: Which | str) -> CentralConfiguration:
        which = Which(which)
        if which is Which.INNER:
            return CentralConfiguration(int(self.N), self.m_i, self.R)
        return CentralConfiguration(int(self.N), self.m_o, self.R + self.d)


class CommonRotation(NamedTuple):
    omega: float
    residual: float
    omega_inner: float
    omega_outer: float


def inverse_sine_sum(N: int) -> float:
    """sum_{j=1}^{N-1} 1/|sin(pi j/N)|."""
    return 2.0 * polygon_sum(N, 1).value


def _rotation_sides(M, m_k, R0, d_k, N):
    lhs = 3.0 * M / m_k * d_k / R0
    rhs = 0.25 * inverse_sine_sum(N) + (R0 / d_k) ** 3
    return lhs, rhs


def common_rotation(sys: TwoRingSystem) -> CommonRotation:
    """Mean of the two rings' corrected rotation rates.

    ``residual`` is the relative mismatch (lhs - rhs)/rhs of the
    common-rotation condition 3 (M/m_k)(d/R) = sum 1/(4|sin(alpha_j/2)|) + R^3/d^3,
    with the inner ring as reference (R0 = R) and k the outer ring.
    """
    primary = PrimaryBody("M", sys.M)
    w_i = corrected_rotation(sys.ring(Which.INNER), primary, sys.G)
    w_o = corrected_rotation(sys.ring(Which.OUTER), primary, sys.G)
    lhs, rhs = _rotation_sides(sys.M, sys.m_o, sys.R, sys.d, sys.N)
    return CommonRotation(0.5 * (w_i + w_o), (lhs - rhs) / rhs, w_i, w_o)


def required_particle_mass(M: float, R0: float, d: float, N: int) -> float:
    """Particle mass m_k that satisfies the common-rotation condition at separation d.

    Increases monotonically with d: outer rings need heavier particles.
    """
    if not (M > 0 and R0 > 0 and d > 0):
        raise DomainError("M, R0 and d must be positive")
    lhs_per_mass = 3.0 * M * d / R0
    return lhs_per_mass / (0.25 * inverse_sine_sum(N) + (R0 / d) ** 3)


def separation_for_common_rotation(mass_ratio: float, R0: float, N: int) -> float:
    """Separation d in (0, R0) solving the common-rotation condition for M/m_k.

    The left side grows and the right side falls with d, so the root is
    unique when it exists.
    """
    if not (mass_ratio > 0 and R0 > 0):
        raise DomainError("M/m and R0 must be positive")
    S = 0.25 * inverse_sine_sum(N)

    def f(d):
        return 3.0 * mass_ratio * d / R0 - S - (R0 / d) ** 3

    if f(R0) <= 0:
        raise DomainError(f"no separation below R0 for M/m = {mass_ratio!r}")
    lo = R0 * 1e-3
    while f(lo) > 0:
        lo *= 1e-3
    return optimize.brentq(f, lo, R0, xtol=1e-15 * R0, rtol=1e-14)


def omega1(sys: TwoRingSystem, which: Which | str) -> float:
    """Omega_1k^2 = Omega_k^2 + 3 G (m_s - m_k) / (8 R^2) sum 1/|sin(pi j/N)|.

    With M == 0 the common-rotation term is dropped and only the mass
    correction remains.
    """
    which = Which(which)
    m_k = sys.m_i if which is Which.INNER else sys.m_o
    shift = 3.0 * sys.G * (sys.m_s - m_k) / (8.0 * sys.R**2) * inverse_sine_sum(sys.N)
    if sys.M == 0:
        return shift
    return common_rotation(sys).omega ** 2 + shift


def geometric_stiffness(N: int, R: float) -> float:
    """s = A_k/(G m_k) = -(1/R^3) sum [1/|2 sin(a_j/2)|^3 - 3/|8 sin(a_j/2)|].

    Positive for N <= 6 and negative for larger polygons.
    """
    j = np.arange(1, int(N))
    s = np.abs(np.sin(np.pi * j / N))
    return float(-np.sum(1.0 / (2.0 * s) ** 3 - 3.0 / (8.0 * s)) / R**3)


def tangential_stiffness(N: int, m: float, R: float, G: float = 1.0) -> float:
    """d f/d phi of the companion tangential force at the stationary vertex.

    f(phi) = -G m/(4 R^2) sum cos(a_j/2)/sin^2(a_j/2) with a_j = 2 pi j/N + phi,
    so d f/d phi = G m/(8 R^2) sum (1 + cos^2(a_j/2)) / sin^3(a_j/2).
    """
    half = np.pi * np.arange(1, int(N)) / N
    s, c = np.sin(half), np.cos(half)
    return float(G * m / (8.0 * R**2) * np.sum((1.0 + c * c) / s**3))


def mass_ratio_band(d: float, R: float) -> tuple[float, float]:
    """(1 - 3d/R, 1): open interval of admissible m_i/m_o."""
    if not R > 0:
        raise DomainError("R must be positive")
    if d < 0:
        raise DomainError("d must be >= 0")
    return (1.0 - 3.0 * d / R, 1.0)


def minimum_separation(R: float, m_i: float, m_o: float, omega_sq: float, s: float) -> float:
    """d_min = (R/3) [(m_o - m_i) Omega_k^2 + s (m_o^2 - m_i^2)] / (m_o s (m_o + m_i))."""
    if s == 0:
        raise DomainError("s = 0: minimum separation undefined")
    num = (m_o - m_i) * omega_sq + s * (m_o**2 - m_i**2)
    return R / 3.0 * num / (m_o * s * (m_o + m_i))


@dataclass(frozen=True)
class StabilityReport:
    radial_ok_inner: bool
    radial_ok_outer: bool
    tangential_ok_inner: bool
    tangential_ok_outer: bool
    mass_ratio: float
    mass_ratio_band: tuple[float, float]
    band_ok: bool
    d: float
    d_min: float | None
    s: float
    omega_k: float
    rotation_residual: float
    collinear: bool
    verdict: Verdict
    reasons: tuple[str, ...] = field(default_factory=tuple)

    @property
    def overall(self) -> bool:
        return self.verdict is Verdict.STABLE

    def to_dict(self) -> dict:
        out = asdict(self)
        out["mass_ratio_band"] = list(self.mass_ratio_band)
        out["verdict"] = self.verdict.value
        out["reasons"] = list(self.reasons)
        out["overall"] = self.overall
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def stability_report(sys: TwoRingSystem) -> StabilityReport:
    """Evaluate all stability predicates of a two-ring system.

    The mass-ratio band is checked first: a ratio outside it, or an empty
    band, is UNSTABLE whatever else holds.  Otherwise a non-positive s
    leaves the verdict UNDECIDED, since the remaining predicates assume
    s > 0.  With s > 0 the verdict is STABLE only if the four radial and
    tangential inequalities hold and d exceeds d_min.
    """
    G, R, d = sys.G, sys.R, sys.d
    m_i, m_o = sys.m_i, sys.m_o
    rot = common_rotation(sys)
    s = geometric_stiffness(sys.N, R)

    # radial and tangential inequalities, inner-ring pair with the mass swap as displayed
    radial_outer = omega1(sys, Which.OUTER) - 2.0 * G * m_i / d**3 \
        + G * s * (m_o - m_i + 3.0 * d / R * m_o) > 0
    f_i = tangential_stiffness(sys.N, m_i, R, G)
    f_o = tangential_stiffness(sys.N, m_o, R + d, G)
    tangential_outer = f_i + f_o - 2.0 * G * m_i / d**3 * R < 0
    radial_inner = omega1(sys, Which.INNER) - 2.0 * G * m_o / d**3 \
        + G * s * (m_i - m_o + 3.0 * d / R * m_o) > 0
    tangential_inner = f_i + f_o - 2.0 * G * m_o / d**3 * R < 0

    band = mass_ratio_band(d, R)
    ratio = sys.mass_ratio
    band_empty = not band[0] < band[1]
    band_ok = not band_empty and band[0] < ratio < band[1]

    reasons = []
    if band_empty:
        reasons.append("band_empty")
    elif ratio >= band[1]:
        reasons.append("mass_ratio_above_band")
    elif ratio <= band[0]:
        reasons.append("mass_ratio_below_band")

    d_min = None
    if s > 0:
        d_min = minimum_separation(R, m_i, m_o, rot.omega ** 2, s)

    if not band_ok:
        verdict = Verdict.UNSTABLE
    elif s <= 0:
        reasons.append("eq316_precondition")
        verdict = Verdict.UNDECIDED
    else:
        for ok, code in ((radial_inner, "radial_inner_fail"), (radial_outer, "radial_outer_fail"),
                         (tangential_inner, "tangential_inner_fail"),
                         (tangential_outer, "tangential_outer_fail")):
            if not ok:
                reasons.append(code)
        if not d >= d_min:
            reasons.append("separation_below_min")
        verdict = Verdict.UNSTABLE if reasons else Verdict.STABLE

    return StabilityReport(
        radial_ok_inner=bool(radial_inner), radial_ok_outer=bool(radial_outer),
        tangential_ok_inner=bool(tangential_inner), tangential_ok_outer=bool(tangential_outer),
        mass_ratio=ratio, mass_ratio_band=band, band_ok=bool(band_ok), d=d, d_min=d_min, s=s,
        omega_k=rot.omega, rotation_residual=rot.residual, collinear=sys.collinear,
        verdict=verdict, reasons=tuple(reasons))


def system_from_mapping(doc: dict) -> TwoRingSystem:
    """Build a TwoRingSystem from a key-value document.

    Accepts the field names directly, or ``d_over_R`` and ``mass_ratio``
    (m_i/m_o) in place of ``d`` and ``m_i``.
    """
    doc = dict(doc)
    known = {"N", "m_i", "m_o", "R", "d", "M", "m_s", "G", "collinear", "d_over_R", "mass_ratio"}
    unknown = set(doc) - known
    if unknown:
        raise ValidationError(f"unknown keys: {sorted(unknown)}")
    for derived, base in (("d_over_R", "R"), ("mass_ratio", "m_o")):
        if derived in doc and base not in doc:
            raise ValidationError(f"{derived} needs {base}")
    try:
        if "d_over_R" in doc:
            if "d" in doc:
                raise ValidationError("give d or d_over_R, not both")
            doc["d"] = float(doc.pop("d_over_R")) * float(doc["R"])
        if "mass_ratio" in doc:
            if "m_i" in doc:
                raise ValidationError("give m_i or mass_ratio, not both")
            doc["m_i"] = float(doc.pop("mass_ratio")) * float(doc["m_o"])
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ValidationError):
            raise
        raise ValidationError(str(exc)) from exc
    missing = {"N", "m_i", "m_o", "R", "d", "M", "m_s"} - set(doc)
    if missing:
        raise ValidationError(f"missing keys: {sorted(missing)}")
    try:
        return TwoRingSystem(
            N=int(doc["N"]), m_i=float(doc["m_i"]), m_o=float(doc["m_o"]), R=float(doc["R"]),
            d=float(doc["d"]), M=float(doc["M"]), m_s=float(doc["m_s"]),
            G=float(doc.get("G", 1.0)), collinear=bool(doc.get("collinear", False)))
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ValidationError):
            raise
        raise ValidationError(str(exc)) from exc
