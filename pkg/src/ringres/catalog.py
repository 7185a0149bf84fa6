"""Ring-system and satellite catalogs, and the two table pipelines.

CSV schemas (header row required, columns in this order)::

    satellites: name,orbit_radius_km,resonance
    rings:      planet,M_g,band_in_km,band_out_km,surf_density_g_cm2,
                particle_density_g_cm3,particle_radius_m

A satellite may appear on several rows, one per commensurability, provided
every row gives the same orbit radius.  Errors carry the 1-based row
(the header is row 1) and column.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from enum import Enum
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping, NamedTuple, Sequence, TextIO

from .core import KM, DomainError, PrimaryBody, SatelliteRecord, ValidationError
from .polygon import ring_bulk_properties
from .resonance import (
    ResonanceSpec,
    critical_radius,
    negative_alpha_zones,
    parametric_order,
    zone_center,
)

SATELLITE_COLUMNS = ("name", "orbit_radius_km", "resonance")
RING_COLUMNS = ("planet", "M_g", "band_in_km", "band_out_km", "surf_density_g_cm2",
                "particle_density_g_cm3", "particle_radius_m")
MASS_COLUMNS = ("name", "mass_g")
#: Largest relative spread of radii derived for one satellite.
CONSISTENCY_RTOL = 5e-3


class CatalogError(ValidationError):
    """Malformed catalog input, located by row and column (both 1-based)."""

    def __init__(self, message: str, row: int | None = None, column: int | None = None):
        self.row = row
        self.column = column
        where = []
        if row is not None:
            where.append(f"row {row}")
        if column is not None:
            where.append(f"column {column}")
        super().__init__(f"{', '.join(where)}: {message}" if where else message)


class InconsistentCatalogError(CatalogError):
    """Rows for the same satellite imply different orbit radii."""


@dataclass(frozen=True)
class SatelliteCatalog:
    """Satellites (CGS radii) and their commensurability assignments.

    ``rows`` keeps the (name, spec) pairs in file order.
    """

    entries: tuple[SatelliteRecord, ...] = ()
    rows: tuple[tuple[str, ResonanceSpec], ...] = ()

    @property
    def assignments(self) -> dict[str, tuple[ResonanceSpec, ...]]:
        out: dict[str, list[ResonanceSpec]] = {}
        for name, spec in self.rows:
            out.setdefault(name, []).append(spec)
        return {k: tuple(v) for k, v in out.items()}

    def __len__(self):
        return len(self.entries)

    def get(self, name: str) -> SatelliteRecord:
        for sat in self.entries:
            if sat.name == name:
                return sat
        raise KeyError(name)

    def with_masses(self, masses: Mapping[str, float]) -> "SatelliteCatalog":
        """Copy with satellite masses (grams) filled in from ``masses``."""
        entries = tuple(sat.with_mass(masses.get(sat.name, sat.mass)) for sat in self.entries)
        return SatelliteCatalog(entries, self.rows)


@dataclass(frozen=True)
class RingSystemRecord:
    """One ring system with its bulk particle properties (CGS)."""

    planet: str
    mass: float
    bands: tuple[tuple[float, float], ...]
    surface_density: float
    particle_density: float
    particle_radius: float

    def __post_init__(self):
        if not self.mass > 0:
            raise ValidationError("central mass must be positive")
        for lo, hi in self.bands:
            if not 0 < lo < hi:
                raise ValidationError("each band needs 0 < R_in < R_out")
        if self.surface_density < 0 or not (self.particle_density > 0 and self.particle_radius > 0):
            raise ValidationError("surface density must be >= 0, particle density and radius > 0")

    @property
    def primary(self) -> PrimaryBody:
        return PrimaryBody(self.planet, self.mass)

    @property
    def fill(self) -> float:
        return ring_bulk_properties(1.0, self.surface_density, self.particle_density,
                                    self.particle_radius).fill


# -- parsing ----------------------------------------------------------------------

def _float(text, row, col, name, positive=False, nonneg=False):
    try:
        value = float(text)
    except (TypeError, ValueError):
        raise CatalogError(f"{name}: not a number: {text!r}", row, col) from None
    if not math.isfinite(value):
        raise CatalogError(f"{name}: not finite: {text!r}", row, col)
    if positive and not value > 0:
        raise CatalogError(f"{name}: must be positive, got {text!r}", row, col)
    if nonneg and value < 0:
        raise CatalogError(f"{name}: must be >= 0, got {text!r}", row, col)
    return value


def _rows(source: TextIO, columns: Sequence[str]):
    reader = csv.reader(source)
    try:
        header = next(reader)
    except StopIteration:
        raise CatalogError("missing header", 1) from None
    header = [h.strip() for h in header]
    for i, name in enumerate(columns):
        if i >= len(header) or header[i] != name:
            found = header[i] if i < len(header) else None
            raise CatalogError(f"missing column {name!r} (found {found!r})", 1, i + 1)
    if len(header) > len(columns):
        raise CatalogError(f"unexpected column {header[len(columns)]!r}", 1, len(columns) + 1)
    for row_no, fields in enumerate(reader, start=2):
        if not fields or all(not f.strip() for f in fields):
            continue
        if len(fields) < len(columns):
            raise CatalogError(f"missing field {columns[len(fields)]!r}", row_no, len(fields) + 1)
        if len(fields) > len(columns):
            raise CatalogError("too many fields", row_no, len(columns) + 1)
        yield row_no, [f.strip() for f in fields]


def _parse_satellites(source: TextIO) -> SatelliteCatalog:
    radii: dict[str, tuple[float, int]] = {}
    order: list[str] = []
    rows: list[tuple[str, ResonanceSpec]] = []
    for row_no, (name, radius, res) in _rows(source, SATELLITE_COLUMNS):
        if not name:
            raise CatalogError("empty satellite name", row_no, 1)
        r = _float(radius, row_no, 2, "orbit_radius_km", positive=True)
        try:
            spec = ResonanceSpec.parse(res)
        except (DomainError, ValueError) as exc:
            raise CatalogError(f"resonance: {exc}", row_no, 3) from None
        if name in radii:
            prev, prev_row = radii[name]
            if r != prev:
                raise CatalogError(f"duplicate name {name!r} with radius {radius} "
                                   f"(row {prev_row} gives {prev:g})", row_no, 1)
            if (name, spec) in rows:
                raise CatalogError(f"duplicate entry {name} {spec}", row_no, 3)
        else:
            radii[name] = (r, row_no)
            order.append(name)
        rows.append((name, spec))
    entries = tuple(SatelliteRecord(name, 0.0, radii[name][0] * KM) for name in order)
    return SatelliteCatalog(entries, tuple(rows))


def _parse_rings(source: TextIO) -> list[RingSystemRecord]:
    out = []
    for row_no, fields in _rows(source, RING_COLUMNS):
        planet = fields[0]
        if not planet:
            raise CatalogError("empty planet name", row_no, 1)
        M = _float(fields[1], row_no, 2, "M_g", positive=True)
        lo = _float(fields[2], row_no, 3, "band_in_km", positive=True)
        hi = _float(fields[3], row_no, 4, "band_out_km", positive=True)
        if not lo < hi:
            raise CatalogError("band_out_km must exceed band_in_km", row_no, 4)
        rho_s = _float(fields[4], row_no, 5, "surf_density_g_cm2", nonneg=True)
        rho = _float(fields[5], row_no, 6, "particle_density_g_cm3", positive=True)
        r_k = _float(fields[6], row_no, 7, "particle_radius_m", positive=True)
        out.append(RingSystemRecord(planet, M, ((lo * KM, hi * KM),), rho_s, rho, r_k * 100.0))
    return out


def load_catalog(source: TextIO | str | Path, format: str = "satellites"):
    """Parse a satellite or ring catalog.

    ``source`` is an open text stream or a path.  Returns a SatelliteCatalog
    for ``format="satellites"`` and a list of RingSystemRecord (one per row)
    for ``format="rings"``.
    """
    if format not in ("satellites", "rings"):
        raise ValueError(f"unknown catalog format {format!r}")
    if isinstance(source, (str, Path)):
        with open(source, newline="", encoding="utf-8") as fh:
            return load_catalog(fh, format)
    if format == "satellites":
        return _parse_satellites(source)
    return _parse_rings(source)


def load_satellite_masses(source: TextIO | str | Path) -> dict[str, float]:
    """Read ``name,mass_g`` rows into a mapping."""
    if isinstance(source, (str, Path)):
        with open(source, newline="", encoding="utf-8") as fh:
            return load_satellite_masses(fh)
    out = {}
    for row_no, (name, mass) in _rows(source, MASS_COLUMNS):
        if name in out:
            raise CatalogError(f"duplicate name {name!r}", row_no, 1)
        out[name] = _float(mass, row_no, 2, "mass_g", nonneg=True)
    return out


def bundled(name: str) -> Path:
    """Path of a bundled data file (``satellites.csv``, ``rings.csv``, ...)."""
    path = resources.files("ringres") / "data" / name
    if not path.is_file():
        raise FileNotFoundError(name)
    return Path(str(path))


# -- derived distances -------------------------------------------------------------

class Table2Input(NamedTuple):
    spec: ResonanceSpec
    center: float
    satellite: str


def derive_satellite_distances(rows: Iterable) -> list[tuple[str, float]]:
    """Satellite orbit radii implied by unperturbed zone centres.

    Each row is (spec or "p:q", centre, satellite name).  r = R/(1 - 2/n)^{2/3};
    rows naming the same satellite must agree to 0.5%, and their mean is
    returned, in order of first appearance.
    """
    found: dict[str, list[tuple[int, float]]] = {}
    for i, row in enumerate(rows, start=1):
        spec, center, name = row
        spec = spec if isinstance(spec, ResonanceSpec) else ResonanceSpec.parse(str(spec))
        n = parametric_order(spec.p, spec.q)
        if not center > 0:
            raise DomainError(f"row {i}: centre must be positive")
        found.setdefault(name, []).append((i, center / (1.0 - 2.0 / n) ** (2.0 / 3.0)))
    out = []
    for name, items in found.items():
        radii = [r for _, r in items]
        if (max(radii) - min(radii)) / min(radii) > CONSISTENCY_RTOL:
            listed = ", ".join(f"row {i}: {r:.9g}" for i, r in items)
            raise InconsistentCatalogError(f"{name} radii disagree beyond 0.5%: {listed}")
        out.append((name, sum(radii) / len(radii)))
    return out


# -- resonance table (--which 2) -------------------------------------------------------------------------

class Variant(Enum):
    UNPERTURBED = "unperturbed"
    PERTURBED = "perturbed"


@dataclass(frozen=True)
class Perturbed:
    """Ring parameters of the perturbed variant (CGS; particle radius in cm)."""

    surface_density: float = 60.0
    particle_radius: float = 50.0
    particle_density: float = 1.0



@dataclass(frozen=True)
class Table2Row:
    index: int
    resonance: ResonanceSpec
    satellite: str
    distance: float
    inner: float | None = None
    outer: float | None = None
    alpha: float = 0.0
    provenance: dict = field(default_factory=dict, compare=False)


def table2_pipeline(ring: RingSystemRecord, cat: SatelliteCatalog,
                    variant: Variant | str | Perturbed = Variant.UNPERTURBED) -> list[Table2Row]:
    """Zone centres for every catalog row, in catalog order (CGS lengths).

    UNPERTURBED: centre at alpha = 0, m = 0.  PERTURBED: also the inner gap
    (interaction density alpha from the band estimate) and the outer gap
    (-alpha/2), each at m = 0.
    """
    if isinstance(variant, str):
        variant = Variant(variant)
    if variant is Variant.PERTURBED:
        variant = Perturbed()
    M = ring.mass
    alpha = 0.0
    if isinstance(variant, Perturbed):
        alpha = ring_bulk_properties(1.0, variant.surface_density, variant.particle_density,
                                     variant.particle_radius).alpha
    out = []
    for i, (name, spec) in enumerate(cat.rows, start=1):
        r = cat.get(name).orbit_radius
        n = spec.order
        base = zone_center(n, r, 0.0, M).r_minus
        prov = {"satellite_radius_cm": r, "order": n, "central_mass_g": M}
        if isinstance(variant, Perturbed):
            bulk = ring_bulk_properties(base, variant.surface_density, variant.particle_density,
                                        variant.particle_radius)
            inner, outer = negative_alpha_zones(n, r, alpha, M, bulk.count, base, name, 0.0, spec)
            prov.update(variant="perturbed", alpha_g_cm3=alpha, fill=bulk.fill,
                        particle_count=bulk.count, outer_half_width_cm=outer.half_width)
            out.append(Table2Row(i, spec, name, base, inner.center, outer.center, alpha, prov))
        else:
            prov["variant"] = "unperturbed"
            out.append(Table2Row(i, spec, name, base, None, None, 0.0, prov))
    return out


# -- critical-radius table (--which 1) -------------------------------------------------------------------------

@dataclass(frozen=True)
class Table1Row:
    planet: str
    band: tuple[float, float]
    critical_radius: float
    fill_range: tuple[float, float]
    particle_density: float

    @property
    def unstable_in_band(self) -> bool:
        return math.isfinite(self.critical_radius) and self.critical_radius <= self.band[1]


def table1_pipeline(records: Iterable[RingSystemRecord],
                    particle_density: float | None = None) -> list[Table1Row]:
    """Critical radius and fill range per planet (CGS lengths).

    Records are grouped by planet in order of appearance.  The fill of each
    record is recomputed from its surface density, particle density and
    radius; the critical radius uses the largest fill (the innermost onset).
    ``particle_density`` overrides the records' value in the critical
    radius.  A zero fill gives an infinite critical radius.
    """
    groups: dict[str, list[RingSystemRecord]] = {}
    for rec in records:
        groups.setdefault(rec.planet, []).append(rec)
    out = []
    for planet, recs in groups.items():
        fills = [rec.fill for rec in recs]
        lo = min(b[0] for rec in recs for b in rec.bands)
        hi = max(b[1] for rec in recs for b in rec.bands)
        best = recs[fills.index(max(fills))]
        rho = particle_density if particle_density is not None else best.particle_density
        rc = critical_radius(best.mass, rho, max(fills))
        out.append(Table1Row(planet, (lo, hi), rc, (min(fills), max(fills)), rho))
    return out


# -- output --------------------------------------------------------------------------

def fmt(value) -> str:
    """Fixed 9-significant-digit rendering; 'inf' and '' for None."""
    if value is None:
        return ""
    if isinstance(value, float) and math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return f"{float(value):.9g}"


TABLE2_COLUMNS = ("N", "resonance", "distance_1e5km", "inner_1e5km", "outer_1e5km", "satellite")
TABLE1_COLUMNS = ("planet", "band_in_1e3km", "band_out_1e3km", "r_c_1e3km", "sigma_min", "sigma_max")


def table2_records(rows: Sequence[Table2Row]) -> list[dict]:
    perturbed = any(r.inner is not None for r in rows)
    out = []
    for r in rows:
        rec = {"N": r.index, "resonance": str(r.resonance),
               "distance_1e5km": r.distance / (1e5 * KM)}
        if perturbed:
            rec["inner_1e5km"] = r.inner / (1e5 * KM)
            rec["outer_1e5km"] = r.outer / (1e5 * KM)
        rec["satellite"] = r.satellite
        out.append(rec)
    return out


def table1_records(rows: Sequence[Table1Row]) -> list[dict]:
    scale = 1e3 * KM
    return [{"planet": r.planet, "band_in_1e3km": r.band[0] / scale,
             "band_out_1e3km": r.band[1] / scale, "r_c_1e3km": r.critical_radius / scale,
             "sigma_min": r.fill_range[0], "sigma_max": r.fill_range[1]} for r in rows]


def write_csv(records: Sequence[dict], stream: TextIO | None = None) -> str:
    """Render dict records as CSV with 9-digit numbers; returns the text."""
    buf = io.StringIO()
    if records:
        columns = list(records[0])
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(columns)
        for rec in records:
            writer.writerow([v if isinstance(v, str) else fmt(v) for v in
                             (rec.get(c) for c in columns)])
    text = buf.getvalue()
    if stream is not None:
        stream.write(text)
    return text


def read_csv_records(source: TextIO) -> list[dict]:
    """Parse a CSV written by ``write_csv`` back into dict records.

    Numeric-looking fields become floats (or ints when integral in form).
    """
    out = []
    for row in csv.DictReader(source):
        rec = {}
        for key, value in row.items():
            if value == "":
                rec[key] = None
                continue
            try:
                rec[key] = int(value)
            except ValueError:
                try:
                    rec[key] = float(value)
                except ValueError:
                    rec[key] = value
        out.append(rec)
    return out
