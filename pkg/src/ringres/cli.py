"""Command-line interface: ``ringres {scan,table,floquet,tworing,figure}``.

Exit codes: 0 success (possibly with warnings), 2 usage or unreadable
input, 3 data/schema error, 4 numerical failure.  Numbers are written
with 9 significant digits; output is deterministic for fixed inputs.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import catalog as cat_mod
from .core import KM, RingresError, ValidationError
from .floquet import tongue_scan
from .resonance import (
    RingProperties,
    ScanMode,
    resonance_structure,
    scan,
    shift_vs_order,
    shift_vs_particle_size,
    zone_center,
)
from .tworing import stability_report, system_from_mapping

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_NUMERIC = 4


@dataclass
class CommandResult:
    exit_code: int = EXIT_OK
    artifacts: list[tuple[str, str]] = field(default_factory=list)


class UsageError(Exception):
    pass


def _clean(value):
    # 9 significant digits for floats, strings for non-finite values
    if isinstance(value, dict):
        return {k: _clean(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_clean(v) for v in value]
    if isinstance(value, (bool, int, str)) or value is None:
        return value
    value = float(value)
    if not math.isfinite(value):
        return cat_mod.fmt(value) if not math.isnan(value) else "nan"
    return float(f"{value:.9g}")


def _emit(text: str, out: str | None, fmt: str, result: CommandResult):
    if out in (None, "-"):
        sys.stdout.write(text)
        result.artifacts.append(("-", fmt))
    else:
        Path(out).write_text(text, encoding="utf-8")
        result.artifacts.append((out, fmt))


def _render(records: list[dict], fmt: str, extra: dict | None = None) -> str:
    if fmt == "csv":
        return cat_mod.write_csv(records)
    doc = {"rows": records}
    if extra:
        doc.update(extra)
    return json.dumps(_clean(doc), indent=2, sort_keys=True) + "\n"


def _nu_range(text: str) -> tuple[float, float]:
    lo, sep, hi = text.partition(":")
    try:
        if not sep:
            raise ValueError
        a, b = float(lo), float(hi)
    except ValueError:
        raise argparse.ArgumentTypeError(f"range must be 'a:b' with numbers, got {text!r}") from None
    if not 0 < a < b:
        raise argparse.ArgumentTypeError("range must satisfy 0 < a < b")
    return a, b


def _harmonic(text: str) -> tuple[int, float]:
    n, sep, h = text.partition("=")
    try:
        if not sep:
            raise ValueError
        n_i, h_f = int(n), float(h)
    except ValueError:
        raise argparse.ArgumentTypeError(f"harmonic must be 'n=h', got {text!r}") from None
    if n_i < 1:
        raise argparse.ArgumentTypeError("harmonic index must be >= 1")
    return n_i, h_f


# -- commands ----------------------------------------------------------------------

def cmd_scan(args) -> CommandResult:
    result = CommandResult()
    rings = cat_mod.load_catalog(args.ring, "rings")
    if not rings:
        raise ValidationError("ring file has no records")
    ring = rings[0]
    cat = cat_mod.load_catalog(args.satellites, "satellites")
    if args.satellite_masses:
        cat = cat.with_masses(cat_mod.load_satellite_masses(args.satellite_masses))
    props = RingProperties(ring.surface_density, ring.particle_density, ring.particle_radius)
    res = scan(ring.primary, ring.bands[0], cat.entries, specs=cat.assignments,
               mode=ScanMode(args.mode), ring_props=props, alpha=args.alpha)
    records = [{"satellite": z.satellite, "p": z.spec.p, "q": z.spec.q, "n": z.spec.order,
                "branch": z.branch.value, "center_km": z.center / KM,
                "half_width_km": z.half_width / KM, "alpha_g_cm3": z.alpha} for z in res]
    for w in res.warnings:
        print(f"warning: {w}", file=sys.stderr)
    _emit(_render(records, args.format, {"warnings": list(res.warnings)}), args.out, args.format,
          result)
    return result


def cmd_table(args) -> CommandResult:
    result = CommandResult()
    if args.which == 2:
        ring_path = args.ring or cat_mod.bundled("saturn_b_ring.csv")
        sat_path = args.satellites or cat_mod.bundled("satellites.csv")
        ring = cat_mod.load_catalog(ring_path, "rings")[0]
        cat = cat_mod.load_catalog(sat_path, "satellites")
        variant = cat_mod.Variant.UNPERTURBED
        if args.variant == "perturbed":
            variant = cat_mod.Perturbed(args.surface_density, args.particle_radius * 100.0,
                                        args.particle_density)
        rows = cat_mod.table2_pipeline(ring, cat, variant)
        records = cat_mod.table2_records(rows)
        if args.format == "json":
            for rec, row in zip(records, rows):
                rec["provenance"] = row.provenance
    else:
        ring_path = args.ring or cat_mod.bundled("rings.csv")
        records_in = cat_mod.load_catalog(ring_path, "rings")
        rows = cat_mod.table1_pipeline(records_in, args.particle_density_override)
        records = cat_mod.table1_records(rows)
        if args.format == "json":
            for rec, row in zip(records, rows):
                rec["provenance"] = {"particle_density_g_cm3": row.particle_density,
                                     "unstable_in_band": row.unstable_in_band}
    _emit(_render(records, args.format), args.out, args.format, result)
    return result


def cmd_floquet(args) -> CommandResult:
    result = CommandResult()
    harmonics = dict(args.harmonic)
    intervals = tongue_scan(args.omega0, harmonics, args.nu_range, resolution=args.resolution,
                            steps_per_period=args.steps)
    records = [{"nu_lo": iv.nu_lo, "nu_hi": iv.nu_hi, "growth_exponent": iv.max_growth_exponent}
               for iv in intervals]
    if args.format == "csv" and not records:
        text = "nu_lo,nu_hi,growth_exponent\n"
    else:
        text = _render(records, args.format)
    _emit(text, args.out, args.format, result)
    return result


def cmd_tworing(args) -> CommandResult:
    result = CommandResult()
    with open(args.config, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"config is not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise ValidationError("config must be a JSON object")
    report = stability_report(system_from_mapping(doc))
    text = json.dumps(_clean(report.to_dict()), indent=2, sort_keys=True) + "\n"
    _emit(text, args.out, "json", result)
    return result


def cmd_figure(args) -> CommandResult:
    result = CommandResult()
    if args.which == 2:
        records = shift_vs_order(args.alpha if args.alpha is not None else 0.1)
    elif args.which == 6:
        records = resonance_structure(args.alpha if args.alpha is not None else 0.5)
    else:
        ring = cat_mod.load_catalog(cat_mod.bundled("saturn_b_ring.csv"), "rings")[0]
        mimas = cat_mod.load_catalog(cat_mod.bundled("satellites.csv")).get("Mimas")
        radii = np.geomspace(10.0, 200.0, 20)
        records = shift_vs_particle_size(ring.mass, mimas.orbit_radius, 4, radii,
                                         ring.particle_density, ring.surface_density)
        base = zone_center(4, mimas.orbit_radius, 0.0, ring.mass).r_minus
        for rec in records:
            rec["center_km"] = rec.pop("center") / KM
            rec["shift_km"] = rec.pop("shift") / KM
            rec["base_km"] = base / KM
    _emit(_render(records, args.format), args.out, args.format, result)
    return result


# -- parser --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ringres",
        description="Parametric-resonance zones of polygonal ring configurations.")
    sub = parser.add_subparsers(dest="command", required=True)

    def outputs(p, formats=("csv", "json")):
        p.add_argument("--out", default=None, help="output path (default stdout)")
        if formats:
            p.add_argument("--format", choices=formats, default=formats[0])

    p = sub.add_parser("scan", help="instability zones of a ring band")
    p.add_argument("--ring", required=True, help="ring CSV (first record is used)")
    p.add_argument("--satellites", required=True, help="satellite CSV")
    p.add_argument("--mode", choices=("single", "system"), default="single")
    p.add_argument("--satellite-masses", default=None, help="CSV of name,mass_g")
    p.add_argument("--alpha", type=float, default=None,
                   help="interaction density override (g/cm^3)")
    outputs(p)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("table", help="reproduce the ring tables")
    p.add_argument("--which", type=int, choices=(1, 2), required=True)
    p.add_argument("--variant", choices=("unperturbed", "perturbed"), default="unperturbed")
    p.add_argument("--ring", default=None, help="ring CSV (default bundled)")
    p.add_argument("--satellites", default=None, help="satellite CSV (default bundled)")
    p.add_argument("--surface-density", type=float, default=60.0, help="g/cm^2")
    p.add_argument("--particle-radius", type=float, default=0.5, help="m")
    p.add_argument("--particle-density", type=float, default=1.0, help="g/cm^3")
    p.add_argument("--rho", dest="particle_density_override", type=float, default=None,
                   help="particle density for the critical radius (--which 1)")
    outputs(p)
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("floquet", help="instability tongues of a Hill equation")
    p.add_argument("--omega0", type=float, required=True)
    p.add_argument("--harmonic", type=_harmonic, action="append", required=True,
                   metavar="N=H")
    p.add_argument("--nu-range", type=_nu_range, required=True, metavar="A:B")
    p.add_argument("--resolution", type=int, default=200)
    p.add_argument("--steps", type=int, default=1024, help="RK4 steps per period")
    outputs(p)
    p.set_defaults(func=cmd_floquet)

    p = sub.add_parser("tworing", help="two-ring stability report")
    p.add_argument("--config", required=True, help="JSON document of system parameters")
    outputs(p, formats=())
    p.set_defaults(func=cmd_tworing)

    p = sub.add_parser("figure", help="plot-ready data series")
    p.add_argument("--which", type=int, choices=(2, 3, 6), required=True)
    p.add_argument("--alpha", type=float, default=None, help="alpha r^3/M")
    outputs(p)
    p.set_defaults(func=cmd_figure)
    return parser


def run(argv=None) -> CommandResult:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return CommandResult(int(exc.code) if exc.code is not None else EXIT_OK)
    try:
        return args.func(args)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return CommandResult(EXIT_USAGE)
    except (ValidationError, cat_mod.CatalogError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return CommandResult(EXIT_DATA)
    except (RingresError, ArithmeticError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return CommandResult(EXIT_NUMERIC)


def main(argv=None) -> int:
    return run(argv).exit_code


if __name__ == "__main__":
    sys.exit(main())
