import io
import math

import pytest

from ringres.catalog import (
    CatalogError,
    InconsistentCatalogError,
    Perturbed,
    RingSystemRecord,
    Variant,
    bundled,
    derive_satellite_distances,
    load_catalog,
    load_satellite_masses,
    read_csv_records,
    table1_pipeline,
    table1_records,
    table2_pipeline,
    table2_records,
    write_csv,
)
from ringres.core import KM
from ringres.resonance import ResonanceSpec

SAT_HEADER = "name,orbit_radius_km,resonance\n"
RING_HEADER = ("planet,M_g,band_in_km,band_out_km,surf_density_g_cm2,"
               "particle_density_g_cm3,particle_radius_m\n")


def sats(text):
    return load_catalog(io.StringIO(SAT_HEADER + text))


def rings(text):
    return load_catalog(io.StringIO(RING_HEADER + text), "rings")


@pytest.fixture(scope="module")
def reference():
    with open(bundled("table2_reference.csv")) as fh:
        return read_csv_records(fh)


@pytest.fixture(scope="module")
def saturn():
    return load_catalog(bundled("saturn_b_ring.csv"), "rings")[0]


@pytest.fixture(scope="module")
def cat():
    return load_catalog(bundled("satellites.csv"))


# -- parsing ----------------------------------------------------------------------------

def test_header_only():
    c = sats("")
    assert len(c) == 0 and c.rows == ()
    assert rings("") == []


def test_single_row():
    c = sats("Mimas,185519,2:1\n")
    assert c.entries[0].orbit_radius == 185_519 * KM
    assert c.assignments == {"Mimas": (ResonanceSpec(2, 1),)}


def test_malformed_radius_location():
    with pytest.raises(CatalogError) as exc:
        sats("Mimas,abc,2:1\n")
    assert (exc.value.row, exc.value.column) == (2, 2)
    assert "row 2, column 2" in str(exc.value)


@pytest.mark.parametrize("text,row,col", [
    ("Mimas,185519\n", 2, 3),
    ("Mimas,185519,2:1,x\n", 2, 4),
    ("Mimas,185519,5:2\n", 2, 3),
    ("Mimas,185519,two\n", 2, 3),
    ("Mimas,-1,2:1\n", 2, 2),
    ("Mimas,185519,2:1\nMimas,185000,3:2\n", 3, 1),
    ("Mimas,185519,2:1\nMimas,185519,2:1\n", 3, 3),
    (",185519,2:1\n", 2, 1),
])
def test_located_errors(text, row, col):
    with pytest.raises(CatalogError) as exc:
        sats(text)
    assert (exc.value.row, exc.value.column) == (row, col)


def test_missing_column():
    with pytest.raises(CatalogError) as exc:
        load_catalog(io.StringIO("name,resonance\nMimas,2:1\n"))
    assert (exc.value.row, exc.value.column) == (1, 2)


def test_empty_stream():
    with pytest.raises(CatalogError):
        load_catalog(io.StringIO(""))


def test_shared_satellite_merges():
    c = sats("Pan,133600,5:3\nPan,133600,3:2\n")
    assert len(c) == 1
    assert c.assignments["Pan"] == (ResonanceSpec(5, 3), ResonanceSpec(3, 2))


def test_ring_rows():
    (rec,) = rings("Saturn,5.685e29,70000,140000,60,1,0.5\n")
    assert rec.bands == ((7e9, 1.4e10),)
    assert rec.particle_radius == 50.0 and rec.fill == pytest.approx(0.3)


@pytest.mark.parametrize("text,col", [
    ("Saturn,x,70000,140000,60,1,0.5\n", 2),
    ("Saturn,5.685e29,140000,70000,60,1,0.5\n", 4),
    ("Saturn,5.685e29,70000,140000,-1,1,0.5\n", 5),
    ("Saturn,5.685e29,70000,140000,60,0,0.5\n", 6),
    ("Saturn,5.685e29,70000,140000,60,1,nan\n", 7),
])
def test_ring_errors(text, col):
    with pytest.raises(CatalogError) as exc:
        rings(text)
    assert (exc.value.row, exc.value.column) == (2, col)


def test_masses():
    m = load_satellite_masses(bundled("satellite_masses.csv"))
    assert m["Mimas"] == 3.749e22
    with pytest.raises(CatalogError):
        load_satellite_masses(io.StringIO("name,mass_g\nA,1\nA,2\n"))


def test_unknown_format():
    with pytest.raises(ValueError):
        load_catalog(io.StringIO(SAT_HEADER), "moons")


# -- derived distances --------------------------------------------------------------------

def test_derive_enceladus_pandora():
    d = dict(derive_satellite_distances([("3:1", 1.14428081e10, "Enceladus"),
                                         ("3:2", 1.08137339e10, "Pandora")]))
    assert d["Enceladus"] / KM == pytest.approx(238_020, abs=1)
    assert d["Pandora"] / KM == pytest.approx(141_700, abs=1)


def test_pandora_rows_agree(reference):
    rows = [(r["resonance"], r["distance_1e5km"] * 1e10, r["satellite"]) for r in reference
            if r["N"] in (5, 6)]
    (name, r), = derive_satellite_distances(rows)
    radii = [c / (1 - 2 / ResonanceSpec.parse(s).order) ** (2 / 3) for s, c, _ in rows]
    assert (max(radii) - min(radii)) / min(radii) < 5e-3


def test_inconsistent_rows():
    with pytest.raises(InconsistentCatalogError):
        derive_satellite_distances([("2:1", 1.0e10, "X"), ("3:2", 1.2e10, "X")])


def test_bundled_radii_from_reference(reference, cat):
    rows = [(r["resonance"], r["distance_1e5km"] * 1e10, r["satellite"]) for r in reference]
    derived = dict(derive_satellite_distances(rows))
    for sat in cat.entries:
        assert derived[sat.name] == pytest.approx(sat.orbit_radius, rel=1e-8)


# -- resonance table (--which 2) --------------------------------------------------------------------------------

def test_unperturbed_rows(saturn, cat, reference):
    rows = table2_pipeline(saturn, cat)
    assert len(rows) == 13
    for row, ref in zip(rows, reference):
        assert row.index == ref["N"] and row.satellite == ref["satellite"]
        assert str(row.resonance) == ref["resonance"]
        assert row.distance / 1e10 == pytest.approx(ref["distance_1e5km"], rel=3e-3)
        assert row.inner is None
    assert rows[12].distance / 1e10 == pytest.approx(1.16870, rel=3e-3)
    assert rows[0].distance / 1e10 == pytest.approx(0.95040, rel=3e-3)


def test_round_trip_identity(saturn, cat):
    rows = table2_pipeline(saturn, cat, Variant.UNPERTURBED)
    back = dict(derive_satellite_distances([(r.resonance, r.distance, r.satellite) for r in rows]))
    for sat in cat.entries:
        assert back[sat.name] == pytest.approx(sat.orbit_radius, rel=1e-10)


def test_perturbed_ordering(saturn, cat):
    rows = table2_pipeline(saturn, cat, "perturbed")
    assert all(r.inner < r.distance < r.outer for r in rows)
    assert rows[0].alpha == pytest.approx(1.25 * 0.3**3)
    custom = table2_pipeline(saturn, cat, Perturbed(60.0, 100.0, 1.0))
    # a smaller fill moves the gaps less
    assert all(c.distance - c.inner < r.distance - r.inner for c, r in zip(custom, rows))


# -- critical-radius table (--which 1) --------------------------------------------------------------------------------

def test_table1(reference):
    rows = table1_pipeline(load_catalog(bundled("rings.csv"), "rings"))
    assert [r.planet for r in rows] == ["Jupiter", "Saturn", "Uranus", "Neptune"]
    saturn = rows[1]
    assert saturn.fill_range == pytest.approx((0.49, 0.98), rel=1e-12)
    assert 1 / 1.25 < saturn.critical_radius / (69_000 * KM) < 1.25
    assert saturn.band == (7e9, 1.4e10)


def test_table1_zero_fill():
    rec = RingSystemRecord("X", 1e29, ((1e9, 2e9),), 0.0, 1.0, 50.0)
    (row,) = table1_pipeline([rec])
    assert row.critical_radius == math.inf and not row.unstable_in_band
    assert write_csv(table1_records([row])).splitlines()[1].split(",")[3] == "inf"


def test_table1_density_override():
    recs = load_catalog(bundled("rings.csv"), "rings")
    a = table1_pipeline(recs)[1].critical_radius
    b = table1_pipeline(recs, particle_density=2.0)[1].critical_radius
    assert b == pytest.approx(a / 2 ** (1 / 3), rel=1e-12)


# -- output ---------------------------------------------------------------------------------

def test_csv_round_trip(saturn, cat):
    text = write_csv(table2_records(table2_pipeline(saturn, cat, "perturbed")))
    again = write_csv(read_csv_records(io.StringIO(text)))
    assert again == text


def test_nine_digits(saturn, cat):
    text = write_csv(table2_records(table2_pipeline(saturn, cat)))
    assert text.splitlines()[1] == "1,5:3,0.950401891,Pan"
