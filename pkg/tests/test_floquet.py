import math

import numpy as np
import pytest
from scipy import optimize, special

from ringres.core import DegenerateConfigurationError, DomainError, PrimaryBody, SatelliteRecord
from ringres.floquet import (
    NonPeriodicError,
    interval_overlap,
    monodromy,
    tongue_scan,
    verify_zone,
)
from ringres.resonance import Branch, InstabilityZone, ResonanceSpec, scan
from ringres.satellite import HillCoefficient

SATURN = PrimaryBody("Saturn", 5.685e29)


def mathieu_first_tongue(omega0, h):
    # x'' + w0^2 (1 + h cos nu t) x = 0 with tau = nu t / 2 is Mathieu's
    # y'' + (a - 2 q cos 2 tau) y = 0, a = 4 w0^2/nu^2, q = -2 w0^2 h/nu^2;
    # the first tongue lies between the a_1 and b_1 characteristic curves
    def edge(fn):
        def g(nu):
            a = 4 * omega0**2 / nu**2
            q = 2 * omega0**2 * h / nu**2
            return a - fn(1, q)
        return optimize.brentq(g, 1.0 * omega0, 3.0 * omega0, xtol=1e-14)
    lo, hi = sorted((edge(special.mathieu_a), edge(special.mathieu_b)))
    return lo, hi


# -- monodromy ------------------------------------------------------------------------

@pytest.mark.parametrize("omega0,nu", [(1.0, 0.7), (1.3, 2.9), (0.4, -1.1)])
def test_constant_coefficient(backend, omega0, nu):
    res = monodromy(HillCoefficient(omega0**2, (0.0, 0.0), nu))
    T = 2 * math.pi / abs(nu)
    assert res.trace == pytest.approx(2 * math.cos(omega0 * T), abs=1e-12)
    assert res.stable and res.growth_exponent == 0.0
    assert res.period == pytest.approx(T)


def test_first_tongue_centre_unstable(backend):
    res = monodromy(HillCoefficient(1.0, (0.1,), 2.0))
    assert not res.stable and abs(res.trace) > 2
    assert res.growth_exponent > 0
    assert abs(res.multipliers[0] * res.multipliers[1] - 1) < 1e-9


def test_outside_first_tongue_stable(backend):
    res = monodromy(HillCoefficient(1.0, (0.1,), 2.2))
    assert res.stable and abs(res.trace) <= 2


def test_determinant_random(backend):
    rng = np.random.default_rng(7)
    for _ in range(100):
        h = tuple(rng.uniform(-0.1, 0.1, rng.integers(1, 5)))
        coeff = HillCoefficient(rng.uniform(0.2, 3.0), h, rng.uniform(0.3, 4.0))
        res = monodromy(coeff, int(rng.integers(256, 2048)))
        assert abs(res.determinant - 1) < 1e-9
        assert abs(np.linalg.det(res.matrix) - 1) < 1e-9


def test_determinant_many_oscillations_per_period(backend):
    # ~65 rad of phase per period: the step count must be raised automatically
    coeff = HillCoefficient(9.0, (0.6, -0.29), 0.29)
    res = monodromy(coeff)
    assert abs(res.determinant - 1) < 1e-9
    assert abs(np.linalg.det(res.matrix) - 1) < 1e-9


def test_matrix_trace_consistent():
    res = monodromy(HillCoefficient(1.1, (0.05, 0.02), 1.7))
    assert np.trace(res.matrix) == pytest.approx(res.trace, abs=1e-12)


def test_growth_exponent_matches_multiplier():
    res = monodromy(HillCoefficient(1.0, (0.1,), 2.0))
    assert res.growth_exponent == pytest.approx(math.log(abs(res.multipliers[0])) / res.period,
                                                rel=1e-10)
    # Mathieu estimate at the tongue centre: h omega0 / 4
    assert res.growth_exponent == pytest.approx(0.1 / 4, rel=0.02)


def test_tiny_harmonic_resolved():
    # trace - 2 ~ h^2 ~ 1e-16 is still classified
    assert not monodromy(HillCoefficient(1.0, (1e-8,), 2.0)).stable
    assert monodromy(HillCoefficient(1.0, (1e-8,), 2.0 + 1e-6)).stable


def test_phase_invariance():
    a = monodromy(HillCoefficient(1.0, (0.08, 0.01), 1.97))
    b = monodromy(HillCoefficient(1.0, (0.08, 0.01), 1.97), phase=0.9)
    assert a.trace == pytest.approx(b.trace, abs=1e-10)


def test_monodromy_errors():
    with pytest.raises(NonPeriodicError):
        monodromy(HillCoefficient(1.0, (0.1,), 0.0))
    with pytest.raises(DomainError):
        monodromy(HillCoefficient(1.0, (0.1,), 2.0), steps_per_period=100)
    with pytest.raises(DegenerateConfigurationError):
        monodromy(HillCoefficient(1.0, (0.1,), 2.0, mean_offset=-1.5))


# -- tongues ---------------------------------------------------------------------------

def test_zero_amplitude_empty():
    assert tongue_scan(1.0, 0.0, (1.5, 2.5)) == []


def test_first_tongue_width(backend):
    (iv,) = tongue_scan(1.0, 0.1, (1.5, 2.5))
    assert iv.nu_lo < 2.0 < iv.nu_hi
    assert iv.nu_hi - iv.nu_lo == pytest.approx(0.10, rel=0.02)


@pytest.mark.parametrize("h", [0.02, 0.1, 0.3])
def test_first_tongue_matches_mathieu(h):
    (iv,) = tongue_scan(1.0, h, (1.2, 2.8), resolution=200)
    lo, hi = mathieu_first_tongue(1.0, h)
    assert iv.nu_lo == pytest.approx(lo, rel=1e-5)
    assert iv.nu_hi == pytest.approx(hi, rel=1e-5)


@pytest.mark.parametrize("n,window", [(1, (1.6, 2.4)), (2, (0.9, 1.1))])
def test_tongue_centres_converge(n, window):
    offsets = []
    for h in (0.2, 0.1):
        ivs = tongue_scan(1.0, h, window, resolution=400)
        assert len(ivs) == 1
        offsets.append(abs(0.5 * (ivs[0].nu_lo + ivs[0].nu_hi) - 2.0 / n))
        assert offsets[-1] < 2 * h * h
    assert offsets[1] < offsets[0]


def test_mapping_harmonics():
    a = tongue_scan(1.0, {2: 0.1}, (0.9, 1.1), resolution=200)
    b = tongue_scan(1.0, [0.0, 0.1], (0.9, 1.1), resolution=200)
    assert a == b and len(a) == 1


def test_tongue_scan_errors():
    with pytest.raises(DomainError):
        tongue_scan(1.0, 0.1, (2.5, 1.5))
    with pytest.raises(DomainError):
        tongue_scan(1.0, 0.1, (1.5, 2.5), resolution=10)
    with pytest.raises(DomainError):
        tongue_scan(1.0, {0: 0.1}, (1.5, 2.5))


def test_tongue_scan_threads_agree():
    a = tongue_scan(1.0, 0.1, (1.5, 2.5), workers=1)
    b = tongue_scan(1.0, 0.1, (1.5, 2.5), workers=4)
    assert a == b


# -- zone verification -----------------------------------------------------------------

def test_overlap_metric():
    assert interval_overlap(None, None) == 1.0
    assert interval_overlap((0, 1), None) == 0.0
    assert interval_overlap((0, 2), (1, 3)) == pytest.approx(1 / 3)


def _zone(mu, pq=(2, 1), alpha=0.0):
    sat = SatelliteRecord("s", mu * SATURN.mass, 1.8552e10)
    z = scan(SATURN, (1e9, 1.8e10), [sat], [pq], alpha=alpha).zones[0]
    return z, sat


def test_zero_mass_empty_vs_empty():
    z, sat = _zone(0.0)
    v = verify_zone(z, SATURN, sat)
    assert v.status == "empty vs empty" and v.overlap == 1.0 and v.measured is None


@pytest.mark.parametrize("pq", [(2, 1), (3, 1), (5, 3), (3, 2)])
def test_centre_within_h_squared(pq):
    from ringres.satellite import hill_coefficient_at

    z, sat = _zone(1e-6, pq)
    v = verify_zone(z, SATURN, sat)
    measured_centre = 0.5 * (v.measured[0] + v.measured[1])
    n = z.spec.order
    coeff = hill_coefficient_at(z.center / sat.orbit_radius, 1.0,
                                SatelliteRecord("s", 1e-6, 1.0), 2 * n)
    h = abs(coeff.harmonic(n))
    # O(h^2) plus the bisection tolerance of the boundaries
    assert abs(measured_centre - z.center) <= 10 * h * h * z.center + 2e-4 * z.half_width
    assert v.overlap > 0.99


@pytest.mark.parametrize("mu", [1e-7, 1e-5, 1e-4])
@pytest.mark.parametrize("alpha", [0.0, 0.01])
def test_measured_nonempty(mu, alpha):
    z, sat = _zone(mu, (5, 3), alpha)
    assert z.half_width > 0
    v = verify_zone(z, SATURN, sat)
    assert v.measured is not None and v.status == "overlap"
    assert v.max_growth_exponent > 0
