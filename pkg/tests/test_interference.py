import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import circ_system
from spdcvis.crystal import CrystalSpec
from spdcvis.errors import DomainError
from spdcvis.interference import (CwPlane, FiniteBeam, PulsedPlane, asymmetry, default_tau_grid, pattern,
                                  pulsed_factor, triangle, visibility, visibility_cw, visibility_pulsed,
                                  visibility_vs_thickness, walkoff_phase)
from spdcvis.optics import ApertureSpec, GaussianFilter, OpticalSystemSpec, Slit, sinc


def test_triangle():
    assert triangle(0.0) == 1.0
    assert triangle(np.array([-1.0, 1.0, 2.0])).tolist() == [0.0, 0.0, 0.0]
    assert triangle(0.25) == pytest.approx(0.75)


def test_pinhole_gives_the_triangular_dip(uv):
    tau = default_tau_grid(uv, 512)
    v = visibility_cw(tau, circ_system(0.01), uv)
    assert np.max(np.abs(v - triangle(2 * tau / uv.LD - 1))) < 1e-3


def test_zero_outside_the_dip(uv):
    tau = np.array([-10.0, 0.0, uv.LD, uv.LD + 5])
    assert np.all(visibility_cw(tau, circ_system(3), uv) == 0)


@settings(max_examples=50, deadline=None)
@given(b=st.floats(0.01, 10), frac=st.floats(-0.2, 1.2), d1=st.floats(200, 2000))
def test_bounded(uv, b, frac, d1):
    v = visibility_cw(frac * uv.LD, circ_system(b, d1), uv)
    assert abs(v) <= 1 + 1e-12


@settings(max_examples=30, deadline=None)
@given(frac=st.floats(0.0, 1.0))
def test_dropping_the_sinc_never_lowers_magnitude(uv, frac):
    s = circ_system(5)
    tau = frac * uv.LD
    assert abs(visibility_cw(tau, s, uv, include_sinc=False)) >= abs(visibility_cw(tau, s, uv)) - 1e-15


def test_drop_sinc_is_a_pure_factor(uv):
    s = circ_system(3)
    tau = np.linspace(1, uv.LD - 1, 7)
    lam = triangle(2 * tau / uv.LD - 1)
    ratio = visibility_cw(tau, s, uv) / visibility_cw(tau, s, uv, include_sinc=False)
    assert np.allclose(ratio, sinc(walkoff_phase(tau, uv, s.d1) * lam), rtol=1e-12)


def test_larger_apertures_lower_full_compensation_visibility(uv):
    v = [visibility_cw(uv.LD / 2, circ_system(b), uv) for b in (0.01, 2, 3, 5)]
    assert all(a > b for a, b in zip(v, v[1:]))


def test_pulsed_limit_is_cw(violet):
    # bandwidth ratios relative to an 80 fs pulse: longer pulses, narrower spectra
    s = circ_system(5)
    tau = np.linspace(0.05, 0.95, 9) * violet.LD
    cw = visibility_cw(tau, s, violet)
    errs = [np.max(np.abs(visibility_pulsed(tau, s, violet, PulsedPlane(415.0, 80.0 / r)) - cw))
            for r in (1e-2, 1e-3)]
    assert errs[1] < errs[0] < 1e-3
    exact = pulsed_factor(tau, violet, s.d1, 0.0)
    assert np.allclose(exact, sinc(walkoff_phase(tau, violet, s.d1) * triangle(2 * tau / violet.LD - 1)))


def test_pulsed_below_cw(violet):
    s = circ_system(5)
    pump = PulsedPlane(415.0, 80.0)
    half = violet.LD / 2
    assert visibility_pulsed(half, s, violet, pump) < visibility_cw(half, s, violet)


def test_spectral_filter_rejected(uv):
    s = OpticalSystemSpec(1000.0, ApertureSpec(Slit(1, 7)), spectral_filter=GaussianFilter(2.68, 0.01))
    with pytest.raises(DomainError):
        visibility_cw(10.0, s, uv)


def test_pump_validation():
    with pytest.raises(DomainError):
        PulsedPlane(415.0, 0.0)
    with pytest.raises(DomainError):
        PulsedPlane(415.0, 80.0, "sech2")
    with pytest.raises(DomainError):
        FiniteBeam(351.1, -1.0)
    assert PulsedPlane(415.0, 80.0).spectral_sigma == pytest.approx(4 * np.log(2) / 80 / (2 * np.sqrt(2 * np.log(2))))


def test_asymmetry_of_a_symmetric_curve_vanishes(uv):
    # a pinhole without the sinc gives the bare triangle
    assert asymmetry(circ_system(1e-6), uv, include_sinc=False) < 1e-9


def test_signed_asymmetry_bounded_by_absolute(uv):
    s = circ_system(5)
    assert abs(asymmetry(s, uv, signed=True)) <= asymmetry(s, uv) + 1e-12


def test_pattern_metadata(uv):
    crystal = CrystalSpec(1.5, 351.1)
    pg = pattern(circ_system(5), crystal, FiniteBeam(351.1, 1.5), tau_samples=64)
    m = pg.metadata
    assert len(pg.tau) == 64
    assert m["LD_fs"] == pytest.approx(uv.LD)
    assert m["visibility_at_full_compensation"] == pytest.approx(visibility_cw(uv.LD / 2, circ_system(5), uv))
    assert m["planewave_valid"] in (True, False)
    assert np.allclose(pg.R_over_R0, 1 - pg.V)


def test_thickness_sweep_matches_pointwise(uv):
    L = np.array([0.5, 1.5, 3.0])
    s = circ_system(3)
    v = visibility_vs_thickness(L, s, CwPlane(351.1))
    for Li, vi in zip(L, v):
        p = uv.with_thickness(Li)
        assert vi == pytest.approx(visibility_cw(p.LD / 2, s, p), rel=1e-12)
    assert np.all(np.diff(v) < 0)


def test_dispatch(violet):
    s = circ_system(2)
    pump = PulsedPlane(415.0, 80.0)
    assert visibility(30.0, s, violet, pump) == visibility_pulsed(30.0, s, violet, pump)
    assert visibility(30.0, s, violet, CwPlane(415.0)) == visibility_cw(30.0, s, violet)
