import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import j1

from spdcvis.errors import DomainError
from spdcvis.optics import (Annular, ApertureSpec, Circular, Mask, OpticalSystemSpec, Slit, amplitude_transform,
                            impulse_response, load_mask, projected_profile, ptilde, rasterize, shift_modulation,
                            transfer_function)


def _ring(inner, outer, q):
    # exact normalized transform of a uniform ring with radii inner < outer
    q = np.asarray(q, dtype=float)
    num = outer * j1(outer * q) - inner * j1(inner * q)
    return 2 * num / ((outer**2 - inner**2) * q)


def _grid(qmax=5.0, n=41):
    g = np.linspace(-qmax, qmax, n)
    return np.stack(np.meshgrid(g, g, indexing="ij"), axis=-1)


def test_bessel_against_mpmath():
    x = np.concatenate([np.linspace(1e-3, 30, 300), [7.999, 8.0, 8.001, 100.0, 1e3]])
    ref = np.array([float(mpmath.besselj(1, mpmath.mpf(v))) for v in x])
    assert np.max(np.abs(j1(x) - ref) / np.maximum(np.abs(ref), 1e-300)) < 1e-12 or \
        np.max(np.abs(j1(x) - ref)) < 1e-15


@pytest.mark.parametrize("shape", [Circular(0.5), Circular(2.5), Slit(1, 2), Slit(1, 7), Slit(2, 3, 0.4),
                                   Slit(7, 1, 0.2)], ids=repr)
def test_raster_matches_closed_form(shape):
    q = _grid()
    exact = ptilde(shape, q)
    approx = ptilde(rasterize(shape), q)
    assert np.max(np.abs(exact - approx)) < 1e-3


def test_annulus_raster_matches_exact_ring():
    q = _grid()
    qn = np.hypot(q[..., 0], q[..., 1])
    ring = np.where(qn == 0, 1.0, _ring(2.0, 4.0, np.where(qn == 0, 1.0, qn)))
    assert np.max(np.abs(ptilde(rasterize(Annular(2, 4)), q) - ring)) < 1e-3


def test_annulus_closed_form_values():
    # the modelled annulus factor: 2 (J1(bq) - J1(aq)) / ((b - a) q)
    q = np.array([[0.0, 0.7]])
    expect = 2 * (j1(4 * 0.7) - j1(2 * 0.7)) / (2 * 0.7)
    assert ptilde(Annular(2, 4), q)[0].real == pytest.approx(expect, rel=1e-14)
    assert ptilde(Annular(2, 4), np.zeros((1, 2)))[0] == 1


def test_circle_raster_is_a_radius_b_disc():
    m = rasterize(Circular(3.0))
    area = (np.abs(m.transmission) ** 2).sum() * m.pitch**2
    assert area == pytest.approx(np.pi * 9.0, rel=2e-3)


def test_slit_quarter_turn_swaps_axes():
    q = _grid(3.0, 21)
    a = ptilde(Slit(1.0, 7.0, np.pi / 2), q)
    b = ptilde(Slit(7.0, 1.0), q)
    assert np.allclose(a, b, atol=1e-12)


@settings(max_examples=40, deadline=None)
@given(q1=st.floats(-10, 10), q2=st.floats(-10, 10), s1=st.floats(-3, 3), s2=st.floats(-3, 3),
       d=st.floats(0.1, 8))
def test_shift_is_a_pure_phase(q1, q2, s1, s2, d):
    q = np.array([q1, q2])
    base = ptilde(Circular(d), q)
    moved = ptilde(ApertureSpec(Circular(d), (s1, s2)), q)
    assert moved == pytest.approx(base * np.exp(-1j * (q1 * s1 + q2 * s2)), abs=1e-12)


@settings(max_examples=40, deadline=None)
@given(q2=st.floats(-10, 10), sa=st.floats(-3, 3), sb=st.floats(-3, 3))
def test_shift_modulation_from_phases(q2, sa, sb):
    pa = ptilde(ApertureSpec(Slit(1, 2), (0.0, sa)), np.array([0.0, -q2]))
    pb = ptilde(ApertureSpec(Slit(1, 2), (0.0, sb)), np.array([0.0, q2]))
    unshifted = ptilde(Slit(1, 2), np.array([0.0, q2])) ** 2
    assert np.real(pa * pb) == pytest.approx(unshifted.real * shift_modulation(q2, (0, sa), (0, sb)), abs=1e-12)


@settings(max_examples=30, deadline=None)
@given(q1=st.floats(-20, 20), q2=st.floats(-20, 20))
def test_transform_bounded_and_even(q1, q2):
    for sh in (Circular(2), Slit(1, 7, 0.3), Annular(1, 3)):
        v = ptilde(sh, np.array([q1, q2]))
        assert abs(v) <= 1 + 1e-12
        assert ptilde(sh, np.array([-q1, -q2])) == pytest.approx(v, abs=1e-12)


def test_projected_profiles_integrate_to_area():
    y = np.linspace(-8, 8, 20001)
    for sh, area in ((Circular(3), np.pi * 9), (Slit(1, 7), 28.0), (Annular(2, 4), np.pi * 12),
                     (Slit(1, 7, 0.3), 28.0)):
        assert np.trapezoid(projected_profile(sh, y), y) == pytest.approx(area, rel=3e-3)


def test_transfer_is_fourier_transform_of_impulse():
    # small d1 and omega keep the chirp resolvable on a modest crystal grid
    sys_ = OpticalSystemSpec(d1=20.0, aperture_A=ApertureSpec(Circular(0.2)), f=50.0)
    omega = 0.5
    x_det = np.array([0.01, -0.02])
    n, h = 128, 0.02
    xs = (np.arange(n) - n / 2) * h
    X, Y = np.meshgrid(xs, xs, indexing="xy")
    xc = np.stack([X, Y], axis=-1)
    win = np.exp(-(X**2 + Y**2) / (2 * 0.3**2))
    g = impulse_response(np.broadcast_to(x_det, xc.shape), xc, omega, sys_, n=192) * win
    for q in (np.array([0.0, 0.0]), np.array([3.0, -2.0])):
        # response to the plane wave exp(+i q.x)
        ft = np.sum(g * np.exp(1j * (xc @ q))) * h * h
        # windowing the source convolves the transfer function with a narrow Gaussian;
        # compare against that smoothed target
        u = np.linspace(-15, 15, 61)
        U1, U2 = np.meshgrid(u, u, indexing="ij")
        qq = np.stack([q[0] + U1, q[1] + U2], axis=-1)
        kern = np.exp(-(U1**2 + U2**2) * 0.3**2 / 2) * (0.3**2 / (2 * np.pi)) * (u[1] - u[0]) ** 2
        target = np.sum(transfer_function(np.broadcast_to(x_det, qq.shape), qq, omega, sys_) * kern)
        assert abs(ft - target) < 1e-2 * abs(target)


def test_amplitude_transform_dc_is_area():
    assert amplitude_transform(Circular(2), np.zeros(2)).real == pytest.approx(np.pi * 4)
    assert amplitude_transform(Slit(1, 7), np.zeros(2)).real == pytest.approx(28.0)


def test_fresnel_number():
    s = OpticalSystemSpec(1000.0, ApertureSpec(Circular(5)))
    assert s.fresnel_number(351.1) == pytest.approx(5**4 / (4 * 351.1e-6 * 1e9))
    assert s.fresnel_ok(351.1)
    assert not OpticalSystemSpec(10.0, ApertureSpec(Circular(5))).fresnel_ok(351.1)


def test_single_aperture_feeds_both_arms():
    ap = ApertureSpec(Circular(5))
    s = OpticalSystemSpec(1000.0, ap)
    assert s.aperture("B") is ap


def test_validation():
    for bad in (lambda: Circular(0), lambda: Slit(-1, 2), lambda: Annular(3, 2),
                lambda: Mask(np.zeros((3, 3)), 0.1), lambda: OpticalSystemSpec(0, ApertureSpec(Circular(1)))):
        with pytest.raises(DomainError):
            bad()


def test_mask_file_roundtrip(tmp_path):
    m = rasterize(Slit(1, 2), n=32)
    f = tmp_path / "m.txt"
    np.savetxt(f, m.transmission)
    loaded = load_mask(f, m.pitch)
    q = _grid(3.0, 11)
    assert np.allclose(ptilde(loaded, q), ptilde(m, q), atol=1e-12)
    bad = tmp_path / "bad.txt"
    bad.write_text("1 x\n")
    with pytest.raises(DomainError):
        load_mask(bad, 0.1)


def test_mask_orientation():
    # a mask open only in its top half has its centroid at positive e2:
    # its transform phase goes as exp(-i q2 y_c)
    t = np.zeros((20, 20))
    t[:10] = 1.0
    v = ptilde(Mask(t, 0.1), np.array([0.0, 1.0]))
    assert np.angle(v) < 0
