import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spdcvis.crystal import (CrystalSpec, delta_mismatch, dispersion_params, index_extraordinary,
                             index_ordinary, kappa, phase_matching_angle)
from spdcvis.errors import ApproximationWarning, DomainError
from spdcvis.materials import get_material, parse_table
from spdcvis.units import C, omega_from_wavelength


def test_dispersion_anchors(uv, violet):
    assert uv.M == pytest.approx(0.0711, abs=7e-4)
    assert uv.D == pytest.approx(248, abs=3)
    assert violet.M == pytest.approx(0.0723, abs=7e-4)
    assert violet.D == pytest.approx(182, abs=3)
    assert uv.M_p == pytest.approx(0.0770, abs=8e-4)


def test_phase_matching_closes(uv):
    wp = uv.omega_p0
    th = uv.theta_oa
    mismatch = 2 * index_extraordinary(wp, th) - index_ordinary(wp / 2) - index_extraordinary(wp / 2, th)
    assert abs(mismatch) < 1e-12
    # collinear: K_o + K_e equals the pump wavenumber
    kp = index_extraordinary(wp, th) * wp / C
    assert uv.K_o + uv.K_e == pytest.approx(kp, rel=1e-12)


def test_orderings(uv):
    # BBO is negative uniaxial; the ordinary daughter is the slow one here
    assert uv.inv_u_o > uv.inv_u_e
    assert uv.D > 0 and uv.LD == pytest.approx(1.5 * uv.D)
    assert uv.M > 0 and uv.M_p > uv.M


def test_kappa_on_axis_matches_index(uv):
    w = uv.omega_p0 / 2
    zero = np.zeros(2)
    assert kappa(w, zero, "o", uv.theta_oa) == pytest.approx(uv.K_o, rel=1e-13)
    assert kappa(w, zero, "e", uv.theta_oa) == pytest.approx(uv.K_e, rel=1e-13)


def test_kappa_derivatives(uv):
    w, th = uv.omega_p0 / 2, uv.theta_oa
    h = 1e-6 * w
    for pol, inv_u in (("o", uv.inv_u_o), ("e", uv.inv_u_e)):
        d = (kappa(w + h, np.zeros(2), pol, th) - kappa(w - h, np.zeros(2), pol, th)) / (2 * h)
        assert d == pytest.approx(inv_u, rel=1e-7)
    dq = 1e-3
    slope = (kappa(w, np.array([0, dq]), "e", th) - kappa(w, np.array([0, -dq]), "e", th)) / (2 * dq)
    assert slope == pytest.approx(uv.M, rel=1e-6)
    # no walk-off along e1
    s1 = (kappa(w, np.array([dq, 0]), "e", th) - kappa(w, np.array([-dq, 0]), "e", th)) / (2 * dq)
    assert abs(s1) < 1e-9


def _exact_mismatch(nu, q, p):
    # nu, q belong to the ordinary daughter; the e daughter carries -nu, -q
    w0 = p.omega_p0 / 2
    kp = index_extraordinary(p.omega_p0, p.theta_oa) * p.omega_p0 / C
    return kp - kappa(w0 + nu, q, "o", p.theta_oa) - kappa(w0 - nu, -q, "e", p.theta_oa)


def _residual(nu, q, p):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ApproximationWarning)
        return abs(_exact_mismatch(nu, q, p) - delta_mismatch(nu, q, p))


def test_frequency_residual_is_second_order(uv):
    r = [_residual(nu, np.zeros(2), uv) for nu in (2e-3, 1e-3)]
    assert r[1] < r[0] / 3


def test_linear_walkoff_term_is_exact(uv):
    # the odd-in-q2 part of the exact mismatch is M q2 up to third order
    q = np.array([0.0, 0.5])
    odd = (_exact_mismatch(0.0, q, uv) - _exact_mismatch(0.0, -q, uv)) / 2
    assert odd == pytest.approx(uv.M * 0.5, rel=1e-6)


def test_transverse_residual_is_third_order(uv):
    # residual against the exact wavenumbers should be O(|q|^3) along q
    r = [_residual(0.0, np.array([s, 0.0]), uv) for s in (4.0, 2.0)]
    assert r[1] < r[0] / 6


def test_quadratic_coefficient_as_modelled(uv):
    q = np.array([3.0, 0.0])
    assert delta_mismatch(0.0, q, uv) == pytest.approx(2 * C / uv.omega_p0 * 9.0, rel=1e-14)


def test_polynomial_structure(uv):
    nu = np.linspace(-0.05, 0.05, 9)
    d = delta_mismatch(nu, np.tile([1.0, 2.0], (9, 1)), uv)
    assert np.allclose(np.polyfit(nu, d, 2)[0], 0.0, atol=1e-9)
    q2 = np.linspace(-40, 40, 11)
    q = np.stack([np.zeros_like(q2), q2], axis=-1)
    coef = np.polyfit(q2, delta_mismatch(0.01, q, uv), 3)
    assert abs(coef[0]) < 1e-12
    assert coef[1] == pytest.approx(2 * C / uv.omega_p0, rel=1e-9)
    assert coef[2] == pytest.approx(uv.M, rel=1e-9)


@settings(max_examples=60, deadline=None)
@given(nu=st.floats(-0.05, 0.05), q1=st.floats(-50, 50), q2=st.floats(-50, 50))
def test_mismatch_symmetries(uv, nu, q1, q2):
    d = delta_mismatch(nu, np.array([q1, q2]), uv)
    # e1 reflection leaves it unchanged; the e2 walk-off term is odd
    assert delta_mismatch(nu, np.array([-q1, q2]), uv) == pytest.approx(d, abs=1e-12)
    even = delta_mismatch(nu, np.array([q1, -q2]), uv)
    assert (d - even) == pytest.approx(2 * uv.M * q2, abs=1e-10)


def test_approximation_warning(uv):
    with pytest.warns(ApproximationWarning):
        delta_mismatch(0.5 * uv.omega_p0, np.zeros(2), uv)
    with pytest.warns(ApproximationWarning):
        delta_mismatch(0.0, np.array([0.0, 0.2 * uv.K_o]), uv)


def test_validation():
    with pytest.raises(DomainError):
        CrystalSpec(0.0)
    with pytest.raises(DomainError):
        CrystalSpec(1.0, cut_angle=2.0)
    with pytest.raises(DomainError):
        CrystalSpec(1.0, material="FusedSilica")
    with pytest.raises(DomainError):
        dispersion_params(CrystalSpec(1.0)).__class__(**{**dispersion_params(CrystalSpec(1.0)).__dict__,
                                                        "inv_u_p": 1 / C})


def test_with_thickness_only_rescales_delay(uv):
    p = uv.with_thickness(3.0)
    assert p.LD == pytest.approx(2 * uv.LD)
    assert p.M == uv.M


def test_explicit_cut_angle_reproduces_default(uv):
    p = dispersion_params(CrystalSpec(1.5, 351.1, cut_angle=uv.theta_oa))
    assert p == uv


def test_phase_matching_angle_range():
    th = phase_matching_angle(omega_from_wavelength(351.1))
    assert 0.75 < th < 0.95


def test_sellmeier_window_warning():
    with pytest.warns(UserWarning):
        get_material("BBO").check_window([3.0])


def test_table_parser_rejects_bad_version():
    with pytest.raises(ValueError):
        parse_table("format_version = 99\n")
