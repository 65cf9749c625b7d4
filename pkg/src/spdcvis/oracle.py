"""Independent reference evaluations of the cw visibility.

Two routes, both separate from the closed-form engine:

``v_oracle``
    Starts from the double integral over emission depths z, z' in [-L, 0] of
    the aperture kernel. The frequency integral collapses the pair onto the
    line z + z' = -2 tau / D, leaving a 1-D integral along that segment which
    is done by adaptive quadrature.

``biphoton_direct``
    Builds the two-photon amplitude behind the apertures on explicit grids
    (one transverse dimension) and integrates |A|^2 over the detectors. It
    shares only the dispersion constants with the engine.
"""

from __future__ import annotations

import warnings

import numpy as np
from scipy import integrate
from scipy.special import roots_legendre

from .crystal import DispersionParams
from .errors import DomainError, GridResolutionWarning, QuadratureError
from .interference import visibility_cw
from .optics import OpticalSystemSpec, e2_half_extent, projected_profile, ptilde
from .units import C


def v_oracle_kernel(z, zp, system: OpticalSystemSpec, params: DispersionParams, kind: str = "V"):
    """Aperture kernel for emission depths ``z`` and ``zp`` (mm, in [-L, 0]),
    normalized by the on-axis propagation constant.

    ``kind="V"`` is the interference kernel, whose aperture arguments follow
    z + z'; ``kind="0"`` is the background kernel, which follows z - z'.
    """
    z = np.asarray(z, dtype=float)
    zp = np.asarray(zp, dtype=float)
    wp, M, d1 = params.omega_p0, params.M, system.d1
    g = wp * M / (4 * C * d1) * ((z + zp) if kind == "V" else (z - zp))
    gv = np.stack([np.zeros_like(g), g], axis=-1)
    phase = np.exp(-1j * wp / (8 * C * d1) * M * M * (z * z - zp * zp))
    return phase * ptilde(system.aperture_A, gv) * ptilde(system.aperture_B, -gv)


def r0(system: OpticalSystemSpec, params: DispersionParams) -> float:
    """Background rate along z = z', in units of 2 pi / D times the kernel scale."""
    val, _ = integrate.quad(lambda z: np.real(v_oracle_kernel(z, z, system, params, kind="0")),
                            -params.thickness, 0.0, epsabs=1e-13, epsrel=1e-12)
    return val


def v_oracle(tau: float, system: OpticalSystemSpec, params: DispersionParams,
             epsabs: float = 1e-12, epsrel: float = 1e-12, full_output: bool = False):
    """Visibility at a single delay by quadrature along the emission segment.

    Returns the value, or ``(value, abserr)`` with ``full_output``.
    """
    L, D = params.thickness, params.D
    s = -2.0 * float(tau) / D
    half = L - abs(s + L)  # allowed |z - z'| on the segment z + z' = s
    if half <= 0:
        return (0.0, 0.0) if full_output else 0.0

    def part(fn):
        with warnings.catch_warnings():
            warnings.simplefilter("error", integrate.IntegrationWarning)
            try:
                return integrate.quad(
                    lambda t: fn(v_oracle_kernel((s + t) / 2, (s - t) / 2, system, params)),
                    -half, half, epsabs=epsabs, epsrel=epsrel, limit=200)
            except integrate.IntegrationWarning as exc:
                raise QuadratureError(f"oracle quadrature failed at tau={tau}: {exc}") from None

    re, err_re = part(np.real)
    # the part odd in t integrates to zero; only Re V is observable
    norm = 2.0 * r0(system, params)
    value = re / norm
    if full_output:
        return value, err_re / norm
    return value


def oracle_table(taus, system: OpticalSystemSpec, params: DispersionParams, include_sinc: bool = True):
    """Rows comparing the engine with the oracle at each delay."""
    rows = []
    for t in np.asarray(taus, dtype=float):
        v_ref, err = v_oracle(t, system, params, full_output=True)
        v_cf = float(visibility_cw(t, system, params, include_sinc))
        rows.append({"tau_fs": float(t), "closed_form": v_cf, "oracle": float(v_ref),
                     "quad_error": float(err), "abs_diff": abs(v_cf - v_ref)})
    return rows


# --- direct biphoton reference ---------------------------------------------

def _check_phase_step(name, step, limit=np.pi):
    if step > limit:
        warnings.warn(f"{name} phase advances {step:.3g} rad per sample", GridResolutionWarning,
                      stacklevel=3)


def _profile(aperture, y):
    return projected_profile(aperture.shape, y - aperture.shift[1])


def biphoton_direct(tau, system: OpticalSystemSpec, params: DispersionParams,
                    n_nu: int = 64, n_z: int = 48, n_y: int = 401):
    """Visibility from an explicit 1-D biphoton calculation.

    Transverse structure is kept along e2 only; the e1 integrals factor out
    and each aperture enters through its |p|^2 projected onto e2. The pair is
    parametrized by the ordinary photon's detuning ``nu`` and transverse
    wavevector ``q``; the delay is applied to the extraordinary photon.

    For each detuning on an ``n_nu`` grid the amplitude at the aperture plane
    is summed over ``n_z`` Gauss-Legendre emission depths, each depth
    contributing a Fresnel-propagated point response whose wavevector
    integral is Gaussian and done exactly. Lens and bucket detector reduce to
    an integral of |A|^2 over the aperture planes. Returns V(tau) for each
    requested delay.
    """
    if system.spectral_filter is not None:
        raise DomainError("direct reference does not model spectral filters")
    if n_nu > 64:
        raise DomainError("the direct reference is meant for coarse grids (n_nu <= 64)")
    taus = np.atleast_1d(np.asarray(tau, dtype=float))
    L, D, M, wp, d1 = params.thickness, params.D, params.M, params.omega_p0, system.d1
    LD = L * D
    w0 = wp / 2
    gamma = 2 * C / wp  # q^2 coefficient of the mismatch

    # aperture-plane grid shared by both arms
    ext = 1.02 * max(e2_half_extent(ap.shape) + abs(ap.shift[1])
                     for ap in (system.aperture_A, system.aperture_B))
    y = np.linspace(-ext, ext, n_y)
    dy = y[1] - y[0]
    pa = _profile(system.aperture_A, y)
    pb = _profile(system.aperture_B, y)
    # C(m) = sum_i pa[i] pb[i - m]: weight for separation xi = m dy
    corr = np.correlate(pa, pb, mode="full") * dy * dy
    xi = (np.arange(corr.size) - (n_y - 1)) * dy

    zn, zw = roots_legendre(n_z)
    zeta = 0.5 * L * (zn + 1)  # depth measured from the exit face
    zw = 0.5 * L * zw

    out = np.empty_like(taus)
    for k, t in enumerate(taus):
        # the nu-sum is periodic in the residual delay; keep the period clear of it
        period = 2.5 * LD + 2 * abs(t - LD / 2)
        dnu = 2 * np.pi / period
        nu = (np.arange(n_nu) - (n_nu - 1) / 2) * dnu
        # largest residual delay must not alias onto zero
        _check_phase_step("detuning", dnu * (LD + abs(2 * t - LD)), limit=2 * np.pi)

        beta = C * d1 * (1 / (2 * (w0 - nu)) + 1 / (2 * (w0 + nu)))  # (n_nu,)
        a = beta[:, None] + gamma * zeta[None, :]  # (n_nu, n_z)
        pref = np.sqrt(np.pi / (1j * a)) * zw[None, :]
        _check_phase_step("depth", np.abs(nu).max() * D * L / n_z * np.pi / 2)
        _check_phase_step("aperture-plane", M * 2 * L / (2 * beta.min()) * dy)

        # a1: e photon to A; a2: e photon to B
        arg1 = (xi[None, None, :] + zeta[None, :, None] * M) ** 2 / (4 * a[:, :, None])
        arg2 = (xi[None, None, :] - zeta[None, :, None] * M) ** 2 / (4 * a[:, :, None])
        ph = np.exp(1j * D * nu[:, None] * zeta[None, :])  # (n_nu, n_z)
        a1 = np.einsum("nz,nzx->nx", pref * ph, np.exp(1j * arg1)) * np.exp(-1j * nu * t)[:, None]
        a2 = np.einsum("nz,nzx->nx", pref * np.conj(ph), np.exp(1j * arg2)) * np.exp(1j * nu * t)[:, None]

        jac = 1 / ((w0 - nu) * (w0 + nu))
        cross = np.sum(jac * (np.real(a1 * np.conj(a2)) @ corr))
        base = np.sum(jac * ((np.abs(a1) ** 2 + np.abs(a2) ** 2) @ corr))
        out[k] = 2 * cross / base
    return out if np.ndim(tau) else float(out[0])
