"""Closed-form coincidence visibility for the polarization interferometer.

The coincidence rate as a function of the o/e delay ``tau`` is
R(tau) = R0 [1 - V(tau)]. V is a triangle of base LD, narrowed by the
walk-off sinc term and weighted by the aperture transforms evaluated at a
transverse frequency that grows linearly with tau.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field, replace
from typing import Union

import numpy as np
from scipy import integrate
from scipy.special import erf

from .crystal import CrystalSpec, DispersionParams, dispersion_params
from .errors import DomainError, QuadratureError
from .optics import OpticalSystemSpec, ptilde, shift_modulation, sinc
from .pumpgeom import planewave_valid
from .units import C, gaussian_spectral_sigma

SPECTRAL_CUTOFF = 5.0  # pump spectrum integrated over +-5 standard deviations
_GAUSS = 1 / np.sqrt(2 * np.pi)


@dataclass(frozen=True)
class CwPlane:
    wavelength: float  # nm


@dataclass(frozen=True)
class PulsedPlane:
    """Transform-limited pulse; ``fwhm_duration`` is the intensity FWHM in fs."""

    center_wavelength: float
    fwhm_duration: float
    spectral_shape: str = "gaussian"

    def __post_init__(self):
        if self.spectral_shape != "gaussian":
            raise DomainError(f"unsupported pump spectrum '{self.spectral_shape}'")
        if not self.fwhm_duration > 0:
            raise DomainError("pulse duration must be positive")

    @property
    def wavelength(self):
        return self.center_wavelength

    @property
    def spectral_sigma(self):
        """Standard deviation of |E(nu_p)|^2 in rad/fs."""
        return float(gaussian_spectral_sigma(self.fwhm_duration))


@dataclass(frozen=True)
class FiniteBeam:
    """cw pump of finite diameter (mm); the pattern itself is computed in the
    plane-wave limit and annotated with a validity verdict."""

    wavelength: float
    diameter: float

    def __post_init__(self):
        if not self.diameter > 0:
            raise DomainError("beam diameter must be positive")


Pump = Union[CwPlane, PulsedPlane, FiniteBeam]


def triangle(x):
    return np.clip(1.0 - np.abs(x), 0.0, None)


def aperture_argument(tau, params: DispersionParams, d1: float):
    """Magnitude of the transverse frequency (1/mm) at which the aperture
    transforms are probed for delay ``tau``."""
    q0 = params.omega_p0 * params.thickness * params.M / (4 * C * d1)
    return q0 * 2 * np.asarray(tau, dtype=float) / params.LD


def walkoff_phase(tau, params: DispersionParams, d1: float):
    """Argument of the walk-off sinc, before multiplication by the triangle."""
    L = params.thickness
    return params.omega_p0 * L * L * params.M**2 / (4 * C * d1) * np.asarray(tau, dtype=float) / params.LD


def _check_engine(system: OpticalSystemSpec):
    if system.spectral_filter is not None:
        raise DomainError("the closed-form engine does not model spectral filters")


def aperture_factor(tau, system: OpticalSystemSpec, params: DispersionParams):
    """Aperture transforms at -q e2 (arm A) and +q e2 (arm B), times the
    shift modulation."""
    q = aperture_argument(tau, params, system.d1)
    qv = np.stack([np.zeros_like(q), q], axis=-1)
    pa = ptilde(system.aperture_A.shape, -qv)
    pb = ptilde(system.aperture_B.shape, qv)
    return np.real(pa * pb) * shift_modulation(q, system.aperture_A.shift, system.aperture_B.shift)


def visibility_cw(tau, system: OpticalSystemSpec, params: DispersionParams, include_sinc: bool = True):
    """Visibility V(tau) under a monochromatic plane-wave pump."""
    _check_engine(system)
    tau = np.asarray(tau, dtype=float)
    lam = triangle(2 * tau / params.LD - 1)
    v = lam * aperture_factor(tau, system, params)
    if include_sinc:
        v = v * sinc(walkoff_phase(tau, params, system.d1) * lam)
    return v


def pulsed_factor(tau, params: DispersionParams, d1: float, sigma: float,
                  include_sinc: bool = True, epsabs: float = 1e-10, epsrel: float = 1e-10):
    """Pump-spectrum average of the walk-off sinc.

    With ``sigma == 0`` this is exactly the cw sinc factor.
    """
    tau = np.atleast_1d(np.asarray(tau, dtype=float))
    lam = triangle(2 * tau / params.LD - 1)
    s0 = walkoff_phase(tau, params, d1) if include_sinc else np.zeros_like(tau)
    if sigma == 0:
        return sinc(s0 * lam)
    a = params.D_plus * params.thickness * sigma
    norm_mass = erf(SPECTRAL_CUTOFF / np.sqrt(2))
    out = np.empty_like(tau)
    for i, (s, lm) in enumerate(zip(s0, lam)):
        if lm == 0:
            out[i] = 1.0
            continue
        with warnings.catch_warnings():
            warnings.simplefilter("error", integrate.IntegrationWarning)
            try:
                val, err = integrate.quad(
                    lambda x: _GAUSS * np.exp(-0.5 * x * x) * np.sinc((a * x + s) * lm / np.pi),
                    -SPECTRAL_CUTOFF, SPECTRAL_CUTOFF,
                    epsabs=epsabs, epsrel=epsrel, limit=400)
            except integrate.IntegrationWarning as exc:
                raise QuadratureError(f"pump-spectrum average failed at tau={tau[i]:.6g} fs: {exc}") from None
        out[i] = val / norm_mass
    return out


def visibility_pulsed(tau, system: OpticalSystemSpec, params: DispersionParams, pump: PulsedPlane,
                      include_sinc: bool = True, epsabs: float = 1e-10, epsrel: float = 1e-10):
    """Visibility under a Gaussian pulsed plane-wave pump centered on
    ``params.omega_p0``."""
    _check_engine(system)
    tau_arr = np.asarray(tau, dtype=float)
    lam = triangle(2 * tau_arr / params.LD - 1)
    vp = pulsed_factor(tau_arr.ravel(), params, system.d1, pump.spectral_sigma,
                       include_sinc, epsabs, epsrel).reshape(tau_arr.shape)
    return lam * vp * aperture_factor(tau_arr, system, params)


def visibility(tau, system, params, pump: Pump, include_sinc: bool = True):
    if isinstance(pump, PulsedPlane):
        return visibility_pulsed(tau, system, params, pump, include_sinc)
    return visibility_cw(tau, system, params, include_sinc)


def default_tau_grid(params: DispersionParams, samples: int = 512):
    return np.linspace(-0.25 * params.LD, 1.25 * params.LD, samples)


def asymmetry(system, params, pump: Pump | None = None, samples: int = 1025,
              include_sinc: bool = True, signed: bool = False):
    """Integral over u in [0, LD/2] of V(LD/2 + u) - V(LD/2 - u), in fs.

    The absolute value is taken inside the integral unless ``signed``.
    """
    pump = pump or CwPlane(0.0)
    half = params.LD / 2
    u = np.linspace(0.0, half, samples)
    diff = (visibility(half + u, system, params, pump, include_sinc)
            - visibility(half - u, system, params, pump, include_sinc))
    return float(integrate.simpson(diff if signed else np.abs(diff), x=u))


@dataclass
class PatternGrid:
    tau: np.ndarray
    V: np.ndarray
    metadata: dict = field(default_factory=dict)

    @property
    def R_over_R0(self):
        return 1.0 - self.V


def params_for(crystal: CrystalSpec, pump: Pump) -> DispersionParams:
    if crystal.pump_wavelength != pump.wavelength:
        crystal = replace(crystal, pump_wavelength=pump.wavelength)
    return dispersion_params(crystal)


def pattern(system: OpticalSystemSpec, crystal: CrystalSpec, pump: Pump, tau_grid=None,
            include_sinc: bool = True, tau_samples: int = 512) -> PatternGrid:
    """Evaluate V over a delay grid and collect the run diagnostics."""
    _check_engine(system)
    params = params_for(crystal, pump)
    tau = default_tau_grid(params, tau_samples) if tau_grid is None else np.asarray(tau_grid, dtype=float)
    v = visibility(tau, system, params, pump, include_sinc)
    half = params.LD / 2
    meta = {
        "pump": type(pump).__name__,
        "pump_wavelength_nm": pump.wavelength,
        "thickness_mm": params.thickness,
        "theta_oa_deg": float(np.degrees(params.theta_oa)),
        "D_fs_per_mm": params.D,
        "D_plus_fs_per_mm": params.D_plus,
        "M": params.M,
        "M_p": params.M_p,
        "LD_fs": params.LD,
        "d1_mm": system.d1,
        "include_sinc": include_sinc,
        "fresnel_number": system.fresnel_number(pump.wavelength),
        "fresnel_ok": system.fresnel_ok(pump.wavelength),
        "visibility_at_full_compensation": float(visibility(half, system, params, pump, include_sinc)),
        "min_V": float(np.min(v)),
        "max_V": float(np.max(v)),
        "asymmetry_fs": asymmetry(system, params, pump, include_sinc=include_sinc),
    }
    if isinstance(pump, PulsedPlane):
        meta["pulse_fwhm_fs"] = pump.fwhm_duration
        meta["spectral_sigma_rad_per_fs"] = pump.spectral_sigma
    if isinstance(pump, FiniteBeam):
        verdict = planewave_valid(pump.diameter, params.thickness, params)
        meta["beam_diameter_mm"] = pump.diameter
        meta["planewave_ratio"] = verdict.ratio
        meta["planewave_valid"] = verdict.valid
        meta["planewave_threshold"] = verdict.threshold
    return PatternGrid(tau, v, meta)


def visibility_vs_thickness(L_grid, system: OpticalSystemSpec, pump: Pump, material: str = "BBO",
                            include_sinc: bool = True):
    """V(LD/2) as the crystal thickness varies; the cut angle stays at the
    phase-matching angle for the pump wavelength."""
    _check_engine(system)
    base = dispersion_params(CrystalSpec(1.0, pump.wavelength, None, material))
    out = []
    for L in np.asarray(L_grid, dtype=float):
        p = base.with_thickness(L)
        out.append(float(visibility(p.LD / 2, system, p, pump, include_sinc)))
    return np.array(out)
