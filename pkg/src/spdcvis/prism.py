"""Dispersing prism placed in the down-converted beam.

At its design wavelength the prism is set at minimum deviation. Each
(q, omega) mode leaves with a transverse wavevector q' whose e1 component
follows a second-order Snell relation; e2 passes unchanged.
"""

from __future__ import annotations

from dataclasses import dataclass
import warnings
from typing import NamedTuple

import numpy as np
from scipy.optimize import bisect

from .errors import ApproximationWarning, DomainError
from .materials import get_material
from .units import C, omega_from_wavelength, wavelength_um


@dataclass(frozen=True)
class PrismSpec:
    """Prism geometry. ``phi0`` (rad) is the external incidence angle; left
    as ``None`` it is set from the minimum-deviation condition at
    ``center_wavelength`` (nm), otherwise it is checked against it."""

    apex_angle: float = np.pi / 3
    center_wavelength: float = 702.2
    material: str = "FusedSilica"
    phi0: float | None = None

    def __post_init__(self):
        if not 0 < self.apex_angle < np.pi:
            raise DomainError("apex angle must lie in (0, pi)")
        n = self.index(omega_from_wavelength(self.center_wavelength))
        s = n * np.sin(self.apex_angle / 2)
        if s >= 1:
            raise DomainError("no minimum-deviation geometry: internal angle exceeds critical")
        phi_min = float(np.arcsin(s))
        if self.phi0 is None:
            object.__setattr__(self, "phi0", phi_min)
        elif abs(self.phi0 - phi_min) > 1e-6:
            raise DomainError(f"phi0={self.phi0:.6f} rad does not match minimum deviation "
                              f"({phi_min:.6f} rad) at {self.center_wavelength} nm")

    @property
    def omega_center(self) -> float:
        return float(omega_from_wavelength(self.center_wavelength))

    def index(self, omega):
        return get_material(self.material).branch("n").n(wavelength_um(omega))

    def dn_domega(self, omega):
        """dn/domega in fs."""
        br = get_material(self.material).branch("n")
        lam = wavelength_um(omega)
        return -br.dn_dlam(lam) * lam / omega


def _S(q, qp, omega, prism: PrismSpec):
    # second-order expansion of sin(phi0 + d) * sqrt(n^2 - sin^2(phi0 + d'))
    p0 = prism.phi0
    d, dp = C * q / omega, C * qp / omega
    n2 = prism.index(omega) ** 2
    first = np.sin(p0) + np.cos(p0) * d - 0.5 * np.sin(p0) * d * d
    inner = n2 - np.sin(p0) ** 2 - np.sin(2 * p0) * dp - np.cos(2 * p0) * dp * dp
    if inner < 0:
        raise DomainError("transverse wavevector beyond total internal reflection")
    return first * np.sqrt(inner)


def beta_dispersion(prism: PrismSpec, omega: float | None = None) -> float:
    """Angular dispersion sin(a) / (cos(phi0) cos(a/2)) dn/domega, in seconds."""
    omega = prism.omega_center if omega is None else omega
    a = prism.apex_angle
    return float(np.sin(a) / (np.cos(prism.phi0) * np.cos(a / 2)) * prism.dn_domega(omega)) * 1e-15


def _map_e1(q1: float, omega: float, prism: PrismSpec, tol: float) -> float:
    target = prism.index(omega) ** 2 * np.sin(prism.apex_angle)

    def g(qp):
        return _S(q1, qp, omega, prism) + _S(qp, q1, omega, prism) - target

    beta_fs = beta_dispersion(prism) * 1e15
    dw = omega - prism.omega_center
    guess = -q1 + beta_fs * (2 * prism.omega_center / C) * dw
    width = 4 * abs(q1) + 4 * beta_fs * abs(dw) * omega / C + 1e-3 * omega / C
    lo, hi = guess - width, guess + width
    if g(lo) * g(hi) > 0:
        raise DomainError("prism mapping root not bracketed")
    return bisect(g, lo, hi, xtol=tol, maxiter=400)


def snell_map(q, omega: float, prism: PrismSpec, tol: float = 1e-12):
    """Map an incident transverse wavevector to the exit one.

    ``q`` is either a scalar e1 component or an array with trailing axis 2;
    the e2 component is returned unchanged.
    """
    q = np.asarray(q, dtype=float)
    if np.any(np.abs(q) * C / omega > 0.1):
        warnings.warn("transverse wavevector beyond the paraxial window", ApproximationWarning, stacklevel=2)
    if q.ndim == 0:
        return _map_e1(float(q), omega, prism, tol)
    if q.shape[-1] != 2:
        raise ValueError("q must be scalar or have a trailing axis of length 2")
    out = q.copy()
    flat = out.reshape(-1, 2)
    for row in flat:
        row[0] = _map_e1(row[0], omega, prism, tol)
    return flat.reshape(q.shape)


class PrismVerdict(NamedTuple):
    negligible: bool
    ratio: float  # angular dispersion over angular resolution


def prism_negligible(b: float, bandwidth: float, prism: PrismSpec,
                     lambda_center: float | None = None) -> PrismVerdict:
    """Compare the prism's angular spread beta * bandwidth with the 2 lam / b
    resolution of an aperture of diameter ``b`` (mm). ``bandwidth`` is in
    rad/fs, ``lambda_center`` in nm."""
    lam_mm = (prism.center_wavelength if lambda_center is None else lambda_center) * 1e-6
    spread = beta_dispersion(prism) * 1e15 * bandwidth
    ratio = spread / (2 * lam_mm / b)
    return PrismVerdict(ratio < 1, float(ratio))


def linear_map(q, omega: float, prism: PrismSpec, pump_omega: float | None = None):
    """First-order expansion of the exit e1 component about (0, center),
    with the frequency slope written as beta * pump_omega / c."""
    wp = 2 * prism.omega_center if pump_omega is None else pump_omega
    beta_fs = beta_dispersion(prism) * 1e15
    return -np.asarray(q, dtype=float) + beta_fs * wp / C * (omega - wp / 2)


def mapping_table(q_values, omegas, prism: PrismSpec):
    """Rows of (omega, q, q') for export."""
    rows = []
    for w in np.asarray(omegas, dtype=float):
        for q in np.asarray(q_values, dtype=float):
            rows.append((float(w), float(q), float(snell_map(q, w, prism))))
    return rows
