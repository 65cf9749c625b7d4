"""Uniaxial crystal dispersion for collinear, degenerate type-II down-conversion.

Frame: e3 is the pump propagation axis, the optic axis lies in the e2-e3 plane
at angle ``theta`` from e3, i.e. along (0, sin theta, cos theta). A transverse
wavevector q = (q1, q2) tilts a wave away from e3; positive q2 tilts it toward
the optic axis.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, replace

import numpy as np
from scipy.optimize import brentq

from .errors import ApproximationWarning, DomainError
from .materials import get_material
from .units import C, omega_from_wavelength, wavelength_um


@dataclass(frozen=True)
class CrystalSpec:
    """Crystal slab and the pump it is cut for.

    Parameters
    ----------
    thickness : float
        Slab thickness L in mm.
    pump_wavelength : float
        Pump center wavelength in nm.
    cut_angle : float, optional
        Angle between optic axis and pump axis (rad). ``None`` selects the
        collinear degenerate phase-matching angle.
    material : str
        Key into the Sellmeier table; must be uniaxial.
    """

    thickness: float
    pump_wavelength: float = 351.1
    cut_angle: float | None = None
    material: str = "BBO"

    def __post_init__(self):
        if not self.thickness > 0:
            raise DomainError(f"crystal thickness must be positive, got {self.thickness}")
        if not self.pump_wavelength > 0:
            raise DomainError("pump wavelength must be positive")
        if self.cut_angle is not None and not 0 < self.cut_angle < np.pi / 2:
            raise DomainError("cut angle must lie strictly between 0 and pi/2")
        mat = get_material(self.material)
        if not mat.uniaxial:
            raise DomainError(f"{self.material} is not a uniaxial crystal")
        lam = self.pump_wavelength * 1e-3
        mat.check_window([lam, 2 * lam])


@dataclass(frozen=True)
class DispersionParams:
    """First-order dispersion of the pump and the two degenerate daughters.

    Inverse group velocities are in fs/mm, wavenumbers in 1/mm, angles in rad.
    ``M`` and ``M_p`` are the walk-off coefficients -d ln n_e / d theta of the
    extraordinary daughter and of the pump, both positive for a negative
    uniaxial crystal.
    """

    K_o: float
    K_e: float
    inv_u_o: float
    inv_u_e: float
    inv_u_p: float
    M: float
    M_p: float
    omega_p0: float
    thickness: float
    theta_oa: float

    def __post_init__(self):
        for name in ("inv_u_o", "inv_u_e", "inv_u_p"):
            if not getattr(self, name) > 1 / C:
                raise DomainError(f"{name} implies a group velocity at or above c")

    @property
    def u_o(self):
        return 1 / self.inv_u_o

    @property
    def u_e(self):
        return 1 / self.inv_u_e

    @property
    def u_p(self):
        return 1 / self.inv_u_p

    @property
    def D(self):
        """Group-delay difference per unit length of o and e daughters (fs/mm)."""
        return self.inv_u_o - self.inv_u_e

    @property
    def D_plus(self):
        """Pump group delay relative to the mean daughter delay (fs/mm)."""
        return self.inv_u_p - 0.5 * (self.inv_u_o + self.inv_u_e)

    @property
    def LD(self):
        """Total o/e group delay across the slab (fs)."""
        return self.thickness * self.D

    def with_thickness(self, thickness: float) -> "DispersionParams":
        return replace(self, thickness=float(thickness))


def _uniaxial(material):
    mat = get_material(material)
    return mat.branch("o"), mat.branch("e")


def index_ordinary(omega, material: str = "BBO"):
    o, _ = _uniaxial(material)
    return o.n(wavelength_um(omega))


def index_extraordinary(omega, theta, material: str = "BBO"):
    """Extraordinary index for propagation at ``theta`` from the optic axis."""
    o, e = _uniaxial(material)
    lam = wavelength_um(omega)
    c2, s2 = np.cos(theta) ** 2, np.sin(theta) ** 2
    return (c2 / o.n2(lam) + s2 / e.n2(lam)) ** -0.5


def _group_index_o(omega, material):
    o, _ = _uniaxial(material)
    lam = wavelength_um(omega)
    return o.n(lam) - lam * o.dn_dlam(lam)


def _group_index_e(omega, theta, material):
    # dn_e/dlam at fixed propagation angle
    o, e = _uniaxial(material)
    lam = wavelength_um(omega)
    no, nE = o.n(lam), e.n(lam)
    ne = index_extraordinary(omega, theta, material)
    dne = ne**3 * (np.cos(theta) ** 2 * o.dn_dlam(lam) / no**3
                   + np.sin(theta) ** 2 * e.dn_dlam(lam) / nE**3)
    return ne - lam * dne


def walkoff(omega, theta, material: str = "BBO"):
    """-d ln n_e / d theta, the extraordinary walk-off angle (rad)."""
    o, e = _uniaxial(material)
    lam = wavelength_um(omega)
    ne = index_extraordinary(omega, theta, material)
    return np.sin(theta) * np.cos(theta) * ne**2 * (1 / e.n2(lam) - 1 / o.n2(lam))


def kappa(omega, q, polarization: str, theta_oa: float, material: str = "BBO"):
    """Exact longitudinal wavenumber (1/mm) inside the crystal.

    ``q`` has shape (..., 2). For the extraordinary wave the index depends on
    the direction of the full wavevector; the index-ellipsoid relation is a
    quadratic in the longitudinal component and is solved in closed form.
    """
    q = np.asarray(q, dtype=float)
    if q.shape[-1] != 2:
        raise ValueError("q must have a trailing axis of length 2")
    omega = np.asarray(omega, dtype=float)
    q1, q2 = q[..., 0], q[..., 1]
    qq = q1 * q1 + q2 * q2
    k0 = omega / C
    o, e = _uniaxial(material)
    lam = wavelength_um(omega)
    if polarization == "o":
        disc = (o.n(lam) * k0) ** 2 - qq
        if np.any(disc <= 0):
            raise DomainError("transverse wavevector exceeds the ordinary wavenumber")
        return np.sqrt(disc)
    if polarization != "e":
        raise ValueError("polarization must be 'o' or 'e'")
    io, iE = 1 / o.n2(lam), 1 / e.n2(lam)
    s, c = np.sin(theta_oa), np.cos(theta_oa)
    a = c * c * io + s * s * iE
    b = 2 * q2 * s * c * (io - iE)
    cc = q2 * q2 * s * s * io + (q1 * q1 + q2 * q2 * c * c) * iE - k0 * k0
    disc = b * b - 4 * a * cc
    if np.any(disc <= 0):
        raise DomainError("transverse wavevector exceeds the extraordinary wavenumber")
    root = (-b + np.sqrt(disc)) / (2 * a)
    if np.any(root <= 0):
        raise DomainError("no forward-propagating extraordinary solution")
    return root


def phase_matching_angle(pump_omega: float, material: str = "BBO") -> float:
    """Angle at which an e-polarized pump down-converts collinearly into
    degenerate o and e daughters."""
    w0 = pump_omega / 2

    def mismatch(theta):
        return (2 * index_extraordinary(pump_omega, theta, material)
                - index_ordinary(w0, material)
                - index_extraordinary(w0, theta, material))

    lo, hi = 1e-3, np.pi / 2 - 1e-3
    if mismatch(lo) * mismatch(hi) > 0:
        raise DomainError("no collinear type-II phase-matching angle at this pump wavelength")
    return brentq(mismatch, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps)


def dispersion_params(spec: CrystalSpec) -> DispersionParams:
    wp = float(omega_from_wavelength(spec.pump_wavelength))
    theta = spec.cut_angle if spec.cut_angle is not None else phase_matching_angle(wp, spec.material)
    w0 = wp / 2
    mat = spec.material
    return DispersionParams(
        K_o=float(index_ordinary(w0, mat) * w0 / C),
        K_e=float(index_extraordinary(w0, theta, mat) * w0 / C),
        inv_u_o=float(_group_index_o(w0, mat) / C),
        inv_u_e=float(_group_index_e(w0, theta, mat) / C),
        inv_u_p=float(_group_index_e(wp, theta, mat) / C),
        M=float(walkoff(w0, theta, mat)),
        M_p=float(walkoff(wp, theta, mat)),
        omega_p0=wp,
        thickness=float(spec.thickness),
        theta_oa=float(theta),
    )


def delta_mismatch(nu, q, params: DispersionParams):
    """Second-order phase mismatch for a daughter pair under a plane-wave pump.

    ``nu`` is the frequency offset of the extraordinary daughter from
    degeneracy and ``q`` (shape (..., 2)) its transverse wavevector; the
    ordinary daughter carries the opposite offsets.
    """
    nu = np.asarray(nu, dtype=float)
    q = np.asarray(q, dtype=float)
    qq = q[..., 0] ** 2 + q[..., 1] ** 2
    w0 = params.omega_p0 / 2
    if np.any(np.abs(nu) > 0.2 * w0):
        warnings.warn("frequency offset exceeds 20% of the degenerate frequency",
                      ApproximationWarning, stacklevel=2)
    if np.any(qq > (0.1 * min(params.K_o, params.K_e)) ** 2):
        warnings.warn("transverse wavevector is not small compared with K",
                      ApproximationWarning, stacklevel=2)
    return -params.D * nu + (2 * C / params.omega_p0) * qq + params.M * q[..., 1]
