"""Pump-side corrections: phase mismatch with a non-monochromatic,
non-planar pump, and the criterion for treating a finite beam as a plane wave."""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .crystal import DispersionParams, delta_mismatch
from .errors import DomainError
from .units import C


class Verdict(NamedTuple):
    valid: bool
    ratio: float
    threshold: float


def delta_with_pump(nu, nu_p, q, q_p, params: DispersionParams):
    """Phase mismatch including the pump detuning ``nu_p`` (rad/fs) and pump
    transverse wavevector ``q_p`` (shape (..., 2)).

    With ``nu_p = 0`` and ``q_p = 0`` the plane-wave mismatch is returned
    unchanged.
    """
    base = delta_mismatch(nu, q, params)
    q_p = np.asarray(q_p, dtype=float)
    if np.all(np.asarray(nu_p) == 0) and not np.any(q_p):
        return base
    qp2 = q_p[..., 0] ** 2 + q_p[..., 1] ** 2
    return (base + params.D_plus * np.asarray(nu_p, dtype=float)
            + (C / params.omega_p0) * qp2
            + (params.M_p - params.M / 2) * q_p[..., 1])


def planewave_ratio(a: float, L: float, params: DispersionParams) -> float:
    """|M_p - M/2| L / a for a pump beam of diameter ``a`` (mm)."""
    if not a > 0:
        raise DomainError("pump diameter must be positive")
    return abs(params.M_p - params.M / 2) * L / a


def planewave_valid(a: float, L: float, params: DispersionParams, threshold: float = 0.1) -> Verdict:
    """Whether the plane-wave pump model holds for a beam of diameter ``a``."""
    r = planewave_ratio(a, L, params)
    return Verdict(r < threshold, r, threshold)
