"""Unit conventions: lengths in mm, times in fs, angular frequencies in rad/fs."""

import numpy as np

C = 299.792458e-6  # speed of light, mm/fs


def omega_from_wavelength(wavelength_nm):
    """Vacuum wavelength in nm to angular frequency in rad/fs."""
    return 2 * np.pi * C / (np.asarray(wavelength_nm, dtype=float) * 1e-6)


def wavelength_um(omega):
    """Angular frequency in rad/fs to vacuum wavelength in micrometres."""
    return 2e3 * np.pi * C / np.asarray(omega, dtype=float)


def bandwidth_to_omega(delta_lambda_nm, center_nm):
    """Convert a wavelength bandwidth to an angular-frequency bandwidth (rad/fs)."""
    return 2 * np.pi * C * (delta_lambda_nm * 1e-6) / (center_nm * 1e-6) ** 2


def gaussian_spectral_sigma(fwhm_fs):
    """Standard deviation (rad/fs) of the spectral intensity of a transform-limited
    Gaussian pulse whose temporal intensity FWHM is ``fwhm_fs``."""
    fwhm_omega = 4 * np.log(2) / fwhm_fs
    return fwhm_omega / (2 * np.sqrt(2 * np.log(2)))
