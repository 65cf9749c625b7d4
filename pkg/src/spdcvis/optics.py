"""Apertures, their normalized intensity transforms, and the free-space /
aperture / lens transfer function between crystal and detectors.

Transverse coordinates are (e1, e2) in mm; e2 lies in the plane containing
the optic axis. Nominal aperture sizes follow the closed-form transforms used
by the visibility engine: ``Circular(b)`` transforms as 2 J1(b|q|)/(b|q|), which
is exactly the normalized transform of a uniform disc of *radius* b. Whenever a
physical transmission is needed (rasterization, impulse response, the direct
biphoton reference) the geometry reproducing those transforms is used.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Union

import numpy as np
from scipy.special import j1

from .errors import DomainError
from .prism import PrismSpec
from .units import C


def sinc(x):
    """Unnormalized sinc, sin(x)/x."""
    return np.sinc(np.asarray(x) / np.pi)


def _jinc(x):
    # 2 J1(x) / x with the x -> 0 limit
    x = np.asarray(x, dtype=float)
    small = np.abs(x) < 1e-8
    xs = np.where(small, 1.0, x)
    return np.where(small, 1.0 - x * x / 8, 2 * j1(xs) / xs)


@dataclass(frozen=True)
class Circular:
    diameter: float

    def __post_init__(self):
        if not self.diameter > 0:
            raise DomainError("circular aperture size must be positive")


@dataclass(frozen=True)
class Slit:
    """Rectangular slit. ``a`` is the extent along e2, ``b`` along e1;
    ``rotation`` (rad) turns the slit counter-clockwise in the e1-e2 plane."""

    a: float
    b: float
    rotation: float = 0.0

    def __post_init__(self):
        if not (self.a > 0 and self.b > 0):
            raise DomainError("slit dimensions must be positive")


@dataclass(frozen=True)
class Annular:
    inner: float
    outer: float

    def __post_init__(self):
        if not 0 <= self.inner < self.outer:
            raise DomainError("annulus requires 0 <= inner < outer")


@dataclass(frozen=True, eq=False)
class Mask:
    """Sampled amplitude transmission. Row 0 is the top (largest e2) row,
    column 0 the leftmost (smallest e1); samples sit at pixel centers."""

    transmission: np.ndarray
    pitch: float

    def __post_init__(self):
        t = np.asarray(self.transmission, dtype=float)
        if t.ndim != 2 or min(t.shape) < 1:
            raise DomainError("mask must be a 2-D array")
        if not self.pitch > 0:
            raise DomainError("mask pitch must be positive")
        if not np.any(t != 0):
            raise DomainError("mask transmits nothing")
        object.__setattr__(self, "transmission", t)

    def coordinates(self):
        ny, nx = self.transmission.shape
        x = (np.arange(nx) - (nx - 1) / 2) * self.pitch
        y = ((ny - 1) / 2 - np.arange(ny)) * self.pitch
        return x, y


Shape = Union[Circular, Slit, Annular, Mask]


@dataclass(frozen=True)
class ApertureSpec:
    shape: Shape
    shift: tuple[float, float] = (0.0, 0.0)

    def __post_init__(self):
        object.__setattr__(self, "shift", tuple(float(s) for s in self.shift))
        if len(self.shift) != 2:
            raise DomainError("aperture shift must have two components")


@dataclass(frozen=True)
class GaussianFilter:
    """Spectral filter with Gaussian amplitude; ``fwhm`` is the FWHM of |F|^2.

    Only the transfer function honours it; the closed-form visibility engine
    rejects systems that carry one.
    """

    center: float  # rad/fs
    fwhm: float  # rad/fs

    def amplitude(self, omega):
        return np.exp(-2 * np.log(2) * (np.asarray(omega) - self.center) ** 2 / self.fwhm**2)


@dataclass(frozen=True)
class OpticalSystemSpec:
    """Crystal -> d1 -> aperture -> d2 -> lens(f) -> f -> bucket detector.

    ``aperture_B`` defaults to ``aperture_A``, which models a single aperture
    placed before the beam splitter.
    """

    d1: float
    aperture_A: ApertureSpec
    aperture_B: ApertureSpec | None = None
    d2: float = 100.0
    f: float = 100.0
    spectral_filter: GaussianFilter | None = None
    prism: PrismSpec | None = None  # carried for the negligibility check only

    def __post_init__(self):
        if not self.d1 > 0:
            raise DomainError("d1 must be positive")
        if not self.f > 0:
            raise DomainError("focal length must be positive")
        if not self.d2 > 0:
            raise DomainError("d2 must be positive")
        if self.aperture_B is None:
            object.__setattr__(self, "aperture_B", self.aperture_A)

    def aperture(self, arm: str) -> ApertureSpec:
        if arm == "A":
            return self.aperture_A
        if arm == "B":
            return self.aperture_B
        raise ValueError("arm must be 'A' or 'B'")

    def fresnel_number(self, wavelength_nm: float) -> float:
        """b^4 / (4 lam d1^3) for the larger aperture; small means the
        Fresnel approximation holds."""
        b = max(nominal_extent(self.aperture_A.shape), nominal_extent(self.aperture_B.shape))
        return b**4 / (4 * wavelength_nm * 1e-6 * self.d1**3)

    def fresnel_ok(self, wavelength_nm: float) -> bool:
        return self.fresnel_number(wavelength_nm) < 1e-2


def nominal_extent(shape: Shape) -> float:
    if isinstance(shape, Circular):
        return shape.diameter
    if isinstance(shape, Slit):
        return max(shape.a, shape.b)
    if isinstance(shape, Annular):
        return shape.outer
    ny, nx = shape.transmission.shape
    return max(nx, ny) * shape.pitch


def _split(aperture):
    if isinstance(aperture, ApertureSpec):
        return aperture.shape, np.asarray(aperture.shift)
    return aperture, np.zeros(2)


def _rotate(q, angle):
    # components of q in the frame of a body rotated by +angle
    c, s = np.cos(angle), np.sin(angle)
    return c * q[..., 0] + s * q[..., 1], -s * q[..., 0] + c * q[..., 1]


def _mask_transform(mask: Mask, u, weights, chunk=4096):
    x, y = mask.coordinates()
    u = np.asarray(u, dtype=float)
    flat = u.reshape(-1, 2)
    out = np.empty(len(flat), dtype=complex)
    for i in range(0, len(flat), chunk):
        blk = flat[i:i + chunk]
        ex = np.exp(-1j * np.outer(blk[:, 0], x))
        ey = np.exp(-1j * np.outer(blk[:, 1], y))
        out[i:i + chunk] = np.einsum("ni,ij,nj->n", ey, weights, ex, optimize=True)
    return out.reshape(u.shape[:-1])


def ptilde(aperture, q):
    """Normalized transform of |p|^2, equal to 1 at q = 0.

    ``aperture`` is an ``ApertureSpec`` (its shift contributes the phase
    exp(-i q.s)) or a bare shape. ``q`` has shape (..., 2), in 1/mm.
    """
    shape, shift = _split(aperture)
    q = np.asarray(q, dtype=float)
    if q.shape[-1] != 2:
        raise ValueError("q must have a trailing axis of length 2")
    qn = np.hypot(q[..., 0], q[..., 1])
    if isinstance(shape, Circular):
        val = _jinc(shape.diameter * qn).astype(complex)
    elif isinstance(shape, Slit):
        q1, q2 = _rotate(q, shape.rotation)
        val = (sinc(shape.b * q1) * sinc(shape.a * q2)).astype(complex)
    elif isinstance(shape, Annular):
        a, b = shape.inner, shape.outer
        small = b * qn < 1e-8
        safe = np.where(small, 1.0, qn)
        series = 1.0 - (a * a + a * b + b * b) * qn * qn / 8
        val = np.where(small, series, 2 / (b - a) * (j1(b * safe) - j1(a * safe)) / safe).astype(complex)
    elif isinstance(shape, Mask):
        w = np.abs(shape.transmission) ** 2
        val = _mask_transform(shape, q, w) / w.sum()
    else:
        raise TypeError(f"unsupported aperture {type(shape).__name__}")
    if np.any(shift):
        val = val * np.exp(-1j * (q[..., 0] * shift[0] + q[..., 1] * shift[1]))
    return val


def shift_modulation(q2, s_A, s_B):
    """cos(q2 * e2.(s_A - s_B)): the interference modulation of two shifted
    apertures probed at +-q2 e2."""
    return np.cos(np.asarray(q2) * (s_A[1] - s_B[1]))


# --- physical geometry -----------------------------------------------------

def _signed_distance(shape: Shape, x, y):
    # negative inside; exact for discs and rings, edge-wise for rectangles
    if isinstance(shape, Circular):
        return np.hypot(x, y) - shape.diameter
    if isinstance(shape, Slit):
        c, s = np.cos(shape.rotation), np.sin(shape.rotation)
        xr, yr = c * x + s * y, -s * x + c * y
        return np.maximum(np.abs(xr) - shape.b, np.abs(yr) - shape.a)
    if isinstance(shape, Annular):
        r = np.hypot(x, y)
        return np.maximum(r - shape.outer, shape.inner - r)
    raise TypeError(type(shape).__name__)


def _half_size(shape: Shape) -> float:
    if isinstance(shape, Circular):
        return shape.diameter
    if isinstance(shape, Annular):
        return shape.outer
    c, s = abs(np.cos(shape.rotation)), abs(np.sin(shape.rotation))
    return max(c * shape.b + s * shape.a, s * shape.b + c * shape.a)


def rasterize(shape: Shape, n: int = 256, margin: float = 1.02) -> Mask:
    """Sample the transmission whose exact transform matches the closed form.

    Edge pixels get a covered fraction that ramps linearly across one pitch
    of signed distance, which keeps straight edges at their sub-pixel
    position. The stored amplitude is the square root of that fraction so
    that |p|^2 integrates to the covered area.
    """
    if isinstance(shape, Mask):
        return shape
    half = _half_size(shape) * margin
    pitch = 2 * half / n
    x = (np.arange(n) - (n - 1) / 2) * pitch
    sd = _signed_distance(shape, x[None, :], x[::-1, None])
    return Mask(np.sqrt(np.clip(0.5 - sd / pitch, 0.0, 1.0)), pitch)


def e2_half_extent(shape: Shape) -> float:
    """Half-extent along e2 of the physical transmission."""
    if isinstance(shape, Circular):
        return shape.diameter
    if isinstance(shape, Annular):
        return shape.outer
    if isinstance(shape, Slit):
        return abs(np.sin(shape.rotation)) * shape.b + abs(np.cos(shape.rotation)) * shape.a
    return shape.transmission.shape[0] * shape.pitch / 2


def projected_profile(shape: Shape, y, n: int = 512):
    """Integral of |p|^2 along e1 as a function of the e2 coordinate ``y``."""
    y = np.asarray(y, dtype=float)
    if isinstance(shape, Circular):
        r = shape.diameter
        return 2 * np.sqrt(np.clip(r * r - y * y, 0, None))
    if isinstance(shape, Slit) and shape.rotation % np.pi == 0:
        return np.where(np.abs(y) <= shape.a, 2 * shape.b, 0.0)
    if isinstance(shape, Annular):
        a, b = shape.inner, shape.outer
        return 2 * (np.sqrt(np.clip(b * b - y * y, 0, None)) - np.sqrt(np.clip(a * a - y * y, 0, None)))
    mask = rasterize(shape, n=n)
    _, ym = mask.coordinates()
    rows = (np.abs(mask.transmission) ** 2).sum(axis=1) * mask.pitch
    # coordinates run top to bottom; interp needs ascending
    return np.interp(y, ym[::-1], rows[::-1], left=0.0, right=0.0)


def amplitude_transform(aperture, u):
    """Unnormalized transform of the amplitude transmission p, in mm^2."""
    shape, shift = _split(aperture)
    u = np.asarray(u, dtype=float)
    un = np.hypot(u[..., 0], u[..., 1])
    if isinstance(shape, Circular):
        r = shape.diameter
        val = np.pi * r * r * _jinc(r * un)
    elif isinstance(shape, Slit):
        u1, u2 = _rotate(u, shape.rotation)
        val = 4 * shape.a * shape.b * sinc(shape.b * u1) * sinc(shape.a * u2)
    elif isinstance(shape, Annular):
        a, b = shape.inner, shape.outer
        val = np.pi * (b * b * _jinc(b * un) - a * a * _jinc(a * un))
    else:
        val = _mask_transform(shape, u, shape.transmission) * shape.pitch**2
    val = np.asarray(val, dtype=complex)
    if np.any(shift):
        val = val * np.exp(-1j * (u[..., 0] * shift[0] + u[..., 1] * shift[1]))
    return val


def _common_phase(x_det, omega, system):
    xx = np.sum(np.asarray(x_det, dtype=float) ** 2, axis=-1)
    ph = omega * (system.d1 + system.d2 + system.f) / C
    ph = ph - omega * xx * (system.d2 / system.f - 1) / (2 * C * system.f)
    out = np.exp(1j * ph)
    if system.spectral_filter is not None:
        out = out * system.spectral_filter.amplitude(omega)
    return out


def transfer_function(x_det, q, omega, system: OpticalSystemSpec, arm: str = "A"):
    """Response at detector point ``x_det`` to a unit plane wave with
    transverse wavevector ``q`` leaving the crystal at frequency ``omega``.

    Normalized so that it is exactly the transverse Fourier transform of
    :func:`impulse_response` over crystal coordinates.
    """
    x_det = np.asarray(x_det, dtype=float)
    q = np.asarray(q, dtype=float)
    qq = np.sum(q * q, axis=-1)
    u = omega * x_det / (C * system.f) - q
    return (_common_phase(x_det, omega, system)
            * (2j * np.pi * C * system.d1 / omega)
            * np.exp(-1j * C * system.d1 * qq / (2 * omega))
            * amplitude_transform(system.aperture(arm), u))


def impulse_response(x_det, x_crystal, omega, system: OpticalSystemSpec, arm: str = "A",
                     n: int = 256):
    """Field at ``x_det`` from a point source at ``x_crystal`` on the crystal
    face, by direct summation over the sampled aperture."""
    ap = system.aperture(arm)
    mask = rasterize(ap.shape, n=n)
    xm, ym = mask.coordinates()
    xm = xm + ap.shift[0]
    ym = ym + ap.shift[1]
    p = mask.transmission
    a = omega / (2 * C * system.d1)
    chirp = np.exp(1j * a * (ym[:, None] ** 2 + xm[None, :] ** 2)) * p * mask.pitch**2

    x_det = np.asarray(x_det, dtype=float)
    x_c = np.asarray(x_crystal, dtype=float)
    x_det, x_c = np.broadcast_arrays(x_det, x_c)
    k = (omega / C) * (x_c / system.d1 + x_det / system.f)
    flat = k.reshape(-1, 2)
    ex = np.exp(-1j * np.outer(flat[:, 0], xm))
    ey = np.exp(-1j * np.outer(flat[:, 1], ym))
    integral = np.einsum("ni,ij,nj->n", ey, chirp, ex, optimize=True).reshape(k.shape[:-1])
    return (_common_phase(x_det, omega, system)
            * np.exp(1j * a * np.sum(x_c * x_c, axis=-1))
            * integral)


def load_mask(path: str | Path, pitch: float) -> Mask:
    """Read a mask from a whitespace- or comma-separated text grid."""
    text = Path(path).read_text()
    rows = [r.replace(",", " ").split() for r in text.splitlines() if r.strip() and not r.lstrip().startswith("#")]
    try:
        grid = np.array([[float(v) for v in r] for r in rows])
    except ValueError as exc:
        raise DomainError(f"{path}: non-numeric mask entry") from exc
    if grid.ndim != 2:
        raise DomainError(f"{path}: mask rows have unequal length")
    return Mask(grid, pitch)
