"""Dispersion models read from the bundled Sellmeier table.

The table is a versioned ``key = value`` text file. Each material lists a
functional form, one coefficient line per index branch, and the wavelength
window over which the fit is trusted.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path

import numpy as np

from .errors import DomainError

SUPPORTED_FORMAT = 1
_NCOEF = {"kato": 4, "sellmeier3": 6}


@dataclass(frozen=True)
class IndexBranch:
    """One refractive-index curve n(lam), lam in micrometres."""

    form: str
    coeffs: tuple[float, ...]

    def n2(self, lam):
        lam2 = np.asarray(lam, dtype=float) ** 2
        c = self.coeffs
        if self.form == "kato":
            a, b, cc, e = c
            return a + b / (lam2 - cc) - e * lam2
        out = 1.0
        for bi, ci in zip(c[0::2], c[1::2]):
            out = out + bi * lam2 / (lam2 - ci * ci)
        return out

    def n(self, lam):
        return np.sqrt(self.n2(lam))

    def dn_dlam(self, lam):
        lam = np.asarray(lam, dtype=float)
        lam2 = lam * lam
        c = self.coeffs
        if self.form == "kato":
            _, b, cc, e = c
            dn2 = -2 * b * lam / (lam2 - cc) ** 2 - 2 * e * lam
        else:
            dn2 = 0.0
            for bi, ci in zip(c[0::2], c[1::2]):
                dn2 = dn2 - 2 * bi * lam * ci * ci / (lam2 - ci * ci) ** 2
        return dn2 / (2 * self.n(lam))


@dataclass(frozen=True)
class Material:
    name: str
    source: str
    branches: dict
    window_um: tuple[float, float]

    @property
    def uniaxial(self) -> bool:
        return "e" in self.branches

    def branch(self, key: str) -> IndexBranch:
        try:
            return self.branches[key]
        except KeyError:
            raise DomainError(f"{self.name} has no '{key}' index branch") from None

    def check_window(self, lam_um, strict: bool = False) -> bool:
        lam = np.atleast_1d(lam_um)
        lo, hi = self.window_um
        ok = bool(np.all((lam >= lo) & (lam <= hi)))
        if not ok:
            msg = (f"wavelength {np.min(lam):.4g}-{np.max(lam):.4g} um outside the "
                   f"{self.name} fit window {lo}-{hi} um")
            if strict:
                raise DomainError(msg)
            warnings.warn(msg, stacklevel=3)
        return ok


def parse_table(text: str) -> dict[str, Material]:
    """Parse the Sellmeier table format into ``Material`` records."""
    raw: dict[str, dict[str, str]] = {}
    version = None
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"sellmeier table line {lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        if key == "format_version":
            version = int(value)
            continue
        if "." not in key:
            raise ValueError(f"sellmeier table line {lineno}: key '{key}' lacks a material prefix")
        mat, field = key.split(".", 1)
        raw.setdefault(mat, {})[field] = value
    if version != SUPPORTED_FORMAT:
        raise ValueError(f"unsupported sellmeier table version {version}")

    out = {}
    for name, fields in raw.items():
        form = fields.get("form")
        if form not in _NCOEF:
            raise ValueError(f"{name}: unknown form {form!r}")
        branches = {}
        for key in ("o", "e", "n"):
            if key in fields:
                coeffs = tuple(float(v) for v in fields[key].split())
                if len(coeffs) != _NCOEF[form]:
                    raise ValueError(f"{name}.{key}: expected {_NCOEF[form]} coefficients")
                branches[key] = IndexBranch(form, coeffs)
        lo, hi = (float(v) for v in fields["window_um"].split())
        out[name] = Material(name, fields.get("source", ""), branches, (lo, hi))
    return out


@lru_cache(maxsize=None)
def _default_table() -> dict[str, Material]:
    text = resources.files("spdcvis").joinpath("data/sellmeier.txt").read_text()
    return parse_table(text)


def load_table(path: str | Path | None = None) -> dict[str, Material]:
    if path is None:
        return _default_table()
    return parse_table(Path(path).read_text())


def get_material(name: str) -> Material:
    table = _default_table()
    if name not in table:
        raise DomainError(f"unknown material '{name}'; known: {', '.join(sorted(table))}")
    return table[name]
