"""Built-in scenarios for the standard measurement series.

Each preset is a scenario mapping in the same schema as a YAML file, so it
goes through the same validation. Group names ("fig4", ...) expand to the
individual curves of a figure.
"""

from __future__ import annotations

from .scenario import Scenario, parse_scenario

UV = 351.1
VIOLET = 415.0


def _cw(L, aperture, d1=1000.0, wl=UV, **extra):
    return {"crystal": {"thickness_mm": L}, "pump": {"type": "cw", "wavelength_nm": wl},
            "system": {"d1_mm": d1, **aperture}, **extra}


def _pulsed(L, aperture, d1=1000.0, fwhm=80.0, **extra):
    return {"crystal": {"thickness_mm": L},
            "pump": {"type": "pulsed", "wavelength_nm": VIOLET, "fwhm_fs": fwhm},
            "system": {"d1_mm": d1, **aperture}, **extra}


def _beam(L, aperture, diameter, d1=750.0):
    return {"crystal": {"thickness_mm": L},
            "pump": {"type": "beam", "wavelength_nm": UV, "diameter_mm": diameter},
            "system": {"d1_mm": d1, **aperture}}


def _circ(b):
    return {"aperture": {"shape": "circular", "diameter_mm": b}}


def _slit(a, b, rotation=0.0, shift=None):
    ap = {"shape": "slit", "a_mm": a, "b_mm": b, "rotation_deg": rotation}
    if shift is None:
        return {"aperture": ap}
    return {"aperture_A": {**ap, "shift_mm": [0.0, shift]}, "aperture_B": ap}


def _sweep(lo=0.05, hi=3.0, n=60):
    return {"sweep": {"thickness_mm": {"start": lo, "stop": hi, "samples": n}}}


_DEFS: dict[str, tuple[str, dict]] = {}


def _add(name, desc, data):
    _DEFS[name] = (desc, data)


# cw, 351.1 nm, 1.5 mm BBO, single circular aperture 1 m from the crystal
_add("fig4-1d", "cw pattern, effectively no transverse filtering", _cw(1.5, _circ(0.01)))
for b in (2, 3, 5):
    _add(f"fig4-b{b}mm", f"cw pattern, {b} mm circular aperture at 1 m", _cw(1.5, _circ(b)))

# V(LD/2) against crystal thickness
_add("fig5-1d", "full-compensation visibility vs thickness, no filtering", _cw(1.5, _circ(0.01), **_sweep()))
for b in (2, 3, 5):
    _add(f"fig5-b{b}mm", f"full-compensation visibility vs thickness, {b} mm aperture",
         _cw(1.5, _circ(b), **_sweep()))

# 80 fs pulses at 415 nm, 5 mm aperture
for L in (0.5, 1.5, 3.0):
    tag = f"{L:g}"
    _add(f"fig6-L{tag}mm", f"pulsed pattern, {tag} mm crystal, 5 mm aperture", _pulsed(L, _circ(5)))
for b in (2, 3, 5):
    _add(f"fig7-b{b}mm", f"pulsed full-compensation visibility vs thickness, {b} mm aperture",
         _pulsed(1.5, _circ(b), **_sweep()))

# 1 x 7 mm slits: long axis horizontal (a = 1 mm along e2) or vertical
_add("fig8-horizontal-slit", "cw pattern, horizontal 1 x 7 mm slit", _cw(1.5, _slit(1, 7)))
_add("fig8-vertical-slit", "cw pattern, vertical 1 x 7 mm slit", _cw(1.5, _slit(7, 1)))

# vertical slit with the crystal axis turned 45 degrees: only the relative
# angle between slit and axis matters, so the slit is rotated instead
_add("fig9-minus45", "vertical slit at -45 deg, axis at +45 deg (slit across the axis)",
     _cw(1.5, _slit(7, 1, rotation=-90.0)))
_add("fig9-plus45", "vertical slit at +45 deg, axis at +45 deg (slit along the axis)",
     _cw(1.5, _slit(7, 1, rotation=0.0)))

# 750 mm geometry
for b in (2.5, 5, 7):
    tag = f"{b:g}"
    _add(f"fig11-b{tag}mm", f"cw pattern, {tag} mm aperture at 750 mm", _cw(1.5, _circ(b), d1=750.0))
    _add(f"fig12-b{tag}mm", f"pulsed pattern, {tag} mm aperture at 750 mm", _pulsed(1.5, _circ(b), d1=750.0))

# finite pump beams; patterns are plane-wave, annotated with a validity verdict
for fig, b in (("fig13", 2.5), ("fig14", 5)):
    for a in (5, 1.5, 0.2):
        tag = f"{a:g}"
        _add(f"{fig}-pump{tag}mm", f"cw pattern, {b:g} mm aperture, {tag} mm pump beam",
             _beam(1.5, _circ(b), a))

# sign inversion with slits and offset apertures at 750 mm
_add("fig15-horizontal-slit", "horizontal slits at 750 mm", _cw(1.5, _slit(1, 7), d1=750.0))
_add("fig15-vertical-slit-shift1.6mm", "vertical slits at 750 mm, offset 1.6 mm along e2",
     _cw(1.5, _slit(7, 1, shift=1.6), d1=750.0))
for s in (0, 1, 2, 3):
    _add(f"fig16-shift{s}mm", f"2/4 mm annulus in A, 7 mm circle in B, offset {s} mm",
         _cw(1.5, {"aperture_A": {"shape": "annular", "inner_mm": 2, "outer_mm": 4, "shift_mm": [0.0, float(s)]},
                   "aperture_B": {"shape": "circular", "diameter_mm": 7}}, d1=750.0))


GROUPS = {}
for _name in _DEFS:
    GROUPS.setdefault(_name.split("-", 1)[0], []).append(_name)


def names() -> list[str]:
    return list(_DEFS)


def describe(name: str) -> str:
    return _DEFS[name][0]


def expand(ids) -> list[str]:
    """Resolve preset ids and group names, keeping order and dropping repeats."""
    out = []
    for i in ids:
        if i in _DEFS:
            new = [i]
        elif i in GROUPS:
            new = GROUPS[i]
        else:
            raise KeyError(i)
        out.extend(n for n in new if n not in out)
    return out


def get(name: str) -> Scenario:
    desc, data = _DEFS[name]
    return parse_scenario({"name": name, "description": desc, **data}, name=name)
