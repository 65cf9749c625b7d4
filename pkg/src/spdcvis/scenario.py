"""Scenario files: YAML in, validated model objects out.

Every field error is reported with its dotted path and the line it sits on.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np
import yaml

from .crystal import CrystalSpec
from .errors import ConfigError, DomainError
from .interference import CwPlane, FiniteBeam, PulsedPlane, Pump
from .prism import PrismSpec
from .optics import Annular, ApertureSpec, Circular, OpticalSystemSpec, Slit, load_mask


@dataclass
class Scenario:
    name: str
    crystal: CrystalSpec
    pump: Pump
    system: OpticalSystemSpec
    tau_samples: int = 512
    tau_range: tuple[float, float] | None = None  # fs; default spans the dip
    thickness_sweep: np.ndarray | None = None  # mm; replaces the delay scan
    include_sinc: bool = True
    description: str = ""
    prism_bandwidth_nm: float = 10.0  # down-converted bandwidth seen by the prism


# --- YAML with line numbers ------------------------------------------------

_SCALARS = yaml.constructor.SafeConstructor()

def _build(node, path, lines):
    lines[path] = node.start_mark.line + 1
    if isinstance(node, yaml.MappingNode):
        out = {}
        for knode, vnode in node.value:
            key = str(knode.value)
            sub = f"{path}.{key}" if path else key
            if key in out:
                raise ConfigError("duplicate key", sub, knode.start_mark.line + 1)
            out[key] = _build(vnode, sub, lines)
        return out
    if isinstance(node, yaml.SequenceNode):
        return [_build(v, f"{path}[{i}]", lines) for i, v in enumerate(node.value)]
    return _SCALARS.construct_object(node, deep=True)


def load_yaml(text: str):
    """Parse YAML, returning (data, {dotted path: line})."""
    try:
        node = yaml.compose(text, Loader=yaml.SafeLoader)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        raise ConfigError(f"invalid YAML: {getattr(exc, 'problem', exc)}",
                          line=mark.line + 1 if mark else None) from None
    if node is None:
        raise ConfigError("empty scenario file")
    lines: dict[str, int] = {}
    return _build(node, "", lines), lines


class _Reader:
    def __init__(self, lines, base_dir: Path | None):
        self.lines = lines
        self.base_dir = base_dir

    def line(self, path):
        while path:
            if path in self.lines:
                return self.lines[path]
            path = path.rsplit(".", 1)[0] if "." in path else ""
        return self.lines.get("")

    def fail(self, path, msg):
        raise ConfigError(msg, path, self.line(path))

    def section(self, data, key, path, required=True):
        sub = f"{path}.{key}" if path else key
        if key not in data:
            if required:
                self.fail(path or key, f"missing section '{key}'")
            return None, sub
        val = data[key]
        if not isinstance(val, dict):
            self.fail(sub, "expected a mapping")
        return val, sub

    def number(self, data, key, path, default=None, required=False, positive=False):
        sub = f"{path}.{key}"
        if key not in data or data[key] is None:
            if required:
                self.fail(path, f"missing field '{key}'")
            return default
        val = data[key]
        if isinstance(val, bool) or not isinstance(val, (int, float)):
            self.fail(sub, f"expected a number, got {val!r}")
        if positive and not val > 0:
            self.fail(sub, "must be positive")
        return float(val)

    def check_keys(self, data, allowed, path):
        for key in data:
            if key not in allowed:
                self.fail(f"{path}.{key}" if path else key,
                          f"unknown field; expected one of {', '.join(sorted(allowed))}")


def _aperture(r: _Reader, data, path) -> ApertureSpec:
    shape = data.get("shape")
    shift = data.get("shift_mm", [0.0, 0.0])
    if not (isinstance(shift, list) and len(shift) == 2 and all(isinstance(s, (int, float)) for s in shift)):
        r.fail(f"{path}.shift_mm", "expected a pair of numbers [e1, e2]")
    common = {"shape", "shift_mm"}
    try:
        if shape == "circular":
            r.check_keys(data, common | {"diameter_mm"}, path)
            sh = Circular(r.number(data, "diameter_mm", path, required=True, positive=True))
        elif shape == "slit":
            r.check_keys(data, common | {"a_mm", "b_mm", "rotation_deg"}, path)
            sh = Slit(r.number(data, "a_mm", path, required=True, positive=True),
                      r.number(data, "b_mm", path, required=True, positive=True),
                      np.radians(r.number(data, "rotation_deg", path, default=0.0)))
        elif shape == "annular":
            r.check_keys(data, common | {"inner_mm", "outer_mm"}, path)
            sh = Annular(r.number(data, "inner_mm", path, required=True),
                         r.number(data, "outer_mm", path, required=True, positive=True))
        elif shape == "mask":
            r.check_keys(data, common | {"file", "pitch_mm"}, path)
            if "file" not in data:
                r.fail(path, "missing field 'file'")
            f = Path(str(data["file"]))
            if not f.is_absolute() and r.base_dir is not None:
                f = r.base_dir / f
            if not f.exists():
                r.fail(f"{path}.file", f"mask file not found: {f}")
            sh = load_mask(f, r.number(data, "pitch_mm", path, required=True, positive=True))
        else:
            r.fail(f"{path}.shape", f"unknown aperture shape {shape!r}; expected circular, slit, annular or mask")
    except DomainError as exc:
        r.fail(path, str(exc))
    return ApertureSpec(sh, tuple(float(s) for s in shift))


def parse_scenario(data: dict, lines: dict | None = None, base_dir: Path | None = None,
                   name: str = "scenario") -> Scenario:
    r = _Reader(lines or {}, base_dir)
    if not isinstance(data, dict):
        r.fail("", "scenario must be a mapping")
    r.check_keys(data, {"name", "description", "crystal", "pump", "system", "tau", "sweep", "options"}, "")

    c, cp = r.section(data, "crystal", "")
    r.check_keys(c, {"material", "thickness_mm", "cut_angle_deg"}, cp)
    p, pp = r.section(data, "pump", "")
    r.check_keys(p, {"type", "wavelength_nm", "fwhm_fs", "diameter_mm"}, pp)
    ptype = p.get("type", "cw")
    wl = r.number(p, "wavelength_nm", pp, required=True, positive=True)
    try:
        if ptype == "cw":
            pump = CwPlane(wl)
        elif ptype == "pulsed":
            pump = PulsedPlane(wl, r.number(p, "fwhm_fs", pp, required=True, positive=True))
        elif ptype == "beam":
            pump = FiniteBeam(wl, r.number(p, "diameter_mm", pp, required=True, positive=True))
        else:
            r.fail(f"{pp}.type", f"unknown pump type {ptype!r}; expected cw, pulsed or beam")
    except DomainError as exc:
        r.fail(pp, str(exc))

    cut = r.number(c, "cut_angle_deg", cp)
    try:
        crystal = CrystalSpec(r.number(c, "thickness_mm", cp, default=1.5, positive=True), wl,
                              None if cut is None else np.radians(cut), str(c.get("material", "BBO")))
    except DomainError as exc:
        r.fail(cp, str(exc))

    s, sp = r.section(data, "system", "")
    r.check_keys(s, {"d1_mm", "d2_mm", "f_mm", "aperture", "aperture_A", "aperture_B", "prism"}, sp)
    if "aperture" in s and ("aperture_A" in s or "aperture_B" in s):
        r.fail(sp, "give either 'aperture' or 'aperture_A'/'aperture_B', not both")
    key_a = "aperture" if "aperture" in s else "aperture_A"
    ad, ap = r.section(s, key_a, sp)
    ap_a = _aperture(r, ad, ap)
    ap_b = None
    if "aperture_B" in s:
        bd, bp = r.section(s, "aperture_B", sp)
        ap_b = _aperture(r, bd, bp)
    prism, bandwidth = None, 10.0
    if "prism" in s:
        pd, pp2 = r.section(s, "prism", sp)
        r.check_keys(pd, {"apex_deg", "center_nm", "bandwidth_nm"}, pp2)
        bandwidth = r.number(pd, "bandwidth_nm", pp2, default=10.0, positive=True)
        try:
            prism = PrismSpec(np.radians(r.number(pd, "apex_deg", pp2, default=60.0, positive=True)),
                              r.number(pd, "center_nm", pp2, default=702.2, positive=True))
        except DomainError as exc:
            r.fail(pp2, str(exc))
    try:
        system = OpticalSystemSpec(
            d1=r.number(s, "d1_mm", sp, required=True, positive=True),
            aperture_A=ap_a, aperture_B=ap_b,
            d2=r.number(s, "d2_mm", sp, default=100.0, positive=True),
            f=r.number(s, "f_mm", sp, default=100.0, positive=True),
            prism=prism)
    except DomainError as exc:
        r.fail(sp, str(exc))

    sc = Scenario(str(data.get("name", name)), crystal, pump, system,
                  description=str(data.get("description", "")), prism_bandwidth_nm=bandwidth)
    if "tau" in data:
        t, tp = r.section(data, "tau", "")
        r.check_keys(t, {"samples", "start_fs", "stop_fs"}, tp)
        n = t.get("samples", 512)
        if not isinstance(n, int) or isinstance(n, bool) or n < 2:
            r.fail(f"{tp}.samples", "expected an integer >= 2")
        sc.tau_samples = n
        lo, hi = r.number(t, "start_fs", tp), r.number(t, "stop_fs", tp)
        if (lo is None) != (hi is None):
            r.fail(tp, "give both start_fs and stop_fs or neither")
        if lo is not None:
            if not hi > lo:
                r.fail(f"{tp}.stop_fs", "must exceed start_fs")
            sc.tau_range = (lo, hi)
    if "sweep" in data:
        w, wp = r.section(data, "sweep", "")
        r.check_keys(w, {"thickness_mm"}, wp)
        th, thp = r.section(w, "thickness_mm", wp)
        r.check_keys(th, {"start", "stop", "samples"}, thp)
        lo = r.number(th, "start", thp, required=True, positive=True)
        hi = r.number(th, "stop", thp, required=True, positive=True)
        n = th.get("samples", 60)
        if not isinstance(n, int) or n < 2:
            r.fail(f"{thp}.samples", "expected an integer >= 2")
        if not hi > lo:
            r.fail(f"{thp}.stop", "must exceed start")
        sc.thickness_sweep = np.linspace(lo, hi, n)
    if "options" in data:
        o, op = r.section(data, "options", "")
        r.check_keys(o, {"include_sinc"}, op)
        inc = o.get("include_sinc", True)
        if not isinstance(inc, bool):
            r.fail(f"{op}.include_sinc", "expected true or false")
        sc.include_sinc = inc
    return sc


def load_scenario(path: str | Path) -> Scenario:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from None
    data, lines = load_yaml(text)
    return parse_scenario(data, lines, path.parent, name=path.stem)
