"""Run scenarios and write their artifacts."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, replace
from pathlib import Path

import numpy as np

from . import presets
from .errors import DomainError
from .interference import (SPECTRAL_CUTOFF, CwPlane, FiniteBeam, default_tau_grid, pattern, params_for,
                           visibility_vs_thickness)
from .optics import Mask, nominal_extent
from .oracle import oracle_table
from .output import write_csv, write_json, write_svg
from .prism import beta_dispersion, prism_negligible
from .scenario import Scenario
from .units import bandwidth_to_omega

ORACLE_TOLERANCE = 1e-6


def _describe_aperture(ap):
    sh = ap.shape
    if isinstance(sh, Mask):
        d = {"shape": "Mask", "rows": sh.transmission.shape[0], "cols": sh.transmission.shape[1],
             "pitch_mm": sh.pitch}
    else:
        d = {"shape": type(sh).__name__, **asdict(sh)}
    d["shift_mm"] = list(ap.shift)
    return d


def describe(sc: Scenario) -> dict:
    s = sc.system
    return {
        "name": sc.name,
        "description": sc.description,
        "crystal": asdict(sc.crystal),
        "pump": {"type": type(sc.pump).__name__, **asdict(sc.pump)},
        "system": {"d1_mm": s.d1, "d2_mm": s.d2, "f_mm": s.f,
                   "aperture_A": _describe_aperture(s.aperture_A),
                   "aperture_B": _describe_aperture(s.aperture_B)},
        "include_sinc": sc.include_sinc,
    }


def resolved(sc: Scenario, tau_samples: int | None = None) -> dict:
    """Every derived parameter and default that fed the run."""
    params = params_for(sc.crystal, sc.pump)
    out = {**asdict(params), "D_fs_per_mm": params.D, "D_plus_fs_per_mm": params.D_plus, "LD_fs": params.LD,
           "theta_oa_deg": float(np.degrees(params.theta_oa)), "include_sinc": sc.include_sinc,
           "spectral_cutoff_sigmas": SPECTRAL_CUTOFF, "fresnel_limit": 1e-2, "planewave_threshold": 0.1}
    if sc.thickness_sweep is None:
        n = tau_samples or sc.tau_samples
        tau = default_tau_grid(params, n) if sc.tau_range is None else np.linspace(*sc.tau_range, n)
        out.update(tau_start_fs=float(tau[0]), tau_stop_fs=float(tau[-1]), tau_samples=n)
    return out


def prism_summary(sc: Scenario) -> dict | None:
    """Angular-dispersion verdict for a system that carries a prism."""
    pr = sc.system.prism
    if pr is None:
        return None
    b = max(nominal_extent(sc.system.aperture_A.shape), nominal_extent(sc.system.aperture_B.shape))
    dw = bandwidth_to_omega(sc.prism_bandwidth_nm, pr.center_wavelength)
    v = prism_negligible(b, dw, pr)
    return {"beta_s": beta_dispersion(pr), "apex_deg": float(np.degrees(pr.apex_angle)),
            "center_nm": pr.center_wavelength, "bandwidth_nm": sc.prism_bandwidth_nm,
            "aperture_mm": b, "ratio": v.ratio, "negligible": v.negligible}


def run_scenario(sc: Scenario, out_dir: str | Path, tau_samples: int | None = None,
                 svg: bool = False, drop_sinc: bool = False) -> dict:
    """Evaluate one scenario; write <name>.csv, <name>.json and optionally
    <name>.svg. Returns the summary stored in the JSON file."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    if drop_sinc:
        sc = replace(sc, include_sinc=False)

    def path(ext):
        # names such as "fig6-L0.5mm" contain dots, so no with_suffix
        return out_dir / f"{sc.name}{ext}"
    info = describe(sc)
    info["resolved"] = resolved(sc, tau_samples)

    if sc.thickness_sweep is not None:
        L = sc.thickness_sweep
        v = visibility_vs_thickness(L, sc.system, sc.pump, sc.crystal.material, sc.include_sinc)
        write_csv(path(".csv"), ["L_mm", "V"], [L, v])
        summary = {"kind": "thickness_sweep", "samples": len(L),
                   "V_first": float(v[0]), "V_last": float(v[-1]),
                   "monotone_decreasing": bool(np.all(np.diff(v) <= 1e-12))}
        if svg:
            write_svg(path(".svg"), L, v, "L (mm)", "V(LD/2)", sc.name)
    else:
        n = tau_samples or sc.tau_samples
        tau = None if sc.tau_range is None else np.linspace(*sc.tau_range, n)
        pg = pattern(sc.system, sc.crystal, sc.pump, tau, sc.include_sinc, tau_samples=n)
        write_csv(path(".csv"), ["tau_fs", "V", "R_over_R0"], [pg.tau, pg.V, pg.R_over_R0])
        summary = {"kind": "pattern", "samples": len(pg.tau), **pg.metadata}
        summary["tau_at_min_R_fs"] = float(pg.tau[np.argmin(pg.R_over_R0)])
        if svg:
            write_svg(path(".svg"), pg.tau, pg.R_over_R0, "tau (fs)", "R / R0", sc.name)
    ps = prism_summary(sc)
    if ps is not None:
        summary["prism"] = ps
    summary["csv"] = path(".csv").name
    write_json(path(".json"), {"scenario": info, "summary": summary})
    return summary


def run_presets(ids, out_dir: str | Path, tau_samples: int | None = None, svg: bool = False,
                drop_sinc: bool = False, jobs: int = 4) -> dict:
    """Run presets concurrently; each writes its own files, and the roll-up
    ``suite.json`` is written after all have finished."""
    names = presets.expand(ids)
    Path(out_dir).mkdir(parents=True, exist_ok=True)
    scenarios = [presets.get(n) for n in names]
    with ThreadPoolExecutor(max_workers=max(1, jobs)) as pool:
        results = list(pool.map(lambda s: run_scenario(s, out_dir, tau_samples, svg, drop_sinc), scenarios))
    rollup = dict(zip(names, results))
    write_json(Path(out_dir) / "suite.json", rollup)
    return rollup


def oracle_check(sc: Scenario, out_dir: str | Path, points: int = 21) -> dict:
    """Compare engine and oracle on an evenly spaced delay grid across the
    dip; writes <name>.oracle.json."""
    if not isinstance(sc.pump, (CwPlane, FiniteBeam)):
        raise DomainError("the oracle covers the cw plane-wave model only")
    if sc.thickness_sweep is not None:
        raise DomainError("oracle-check needs a delay scan, not a thickness sweep")
    params = params_for(sc.crystal, sc.pump)
    taus = np.linspace(0.0, params.LD, points + 2)[1:-1]
    rows = oracle_table(taus, sc.system, params)
    worst = max(r["abs_diff"] for r in rows)
    report = {"scenario": describe(sc), "rows": rows, "max_abs_diff": worst,
              "tolerance": ORACLE_TOLERANCE, "pass": worst <= ORACLE_TOLERANCE}
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    write_json(out_dir / f"{sc.name}.oracle.json", report)
    return report
