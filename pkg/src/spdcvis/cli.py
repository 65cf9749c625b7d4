"""Command-line entry point.

    spdcvis run CONFIG.yaml          evaluate one scenario file
    spdcvis preset fig4 fig8 ...     run built-in presets (ids or groups)
    spdcvis list-presets
    spdcvis oracle-check CONFIG.yaml compare engine and oracle
    spdcvis prism-table              tabulate the prism Snell mapping

Exit status: 0 on success, 2 for configuration errors, 1 for anything else.
"""

from __future__ import annotations

import argparse
import logging
import sys
import warnings

import numpy as np

from . import presets
from .errors import ConfigError, DomainError
from .output import write_csv
from .prism import PrismSpec, beta_dispersion, mapping_table
from .runner import oracle_check, run_presets, run_scenario
from .scenario import load_scenario
from .units import omega_from_wavelength

log = logging.getLogger("spdcvis")


def _common(p):
    p.add_argument("--out-dir", default="out", help="directory for CSV/JSON/SVG output (default: out)")
    p.add_argument("--tau-samples", type=int, default=None, help="number of delay samples")
    p.add_argument("--svg", action="store_true", help="also write an SVG plot per curve")
    p.add_argument("--drop-sinc", action="store_true",
                   help="omit the longitudinal sinc factor (approximate model)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="spdcvis",
                                 description="Two-photon interference visibility for type-II SPDC.")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="evaluate a scenario file")
    p.add_argument("config")
    _common(p)

    p = sub.add_parser("preset", help="run built-in presets")
    p.add_argument("ids", nargs="*", help="preset ids or group names such as fig4")
    p.add_argument("--jobs", type=int, default=4)
    _common(p)

    sub.add_parser("list-presets", help="list preset ids and groups")

    p = sub.add_parser("oracle-check", help="compare the closed form with the depth-integral oracle")
    p.add_argument("config")
    p.add_argument("--out-dir", default="out")
    p.add_argument("--points", type=int, default=21)

    p = sub.add_parser("prism-table", help="tabulate exit vs incident transverse wavevector")
    p.add_argument("--center-nm", type=float, default=702.2)
    p.add_argument("--span-nm", type=float, default=10.0, help="full wavelength span")
    p.add_argument("--q-max", type=float, default=50.0, help="largest |q| in 1/mm")
    p.add_argument("--out", default="prism_table.csv")
    return ap


def _check_samples(args):
    if getattr(args, "tau_samples", None) is not None and args.tau_samples < 2:
        raise ConfigError("must be at least 2", "--tau-samples")


def _cmd_run(args):
    sc = load_scenario(args.config)
    s = run_scenario(sc, args.out_dir, args.tau_samples, args.svg, args.drop_sinc)
    print(f"{sc.name}: wrote {args.out_dir}/{s['csv']}")


def _cmd_preset(args):
    try:
        names = presets.expand(args.ids)
    except KeyError as exc:
        raise ConfigError(f"unknown preset {exc.args[0]!r}; available: {', '.join(presets.names())}") from None
    rollup = run_presets(names, args.out_dir, args.tau_samples, args.svg, args.drop_sinc, args.jobs)
    for name, s in rollup.items():
        if s["kind"] == "pattern":
            print(f"{name}: V(LD/2)={s['visibility_at_full_compensation']:.4f} "
                  f"min V={s['min_V']:.4f} A={s['asymmetry_fs']:.3g} fs")
        else:
            print(f"{name}: V from {s['V_first']:.4f} to {s['V_last']:.4f}")
    print(f"wrote {len(rollup)} curves and suite.json to {args.out_dir}")


def _cmd_list(args):
    for group, members in presets.GROUPS.items():
        print(f"{group}:")
        for n in members:
            print(f"  {n:34s} {presets.describe(n)}")


def _cmd_oracle(args):
    sc = load_scenario(args.config)
    rep = oracle_check(sc, args.out_dir, args.points)
    status = "PASS" if rep["pass"] else "FAIL"
    print(f"{sc.name}: max |closed form - oracle| = {rep['max_abs_diff']:.3e} "
          f"(tolerance {rep['tolerance']:.0e}) {status}")
    return 0 if rep["pass"] else 1


def _cmd_prism(args):
    prism = PrismSpec(center_wavelength=args.center_nm)
    half = args.span_nm / 2
    omegas = omega_from_wavelength(np.array([args.center_nm + half, args.center_nm, args.center_nm - half]))
    qs = np.linspace(-args.q_max, args.q_max, 11)
    rows = np.array(mapping_table(qs, omegas, prism))
    write_csv(args.out, ["omega_rad_per_fs", "q_in_per_mm", "q_out_per_mm"], rows.T)
    print(f"beta = {beta_dispersion(prism):.4e} s; wrote {args.out}")


_COMMANDS = {"run": _cmd_run, "preset": _cmd_preset, "list-presets": _cmd_list,
             "oracle-check": _cmd_oracle, "prism-table": _cmd_prism}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    logging.captureWarnings(True)
    try:
        _check_samples(args)
        with warnings.catch_warnings():
            warnings.simplefilter("default")
            rc = _COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (DomainError, RuntimeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return rc or 0


if __name__ == "__main__":
    sys.exit(main())
