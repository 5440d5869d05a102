"""Command-line interface.

Subcommands: ``pattern`` (analytic stationary emission map), ``simulate``
(quantum-jump Monte Carlo click stream + histogram), ``classical``
(two-dipole intensity map), ``visibility`` (fringe report for a map CSV),
``selftest`` (invariant suites).  Map-producing commands write CSV + PGM +
metadata plus a rendered PNG next to them.

Exit codes: 0 success, 1 self-test failure, 2 configuration error,
3 I/O error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

from . import figures, mapio, screen, selftest, steady, trajectory
from .classical import classical_visibility
from .config import config_to_dict
from .runconfig import ConfigError, load_runconfig
from .screen import CutSpec, NoFringesError


def _write_metadata(path, payload: dict) -> None:
    path.write_text(json.dumps(payload, sort_keys=True, indent=2) + "\n")


def _announce(*paths) -> None:
    for p in paths:
        print(f"wrote {p}")


def cmd_pattern(args) -> int:
    rc = load_runconfig(args.config, seed_override=args.seed, out_override=args.out)
    base = rc.outputs.basename or "pattern"
    rc.outputs.directory.mkdir(parents=True, exist_ok=True)
    amap = screen.steady_map(rc.experiment, rc.grid)
    csvp = rc.outputs.resolve("csv", f"{base}.csv")
    pgmp = rc.outputs.resolve("pgm", f"{base}.pgm")
    metap = rc.outputs.resolve("metadata", f"{base}.meta.json")
    pngp = rc.outputs.resolve("png", f"{base}.png")
    mapio.write_map_csv(amap, csvp)
    mapio.write_map_pgm(amap, pgmp)
    _write_metadata(metap, {
        "command": "pattern",
        "experiment": config_to_dict(rc.experiment),
        "grid": {"n_theta": rc.grid.n_theta, "n_phi": rc.grid.n_phi},
        "total_rate": steady.steady_total_rate(rc.experiment),
    })
    figures.render_map_png(amap, pngp, title="stationary emission density")
    _announce(csvp, pgmp, metap, pngp)
    return 0


def cmd_simulate(args) -> int:
    rc = load_runconfig(args.config, seed_override=args.seed, out_override=args.out)
    duration = rc.simulation.require_duration()
    base = rc.outputs.basename or "simulate"
    rc.outputs.directory.mkdir(parents=True, exist_ok=True)
    stream = trajectory.run_trajectory(rc.experiment, duration,
                                       dt=rc.simulation.dt, seed=rc.simulation.seed)
    hist = screen.accumulate_clicks(stream, rc.grid, burn_in=rc.simulation.burn_in)
    clicksp = rc.outputs.resolve("clicks_csv", f"{base}_clicks.csv")
    metap = rc.outputs.resolve("metadata", f"{base}.meta.json")
    csvp = rc.outputs.resolve("csv", f"{base}_hist.csv")
    pgmp = rc.outputs.resolve("pgm", f"{base}_hist.pgm")
    pngp = rc.outputs.resolve("png", f"{base}_hist.png")
    mapio.write_clicks_csv(stream, clicksp, meta_path=metap)
    mapio.write_map_csv(hist, csvp)
    mapio.write_map_pgm(hist, pgmp)
    figures.render_map_png(hist, pngp, title="detected clicks per solid angle")
    print(f"{len(stream)} clicks in t = {duration:g} "
          f"(rate {stream.click_rate:.6g})")
    _announce(clicksp, metap, csvp, pgmp, pngp)
    return 0


def cmd_classical(args) -> int:
    rc = load_runconfig(args.config, seed_override=args.seed, out_override=args.out)
    base = rc.outputs.basename or "classical"
    rc.outputs.directory.mkdir(parents=True, exist_ok=True)
    cmap = screen.classical_map(rc.classical, rc.grid)
    csvp = rc.outputs.resolve("csv", f"{base}.csv")
    pgmp = rc.outputs.resolve("pgm", f"{base}.pgm")
    metap = rc.outputs.resolve("metadata", f"{base}.meta.json")
    pngp = rc.outputs.resolve("png", f"{base}.png")
    mapio.write_map_csv(cmap, csvp)
    mapio.write_map_pgm(cmap, pgmp)
    cc = rc.classical
    _write_metadata(metap, {
        "command": "classical",
        "source": {"r1": list(cc.r1), "r2": list(cc.r2), "d_hat": list(cc.d_hat),
                   "e1": [cc.e1.real, cc.e1.imag], "e2": [cc.e2.real, cc.e2.imag],
                   "prefactor": cc.prefactor},
        "grid": {"n_theta": rc.grid.n_theta, "n_phi": rc.grid.n_phi},
        "visibility": classical_visibility(cc.e1, cc.e2),
    })
    figures.render_map_png(cmap, pngp, title="classical two-dipole intensity")
    _announce(csvp, pgmp, metap, pngp)
    return 0


def cmd_visibility(args) -> int:
    try:
        amap = mapio.read_map_csv(args.map)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    if args.cut_index is not None and args.cut_value is not None:
        raise ConfigError("give only one of --cut-value / --cut-index")
    if args.cut_index is not None:
        cut = CutSpec(fixed=args.cut_fixed, index=args.cut_index)
    else:
        value = args.cut_value if args.cut_value is not None else math.pi / 2.0
        cut = CutSpec(fixed=args.cut_fixed, value=value)
    rep = screen.visibility_along_cut(amap, cut, smooth=args.smooth)
    spacing_mean = spacing_std = count = None
    if rep.has_fringes:
        try:
            spacing_mean, spacing_std = screen.fringe_spacing(amap, cut,
                                                              smooth=args.smooth)
            count = screen.fringe_count(amap, cut, smooth=args.smooth)
        except NoFringesError:
            pass
    report = {
        "map": str(args.map),
        "cut": {"fixed": cut.fixed, "value": cut.value, "index": cut.index},
        "has_fringes": rep.has_fringes,
        "visibility": rep.visibility,
        "spacing_mean": spacing_mean,
        "spacing_std": spacing_std,
        "fringe_count": count,
        "n_maxima": rep.n_maxima,
        "n_minima": rep.n_minima,
    }
    print(json.dumps(report, sort_keys=True))
    if rep.has_fringes:
        line = (f"fringes detected: V = {rep.visibility:.6f} "
                f"({rep.n_maxima} maxima, {rep.n_minima} minima")
        if count is not None:
            line += f"; spacing {spacing_mean:.6g} +/- {spacing_std:.2g}, " \
                    f"{count} fringes across the cut"
        print(line + ")")
    else:
        print("no fringes detected")
    if args.png:
        figures.render_cut_png(amap, cut, args.png, report=rep)
        _announce(args.png)
    return 0


def cmd_selftest(args) -> int:
    try:
        results = selftest.run_selftests(args.suites or None)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    for r in results:
        tag = "PASS" if r.passed else "FAIL"
        extra = "" if r.passed else f": {r.detail}"
        print(f"[selftest] {tag} {r.name}{extra}")
    n_ok = sum(r.passed for r in results)
    print(f"{n_ok}/{len(results)} suites passed")
    return 0 if n_ok == len(results) else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="atomslit",
        description="Angular emission of two driven atoms: analytic patterns, "
                    "Monte Carlo click streams, classical comparison and "
                    "fringe analysis.")
    sub = p.add_subparsers(dest="command", required=True)

    def with_config(name: str, help_text: str):
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("--config", required=True, metavar="PATH",
                        help="JSON run configuration")
        sp.add_argument("--seed", type=int, default=None,
                        help="override simulation.seed")
        sp.add_argument("--out", default=None, metavar="DIR",
                        help="override outputs.directory")
        return sp

    with_config("pattern",
                "analytic stationary emission map -> CSV + PGM + PNG"
                ).set_defaults(func=cmd_pattern)
    with_config("simulate",
                "Monte Carlo click stream + histogram -> CSV + PGM + PNG"
                ).set_defaults(func=cmd_simulate)
    with_config("classical",
                "classical two-dipole intensity map -> CSV + PGM + PNG"
                ).set_defaults(func=cmd_classical)

    vis = sub.add_parser("visibility", help="fringe report for a map CSV")
    vis.add_argument("--map", required=True, metavar="PATH",
                     help="angular-map CSV to analyze")
    vis.add_argument("--cut-fixed", choices=("theta", "phi"), default="phi",
                     help="coordinate held fixed (default: phi, i.e. a theta scan)")
    vis.add_argument("--cut-value", type=float, default=None,
                     help="fixed-coordinate value in radians (default: pi/2)")
    vis.add_argument("--cut-index", type=int, default=None,
                     help="fixed-coordinate grid index (alternative to value)")
    vis.add_argument("--smooth", type=int, default=None,
                     help="odd moving-average window (default: 3 for "
                          "histograms, off otherwise)")
    vis.add_argument("--png", default=None, metavar="PATH",
                     help="also render the cut profile to a PNG")
    vis.set_defaults(func=cmd_visibility)

    st = sub.add_parser("selftest", help="run the package invariant suites")
    st.add_argument("suites", nargs="*",
                    help="suite names to run (default: all)")
    st.set_defaults(func=cmd_selftest)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
