"""File formats: angular maps as CSV and 8-bit PGM, click streams as CSV.

All writers are deterministic: fixed float formatting, LF newlines, sorted
JSON keys.  PGM images are min-max scaled to 0..255 with the scaling recorded
in a JSON sidecar so the original range can be recovered.
"""

from __future__ import annotations

import json
import re
from pathlib import Path

import numpy as np

from .config import ExperimentConfig, config_from_dict, config_to_dict
from .screen import AngularGrid, AngularMap
from .trajectory import ClickStream

_MAP_HEADER = re.compile(
    r"#\s*angular-map\s+n_theta=(\d+)\s+n_phi=(\d+)\s+kind=(\w+)\s*$")


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def write_map_csv(amap: AngularMap, path) -> None:
    """CSV with a grid-spec comment, a header row, then theta,phi,value rows
    in row-major order (theta outer, phi inner); angles are cell centers."""
    g = amap.grid
    lines = [f"# angular-map n_theta={g.n_theta} n_phi={g.n_phi} kind={amap.kind}",
             "theta,phi,value"]
    integer = amap.kind == "histogram"
    th = g.theta_centers
    ph = g.phi_centers
    for i in range(g.n_theta):
        ti = _fmt(th[i])
        row = amap.values[i]
        for j in range(g.n_phi):
            v = f"{int(row[j])}" if integer else _fmt(row[j])
            lines.append(f"{ti},{_fmt(ph[j])},{v}")
    Path(path).write_text("\n".join(lines) + "\n")


def read_map_csv(path) -> AngularMap:
    """Inverse of write_map_csv."""
    text = Path(path).read_text()
    lines = text.splitlines()
    if len(lines) < 2:
        raise ValueError(f"{path}: not an angular-map CSV (too short)")
    m = _MAP_HEADER.match(lines[0])
    if not m:
        raise ValueError(f"{path}: missing '# angular-map ...' header")
    n_theta, n_phi, kind = int(m.group(1)), int(m.group(2)), m.group(3)
    if lines[1].strip() != "theta,phi,value":
        raise ValueError(f"{path}: expected 'theta,phi,value' header row")
    data = lines[2:]
    if len(data) != n_theta * n_phi:
        raise ValueError(f"{path}: expected {n_theta * n_phi} rows, "
                         f"found {len(data)}")
    vals = np.array([float(row.rsplit(",", 1)[1]) for row in data])
    vals = vals.reshape(n_theta, n_phi)
    if kind == "histogram":
        vals = vals.astype(np.int64)
    return AngularMap(grid=AngularGrid(n_theta, n_phi), values=vals, kind=kind)


def write_map_pgm(amap: AngularMap, path) -> None:
    """8-bit binary PGM (P5), rows = theta, columns = phi, min-max scaled;
    writes the scaling and grid spec to a '<path>.json' sidecar."""
    v = amap.values.astype(float)
    vmin = float(v.min())
    vmax = float(v.max())
    if vmax > vmin:
        pix = np.rint((v - vmin) * (255.0 / (vmax - vmin))).astype(np.uint8)
    else:
        pix = np.zeros_like(v, dtype=np.uint8)
    g = amap.grid
    header = f"P5\n{g.n_phi} {g.n_theta}\n255\n".encode("ascii")
    Path(path).write_bytes(header + pix.tobytes())
    sidecar = {"columns": "phi", "kind": amap.kind, "n_phi": g.n_phi,
               "n_theta": g.n_theta, "rows": "theta", "vmax": vmax, "vmin": vmin}
    Path(str(path) + ".json").write_text(
        json.dumps(sidecar, sort_keys=True, indent=2) + "\n")


def read_map_pgm(path) -> tuple[np.ndarray, dict]:
    """Read a P5 PGM written by write_map_pgm; returns (uint8 array, sidecar)."""
    raw = Path(path).read_bytes()
    m = re.match(rb"P5\s+(\d+)\s+(\d+)\s+255\s", raw)
    if not m:
        raise ValueError(f"{path}: not an 8-bit binary PGM")
    w, h = int(m.group(1)), int(m.group(2))
    pix = np.frombuffer(raw[m.end():], dtype=np.uint8)
    if pix.size != w * h:
        raise ValueError(f"{path}: pixel payload has {pix.size} bytes, "
                         f"expected {w * h}")
    sidecar = json.loads(Path(str(path) + ".json").read_text())
    return pix.reshape(h, w), sidecar


def write_clicks_csv(stream: ClickStream, path, meta_path=None) -> None:
    """Click records as 't,theta,phi' rows plus a JSON metadata sidecar
    carrying the seed and full experiment parameters for reproducibility."""
    lines = ["t,theta,phi"]
    k = stream.directions
    theta = np.arccos(np.clip(k[:, 2], -1.0, 1.0)) if len(stream) else np.empty(0)
    phi = (np.arctan2(k[:, 1], k[:, 0]) % (2.0 * np.pi)) if len(stream) else np.empty(0)
    for t, th, ph in zip(stream.times, theta, phi):
        lines.append(f"{_fmt(t)},{_fmt(th)},{_fmt(ph)}")
    Path(path).write_text("\n".join(lines) + "\n")
    meta = {"dt": stream.dt, "duration": stream.duration,
            "experiment": config_to_dict(stream.config),
            "n_clicks": len(stream), "seed": stream.seed}
    mp = Path(meta_path) if meta_path is not None else Path(str(path) + ".json")
    mp.write_text(json.dumps(meta, sort_keys=True, indent=2) + "\n")


def read_clicks_csv(path, meta_path=None) -> ClickStream:
    """Inverse of write_clicks_csv (requires the metadata sidecar)."""
    lines = Path(path).read_text().splitlines()
    if not lines or lines[0].strip() != "t,theta,phi":
        raise ValueError(f"{path}: expected 't,theta,phi' header row")
    rows = [tuple(float(x) for x in row.split(",")) for row in lines[1:]]
    mp = Path(meta_path) if meta_path is not None else Path(str(path) + ".json")
    meta = json.loads(mp.read_text())
    cfg = config_from_dict(meta["experiment"])
    if rows:
        arr = np.array(rows)
        t, th, ph = arr[:, 0], arr[:, 1], arr[:, 2]
        st = np.sin(th)
        dirs = np.column_stack([st * np.cos(ph), st * np.sin(ph), np.cos(th)])
    else:
        t = np.empty(0)
        dirs = np.empty((0, 3))
    return ClickStream(times=t, directions=dirs, duration=float(meta["duration"]),
                       dt=float(meta["dt"]), seed=int(meta["seed"]), config=cfg)
