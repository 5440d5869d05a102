"""Matplotlib rendering of maps and fringe cuts to image files.

Rendering is file-only (Agg backend) and sits beside the CSV/PGM writers:
the delimited files stay the machine interface, the PNGs are for eyes.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from .screen import AngularMap, CutSpec, FringeReport, cut_profile

_PNG_META = {"Software": "atomslit"}


def render_map_png(amap: AngularMap, path, title: str | None = None) -> None:
    """Heat map of an angular map, theta down the page and phi across.

    Histogram counts are shown per solid angle so sparse polar cells do not
    read as dark bands.
    """
    v = amap.values.astype(float)
    if amap.kind == "histogram":
        v = v / amap.grid.solid_angles
    fig, ax = plt.subplots(figsize=(7.0, 3.6), constrained_layout=True)
    im = ax.imshow(v, origin="upper", aspect="auto",
                   extent=(0.0, 2.0 * np.pi, np.pi, 0.0), cmap="inferno")
    ax.set_xlabel(r"$\varphi$ [rad]")
    ax.set_ylabel(r"$\theta$ [rad]")
    if title:
        ax.set_title(title)
    label = {"density": "emission density [A/sr]",
             "histogram": "clicks per solid angle [1/sr]",
             "intensity": "intensity [arb.]"}[amap.kind]
    fig.colorbar(im, ax=ax, label=label)
    fig.savefig(Path(path), dpi=150, metadata=_PNG_META)
    plt.close(fig)


def render_cut_png(amap: AngularMap, cut: CutSpec, path,
                   report: FringeReport | None = None,
                   title: str | None = None) -> None:
    """Profile along a cut, with the fitted fringe overlaid when available."""
    x, y, _periodic = cut_profile(amap, cut)
    xlabel = r"$\cos\theta$" if cut.fixed == "phi" else r"$\varphi$ [rad]"
    fig, ax = plt.subplots(figsize=(7.0, 3.2), constrained_layout=True)
    ax.plot(x, y, lw=0.9, label="profile")
    if report is not None and report.has_fringes and report.frequency is not None:
        mean = float(np.mean(y))
        amp = report.visibility * mean
        xs = np.linspace(x[0], x[-1], 2048)
        # phase chosen to pass through the tallest sample
        x0 = x[int(np.argmax(y))]
        ax.plot(xs, mean + amp * np.cos(report.frequency * (xs - x0)),
                lw=0.8, ls="--", label=f"fit  V={report.visibility:.4f}")
        ax.legend(loc="upper right", fontsize=8)
    ax.set_xlabel(xlabel)
    ax.set_ylabel("value")
    if title:
        ax.set_title(title)
    fig.savefig(Path(path), dpi=150, metadata=_PNG_META)
    plt.close(fig)
