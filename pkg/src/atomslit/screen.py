"""Angular grids, maps, histograms and fringe analysis.

An AngularGrid covers the full sphere with cells centered on a regular
(theta, phi) lattice; cell weights are the exact spherical-cap solid angles
so that they always sum to 4*pi.  Maps over a grid hold either an analytic
density, a classical intensity, or integer click counts, and the fringe
tools (visibility, spacing, distances) operate on one-dimensional cuts.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Literal

import numpy as np
from scipy.optimize import minimize_scalar

from .classical import ClassicalConfig, classical_intensity_many
from .config import ExperimentConfig, K0
from .steady import steady_emission_density_many

MapKind = Literal["density", "histogram", "intensity"]

#: clicks histogram fringes are called real when the fitted contrast exceeds
#: this multiple of the shot-noise scale sqrt(2/N)
_SIGNIFICANCE = 5.0


class NoFringesError(ValueError):
    """Raised when an operation needs fringes that the data does not contain."""


@dataclass(frozen=True)
class AngularGrid:
    """Regular cell-centered (theta, phi) grid over the full sphere."""
    n_theta: int = 128
    n_phi: int = 256

    def __post_init__(self):
        if self.n_theta < 2 or self.n_phi < 2:
            raise ValueError("grid needs at least 2 cells per axis")

    @cached_property
    def theta_edges(self) -> np.ndarray:
        return np.linspace(0.0, np.pi, self.n_theta + 1)

    @cached_property
    def theta_centers(self) -> np.ndarray:
        e = self.theta_edges
        return 0.5 * (e[:-1] + e[1:])

    @cached_property
    def phi_edges(self) -> np.ndarray:
        return np.linspace(0.0, 2.0 * np.pi, self.n_phi + 1)

    @cached_property
    def phi_centers(self) -> np.ndarray:
        e = self.phi_edges
        return 0.5 * (e[:-1] + e[1:])

    @cached_property
    def solid_angles(self) -> np.ndarray:
        """Exact per-cell solid angles (n_theta, n_phi); they sum to 4*pi."""
        e = self.theta_edges
        caps = np.cos(e[:-1]) - np.cos(e[1:])
        return np.outer(caps, np.full(self.n_phi, 2.0 * np.pi / self.n_phi))

    @cached_property
    def centers(self) -> np.ndarray:
        """Unit vectors at the cell centers, shape (n_theta, n_phi, 3)."""
        th = self.theta_centers[:, None]
        ph = self.phi_centers[None, :]
        st = np.sin(th) * np.ones_like(ph)
        return np.stack([st * np.cos(ph), st * np.sin(ph),
                         np.cos(th) * np.ones_like(ph)], axis=-1)

    def bin_directions(self, dirs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Cell indices (i_theta, i_phi) for an (N, 3) array of unit vectors."""
        k = np.asarray(dirs, dtype=float).reshape(-1, 3)
        theta = np.arccos(np.clip(k[:, 2], -1.0, 1.0))
        phi = np.arctan2(k[:, 1], k[:, 0]) % (2.0 * np.pi)
        it = np.minimum((theta * self.n_theta / np.pi).astype(np.intp), self.n_theta - 1)
        ip = (phi * self.n_phi / (2.0 * np.pi)).astype(np.intp) % self.n_phi
        return it, ip


@dataclass(frozen=True)
class AngularMap:
    """Values over an AngularGrid: analytic density, classical intensity, or
    integer click counts ("histogram")."""
    grid: AngularGrid
    values: np.ndarray
    kind: MapKind

    def __post_init__(self):
        v = np.asarray(self.values)
        if v.shape != (self.grid.n_theta, self.grid.n_phi):
            raise ValueError(f"values shape {v.shape} does not match grid "
                             f"({self.grid.n_theta}, {self.grid.n_phi})")
        if self.kind not in ("density", "histogram", "intensity"):
            raise ValueError(f"unknown map kind {self.kind!r}")
        object.__setattr__(self, "values", v)


def angular_map(density_fn: Callable[[np.ndarray], float], grid: AngularGrid,
                kind: MapKind = "density") -> AngularMap:
    """Evaluate a direction -> value function at every cell center.

    Values below -1e-12 abort (they indicate a broken upstream density);
    rounding-level negatives are clamped to zero.
    """
    vals = np.empty((grid.n_theta, grid.n_phi))
    centers = grid.centers
    for i in range(grid.n_theta):
        for j in range(grid.n_phi):
            vals[i, j] = density_fn(centers[i, j])
    if vals.min() < -1e-12:
        raise ValueError(f"density function returned {vals.min()!r} < -1e-12")
    return AngularMap(grid=grid, values=np.maximum(vals, 0.0), kind=kind)


def steady_map(cfg: ExperimentConfig, grid: AngularGrid) -> AngularMap:
    """Stationary emission pattern evaluated on a grid (vectorized)."""
    flat = grid.centers.reshape(-1, 3)
    vals = steady_emission_density_many(cfg, flat).reshape(grid.n_theta, grid.n_phi)
    return AngularMap(grid=grid, values=vals, kind="density")


def cell_averaged_map(density_many: Callable[[np.ndarray], np.ndarray],
                      grid: AngularGrid, kind: MapKind = "density",
                      n_sub_theta: int = 8, n_sub_phi: int = 4) -> AngularMap:
    """Map whose cell values are the mean of a density over each cell.

    This is the piecewise-constant projection that a click histogram
    estimates.  It differs from center-point evaluation whenever the grid
    undersamples the pattern: a coarse statistical grid can put several
    fringe periods inside one polar cell, where point samples alias but cell
    means simply wash the fringes out, exactly like the counts do.  Per-cell
    Gauss-Legendre quadrature in u = cos(theta) and phi; ``density_many``
    maps (N, 3) directions to N values.
    """
    xu, wu = np.polynomial.legendre.leggauss(n_sub_theta)
    xp, wp = np.polynomial.legendre.leggauss(n_sub_phi)
    ue = np.cos(grid.theta_edges)            # decreasing with theta
    umid = 0.5 * (ue[1:] + ue[:-1])
    uhalf = 0.5 * (ue[:-1] - ue[1:])
    us = umid[:, None] + uhalf[:, None] * xu[None, :]          # (nt, su)
    pe = grid.phi_edges
    pmid = 0.5 * (pe[:-1] + pe[1:])
    phalf = 0.5 * (pe[1:] - pe[:-1])
    ps = pmid[:, None] + phalf[:, None] * xp[None, :]          # (np, sp)

    st = np.sqrt(np.maximum(1.0 - us * us, 0.0))               # (nt, su)
    cp, sp_ = np.cos(ps), np.sin(ps)                           # (np, sp)
    kx = st[:, :, None, None] * cp[None, None, :, :]
    ky = st[:, :, None, None] * sp_[None, None, :, :]
    kz = np.broadcast_to(us[:, :, None, None], kx.shape)
    pts = np.stack([kx, ky, kz], axis=-1).reshape(-1, 3)
    dens = np.asarray(density_many(pts)).reshape(grid.n_theta, n_sub_theta,
                                                 grid.n_phi, n_sub_phi)
    vals = np.einsum("iakb,a,b->ik", dens, wu, wp) / 4.0
    return AngularMap(grid=grid, values=vals, kind=kind)


def steady_map_cell_mean(cfg: ExperimentConfig, grid: AngularGrid,
                         n_sub_theta: int = 8, n_sub_phi: int = 4) -> AngularMap:
    """Cell-averaged stationary pattern, the analytic reference a click
    histogram on the same grid converges to."""
    return cell_averaged_map(lambda k: steady_emission_density_many(cfg, k),
                             grid, "density", n_sub_theta, n_sub_phi)


def classical_map(ccfg: ClassicalConfig, grid: AngularGrid) -> AngularMap:
    """Classical two-dipole intensity pattern on a grid (vectorized)."""
    flat = grid.centers.reshape(-1, 3)
    vals = classical_intensity_many(ccfg, flat).reshape(grid.n_theta, grid.n_phi)
    return AngularMap(grid=grid, values=vals, kind="intensity")


def accumulate_clicks(stream, grid: AngularGrid, burn_in: float = 0.0) -> AngularMap:
    """Histogram of click directions, discarding clicks with t < burn_in."""
    vals = np.zeros((grid.n_theta, grid.n_phi), dtype=np.int64)
    if len(stream) > 0:
        keep = stream.times >= burn_in
        if keep.any():
            it, ip = grid.bin_directions(stream.directions[keep])
            np.add.at(vals, (it, ip), 1)
    return AngularMap(grid=grid, values=vals, kind="histogram")


# ---------------------------------------------------------------------------
# cuts and fringe analysis

@dataclass(frozen=True)
class CutSpec:
    """One-dimensional cut through a map.

    fixed="phi" holds the azimuth and scans theta (positions reported in
    u = cos(theta), the natural fringe coordinate for sources separated
    along z); fixed="theta" holds the polar angle and scans phi (positions
    in phi, periodic).  Give either the fixed coordinate ``value`` in
    radians (nearest grid line is used) or a grid ``index`` directly.
    """
    fixed: Literal["theta", "phi"]
    value: float | None = None
    index: int | None = None

    def __post_init__(self):
        if self.fixed not in ("theta", "phi"):
            raise ValueError(f"fixed must be 'theta' or 'phi', got {self.fixed!r}")
        if (self.value is None) == (self.index is None):
            raise ValueError("give exactly one of value= or index=")

    def resolve_index(self, grid: AngularGrid) -> int:
        if self.index is not None:
            n = grid.n_phi if self.fixed == "phi" else grid.n_theta
            if not 0 <= self.index < n:
                raise ValueError(f"cut index {self.index} outside grid (0..{n - 1})")
            return self.index
        centers = grid.phi_centers if self.fixed == "phi" else grid.theta_centers
        return int(np.argmin(np.abs(centers - self.value)))


@dataclass(frozen=True)
class FringeReport:
    """Outcome of fringe analysis along a cut or phase histogram.

    ``has_fringes`` is False for flat/featureless data, in which case the
    numeric fields are None.  ``frequency`` is the fitted angular frequency
    in the cut coordinate (u or phi).
    """
    has_fringes: bool
    visibility: float | None = None
    spacing_mean: float | None = None
    spacing_std: float | None = None
    n_maxima: int = 0
    n_minima: int = 0
    frequency: float | None = None


_NO_FRINGES = FringeReport(has_fringes=False)


def cut_profile(amap: AngularMap, cut: CutSpec) -> tuple[np.ndarray, np.ndarray, bool]:
    """Extract (x, values, periodic) along a cut, x ascending.

    Histogram counts are divided by the cell solid angles first, so cuts
    through click histograms estimate the same density that analytic maps
    tabulate directly.
    """
    idx = cut.resolve_index(amap.grid)
    v = amap.values.astype(float)
    if amap.kind == "histogram":
        v = v / amap.grid.solid_angles
    if cut.fixed == "phi":
        x = np.cos(amap.grid.theta_centers)
        y = v[:, idx]
        return x[::-1].copy(), y[::-1].copy(), False
    x = amap.grid.phi_centers
    return x.copy(), v[idx, :].copy(), True


def _smooth(y: np.ndarray, window: int, periodic: bool) -> np.ndarray:
    if window <= 1:
        return y
    if window % 2 == 0:
        raise ValueError("smoothing window must be odd")
    kern = np.full(window, 1.0 / window)
    if periodic:
        h = window // 2
        ext = np.concatenate([y[-h:], y, y[:h]])
        return np.convolve(ext, kern, mode="valid")
    return np.convolve(y, kern, mode="same")  # edges keep partial support


def _local_extrema(y: np.ndarray, periodic: bool) -> tuple[np.ndarray, np.ndarray]:
    """Indices of 3-point local maxima/minima; boundary cells excluded unless
    the cut wraps around."""
    if periodic:
        left = np.roll(y, 1)
        right = np.roll(y, -1)
        imax = np.flatnonzero((y > left) & (y > right))
        imin = np.flatnonzero((y < left) & (y < right))
        return imax, imin
    c = y[1:-1]
    imax = 1 + np.flatnonzero((c > y[:-2]) & (c > y[2:]))
    imin = 1 + np.flatnonzero((c < y[:-2]) & (c < y[2:]))
    return imax, imin


def _spacings(x_sorted: np.ndarray, periodic: bool, span: float) -> np.ndarray:
    gaps = np.diff(x_sorted)
    if periodic and x_sorted.size >= 2:
        gaps = np.append(gaps, x_sorted[0] + span - x_sorted[-1])
    return gaps


def _fit_fringe(x: np.ndarray, y: np.ndarray, k: float) -> tuple[float, np.ndarray]:
    basis = np.column_stack([np.ones_like(x), np.cos(k * x), np.sin(k * x)])
    coef, *_ = np.linalg.lstsq(basis, y, rcond=None)
    r = y - basis @ coef
    return float(r @ r), coef


def _refined_fit(x: np.ndarray, y: np.ndarray, k_est: float) -> tuple[float, np.ndarray]:
    """Least-squares single-harmonic fit with the frequency refined around the
    spacing-based estimate.

    The residual as a function of frequency has alias minima spaced by one
    period across the cut (a fractional spacing of 1/n_periods), and one
    spurious extremum biases the spacing-based estimate by exactly that much.
    The coarse scan therefore covers +-1.5 lobes (never less than +-4%) with
    steps well inside a lobe, so the residual picks the true lobe before the
    bounded 1-d refinement tightens within it.
    """
    span = float(abs(x[-1] - x[0]))
    n_periods = max(k_est * span / (2.0 * np.pi), 1.0)
    hw = min(max(0.04, 1.5 / n_periods), 0.45)
    ks = k_est * np.linspace(1.0 - hw, 1.0 + hw, 41)
    resid = [_fit_fringe(x, y, k)[0] for k in ks]
    k_best = ks[int(np.argmin(resid))]
    step = k_est * 2.0 * hw / 40.0
    out = minimize_scalar(lambda k: _fit_fringe(x, y, k)[0],
                          bounds=(k_best - 2.0 * step, k_best + 2.0 * step),
                          method="bounded", options={"xatol": 1e-10 * k_est})
    k_fit = float(out.x)
    _, coef = _fit_fringe(x, y, k_fit)
    return k_fit, coef


def _analyze_cut(amap: AngularMap, cut: CutSpec, smooth: int | None):
    x, y, periodic = cut_profile(amap, cut)
    if smooth is None:
        smooth = 3 if amap.kind == "histogram" else 1
    ys = _smooth(y, smooth, periodic)
    scale = float(np.abs(ys).max())
    if scale <= 0.0 or float(ys.max() - ys.min()) <= 1e-12 * scale:
        return x, ys, periodic, None, None
    imax, imin = _local_extrema(ys, periodic)
    return x, ys, periodic, imax, imin


def visibility_along_cut(amap: AngularMap, cut: CutSpec,
                         smooth: int | None = None) -> FringeReport:
    """Fringe visibility (Imax - Imin)/(Imax + Imin) along a cut.

    Local extrema locate the fringes and fix the fringe frequency; the
    contrast itself comes from a single-harmonic least-squares fit at that
    (refined) frequency, which stays exact when the grid samples the fringes
    close to their Nyquist rate and averages shot noise down on histogram
    cuts.  Flat or featureless cuts give ``has_fringes=False``; histogram
    cuts are smoothed over 3 cells by default (``smooth=1`` disables).
    """
    x, ys, periodic, imax, imin = _analyze_cut(amap, cut, smooth)
    if imax is None or imax.size < 2 or imin.size < 1:
        return _NO_FRINGES
    xm = np.sort(x[imax])
    gaps = _spacings(xm, periodic, 2.0 * np.pi)
    mean_gap = float(gaps.mean())
    if mean_gap <= 0.0:
        return _NO_FRINGES
    k_fit, coef = _refined_fit(x, ys, 2.0 * np.pi / mean_gap)
    offset = float(coef[0])
    amp = float(np.hypot(coef[1], coef[2]))
    if offset <= 0.0:
        return _NO_FRINGES
    return FringeReport(has_fringes=True,
                        visibility=amp / offset,
                        spacing_mean=mean_gap,
                        spacing_std=float(gaps.std()),
                        n_maxima=int(imax.size),
                        n_minima=int(imin.size),
                        frequency=k_fit)


def fringe_spacing(amap: AngularMap, cut: CutSpec,
                   smooth: int | None = None) -> tuple[float, float]:
    """Mean and standard deviation of the spacing between adjacent fringe
    maxima along a cut, in the cut coordinate (u = cos(theta) or phi).

    Raises NoFringesError when fewer than 3 maxima are found.
    """
    x, _ys, periodic, imax, _imin = _analyze_cut(amap, cut, smooth)
    if imax is None or imax.size < 3:
        raise NoFringesError("need at least 3 fringe maxima to measure a spacing")
    gaps = _spacings(np.sort(x[imax]), periodic, 2.0 * np.pi)
    return float(gaps.mean()), float(gaps.std())


def fringe_count(amap: AngularMap, cut: CutSpec, smooth: int | None = None) -> int:
    """Number of fringes (periods) across the full cut, from the mean spacing.

    A theta cut spans u in [-1, 1], so the count is round(2 / spacing); a phi
    cut spans a full turn.  Counting periods instead of detected maxima keeps
    the answer stable when a maximum falls on the edge cells of the grid,
    where 3-point detection cannot see it.
    """
    mean_gap, _std = fringe_spacing(amap, cut, smooth)
    span = 2.0 * np.pi if cut.fixed == "theta" else 2.0
    return int(round(span / mean_gap))


# ---------------------------------------------------------------------------
# map comparison

def _unit_density(amap: AngularMap) -> np.ndarray:
    v = amap.values.astype(float)
    if amap.kind == "histogram":
        v = v / amap.grid.solid_angles
    tot = float((v * amap.grid.solid_angles).sum())
    if tot <= 0.0:
        raise ValueError("cannot normalize a map with zero total weight")
    return v / tot


def map_distance(a: AngularMap, b: AngularMap, metric: str = "L1_normalized") -> float:
    """Distance between two maps after normalizing each to a unit-integral
    density over the sphere (histograms are converted to densities first).

    "L1_normalized": half the solid-angle-weighted L1 difference (total
    variation, in [0, 1]); "Linf_normalized": peak absolute difference
    relative to the larger peak density.
    """
    if (a.grid.n_theta, a.grid.n_phi) != (b.grid.n_theta, b.grid.n_phi):
        raise ValueError("maps live on different grids")
    fa = _unit_density(a)
    fb = _unit_density(b)
    if metric == "L1_normalized":
        return 0.5 * float((np.abs(fa - fb) * a.grid.solid_angles).sum())
    if metric == "Linf_normalized":
        return float(np.abs(fa - fb).max() / max(fa.max(), fb.max()))
    raise ValueError(f"unknown metric {metric!r}")


# ---------------------------------------------------------------------------
# interference in the path-difference phase

def phase_coordinate(dirs: np.ndarray, cfg: ExperimentConfig) -> np.ndarray:
    """Path-difference phase k0 k.(r1 - r2) folded into [0, 2*pi)."""
    k = np.asarray(dirs, dtype=float).reshape(-1, 3)
    return (K0 * (k @ (cfg.r1 - cfg.r2))) % (2.0 * np.pi)


def phase_histogram(dirs: np.ndarray, cfg: ExperimentConfig,
                    bins: int = 16) -> tuple[np.ndarray, np.ndarray]:
    """Histogram of the path-difference phase; returns (counts, bin centers)."""
    ph = phase_coordinate(dirs, cfg)
    counts, edges = np.histogram(ph, bins=bins, range=(0.0, 2.0 * np.pi))
    return counts, 0.5 * (edges[:-1] + edges[1:])


def fringe_visibility_from_phases(dirs: np.ndarray, cfg: ExperimentConfig,
                                  bins: int = 16) -> FringeReport:
    """Interference contrast of sampled directions in the path-difference phase.

    Bins the phases over one period and fits offset + cos + sin (the fringe
    frequency in this coordinate is exactly one cycle per period); the fitted
    amplitude is divided by the top-hat bin-average factor sinc(pi/bins) so a
    perfect cosine gives contrast 1 regardless of the bin count.  The contrast
    counts as real fringes when it exceeds five times the shot-noise scale
    sqrt(2/N); otherwise the report says no fringes but still carries the
    fitted value.
    """
    counts, centers = phase_histogram(dirs, cfg, bins)
    n = int(counts.sum())
    if n == 0:
        return _NO_FRINGES
    _, coef = _fit_fringe(centers, counts.astype(float), 1.0)
    offset = float(coef[0])
    if offset <= 0.0:
        return _NO_FRINGES
    half_bin = np.pi / bins
    smear = np.sin(half_bin) / half_bin
    vis = float(np.hypot(coef[1], coef[2])) / (offset * smear)
    significant = vis > _SIGNIFICANCE * np.sqrt(2.0 / n)
    return FringeReport(has_fringes=bool(significant), visibility=vis,
                        n_maxima=0, n_minima=0, frequency=1.0)
