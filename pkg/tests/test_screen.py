import numpy as np
import pytest

import atomslit as al
from atomslit import screen, sphere
from atomslit.trajectory import ClickStream


def _stream_from_directions(dirs, times=None, cfg=None):
    cfg = cfg or al.standard_config()
    dirs = np.asarray(dirs, float).reshape(-1, 3)
    t = np.asarray(times, float) if times is not None \
        else np.arange(1.0, len(dirs) + 1.0)
    return ClickStream(times=t, directions=dirs, duration=float(t[-1]) + 1.0,
                       dt=0.01, seed=0, config=cfg)


def test_grid_weights_tile_the_sphere():
    for nt, np_ in [(8, 16), (32, 64), (128, 256)]:
        g = al.AngularGrid(nt, np_)
        assert abs(float(g.solid_angles.sum()) - 4.0 * np.pi) < 1e-10
        assert g.solid_angles.min() > 0.0


def test_grid_centers_and_edges():
    g = al.AngularGrid(4, 8)
    assert np.allclose(g.theta_edges, np.linspace(0, np.pi, 5))
    assert np.allclose(g.theta_centers, (np.arange(4) + 0.5) * np.pi / 4)
    assert np.allclose(g.phi_centers, (np.arange(8) + 0.5) * np.pi / 4)
    assert g.centers.shape == (4, 8, 3)
    assert np.allclose(np.linalg.norm(g.centers, axis=-1), 1.0)


def test_bin_directions_hits_own_cell_and_edges():
    g = al.AngularGrid(16, 32)
    it, ip = g.bin_directions(g.centers.reshape(-1, 3))
    assert np.array_equal(it, np.repeat(np.arange(16), 32))
    assert np.array_equal(ip, np.tile(np.arange(32), 16))
    # poles land in the first/last theta rows
    it, _ = g.bin_directions(np.array([[0.0, 0.0, 1.0], [0.0, 0.0, -1.0]]))
    assert it[0] == 0 and it[1] == 15


def test_grid_rejects_degenerate_sizes():
    with pytest.raises(ValueError):
        al.AngularGrid(1, 16)


def test_angular_map_evaluates_function_on_centers():
    g = al.AngularGrid(6, 12)
    amap = al.angular_map(lambda k: 1.0 + k[2] ** 2, g)
    assert amap.values.shape == (6, 12)
    assert np.allclose(amap.values, 1.0 + g.centers[..., 2] ** 2)
    with pytest.raises(ValueError):
        al.angular_map(lambda k: -1.0, g)


def test_map_shape_validation():
    g = al.AngularGrid(4, 8)
    with pytest.raises(ValueError):
        al.AngularMap(grid=g, values=np.zeros((4, 7)), kind="density")
    with pytest.raises(ValueError):
        al.AngularMap(grid=g, values=np.zeros((4, 8)), kind="plot")


def test_accumulate_clicks_bins_and_burn_in():
    g = al.AngularGrid(8, 16)
    d1 = sphere.direction(*(g.theta_centers[2], g.phi_centers[5]))
    d2 = sphere.direction(*(g.theta_centers[7], g.phi_centers[0]))
    st = _stream_from_directions([d1, d1, d2], times=[0.5, 30.0, 40.0])
    hist = al.accumulate_clicks(st, g, burn_in=1.0)
    assert hist.kind == "histogram"
    assert hist.values.sum() == 2  # the click at t=0.5 is burned off
    assert hist.values[2, 5] == 1 and hist.values[7, 0] == 1


def test_cut_profile_orientation_and_units():
    g = al.AngularGrid(16, 8)
    vals = np.outer(np.cos(g.theta_centers), np.ones(8))
    amap = al.AngularMap(grid=g, values=vals, kind="density")
    x, y, periodic = screen.cut_profile(amap, al.CutSpec(fixed="phi", index=3))
    assert not periodic
    assert np.all(np.diff(x) > 0)  # ascending u = cos(theta)
    assert np.allclose(y, x)       # the planted profile is exactly u
    x2, y2, periodic2 = screen.cut_profile(amap, al.CutSpec(fixed="theta", index=0))
    assert periodic2 and np.allclose(x2, g.phi_centers)


def test_cut_profile_converts_histogram_to_density():
    g = al.AngularGrid(16, 8)
    counts = np.rint(1e4 * g.solid_angles).astype(np.int64)  # flat density
    amap = al.AngularMap(grid=g, values=counts, kind="histogram")
    _x, y, _p = screen.cut_profile(amap, al.CutSpec(fixed="phi", index=0))
    assert np.ptp(y) / y.mean() < 0.01  # flat apart from rounding


def test_cutspec_validation_and_resolution():
    g = al.AngularGrid(16, 32)
    with pytest.raises(ValueError):
        al.CutSpec(fixed="phi")
    with pytest.raises(ValueError):
        al.CutSpec(fixed="phi", value=1.0, index=2)
    with pytest.raises(ValueError):
        al.CutSpec(fixed="radius", value=1.0)
    assert al.CutSpec(fixed="phi", value=g.phi_centers[7]).resolve_index(g) == 7
    assert al.CutSpec(fixed="theta", value=0.0).resolve_index(g) == 0
    with pytest.raises(ValueError):
        al.CutSpec(fixed="phi", index=32).resolve_index(g)


def test_visibility_recovers_planted_contrast_phi_scan():
    g = al.AngularGrid(32, 256)
    v0 = 0.613
    row = 2.0 + 2.0 * v0 * np.cos(9.0 * (g.phi_centers - 0.123))
    amap = al.AngularMap(grid=g, values=np.tile(row, (32, 1)), kind="density")
    rep = al.visibility_along_cut(amap, al.CutSpec(fixed="theta", index=16))
    assert rep.has_fringes
    assert rep.visibility == pytest.approx(v0, abs=1e-9)
    assert rep.frequency == pytest.approx(9.0, rel=1e-6)
    assert rep.n_maxima == 9


def test_visibility_recovers_contrast_near_nyquist_theta_scan():
    # fringes in u = cos(theta) sampled with ~3 cells per period: naive
    # peak-detection contrast collapses here, the fitted contrast must not
    g = al.AngularGrid(128, 8)
    v0 = 0.847
    u = np.cos(g.theta_centers)
    col = 1.0 + v0 * np.cos(40.0 * np.pi * u + 0.31)
    amap = al.AngularMap(grid=g, values=np.tile(col[:, None], (1, 8)),
                         kind="density")
    rep = al.visibility_along_cut(amap, al.CutSpec(fixed="phi", index=2))
    assert rep.has_fringes
    assert rep.visibility == pytest.approx(v0, abs=1e-6)
    assert rep.frequency == pytest.approx(40.0 * np.pi, rel=1e-4)


def test_visibility_flat_map_reports_no_fringes():
    g = al.AngularGrid(32, 64)
    flat = al.AngularMap(grid=g, values=np.full((32, 64), 2.5), kind="density")
    rep = al.visibility_along_cut(flat, al.CutSpec(fixed="phi", value=np.pi / 2))
    assert not rep.has_fringes
    assert rep.visibility is None


def test_fringe_spacing_and_count():
    g = al.AngularGrid(128, 8)
    u = np.cos(g.theta_centers)
    col = 1.0 + 0.5 * np.cos(40.0 * np.pi * u)
    amap = al.AngularMap(grid=g, values=np.tile(col[:, None], (1, 8)),
                         kind="density")
    cut = al.CutSpec(fixed="phi", index=0)
    mean, std = al.fringe_spacing(amap, cut)
    assert mean == pytest.approx(0.05, abs=1e-3)
    assert std < 0.02
    assert al.fringe_count(amap, cut) == 40


def test_fringe_spacing_raises_without_fringes():
    g = al.AngularGrid(32, 64)
    flat = al.AngularMap(grid=g, values=np.ones((32, 64)), kind="density")
    with pytest.raises(al.NoFringesError):
        al.fringe_spacing(flat, al.CutSpec(fixed="phi", index=0))


def test_histogram_cut_smoothing_default():
    # Poisson-noisy histogram fringes (5 periods, contrast 0.9): with the
    # default 3-cell smoothing the frequency-refined fit recovers the planted
    # wave, while the unsmoothed profile drowns in spurious extrema
    rng = np.random.default_rng(17)
    g = al.AngularGrid(64, 128)
    lam = 40.0 * (1.0 + 0.9 * np.cos(5.0 * g.phi_centers))
    counts = rng.poisson(np.tile(lam, (64, 1)) * g.solid_angles * 2000.0)
    amap = al.AngularMap(grid=g, values=counts.astype(np.int64), kind="histogram")
    cut = al.CutSpec(fixed="theta", index=32)

    rep = al.visibility_along_cut(amap, cut)
    assert rep.has_fringes
    assert rep.frequency == pytest.approx(5.0, rel=0.01)
    # the 3-cell moving average shaves sin(x)/x off the contrast; with
    # x = pi * 5 * 3 / 128 that is a factor 0.978
    assert rep.visibility == pytest.approx(0.88, abs=0.05)
    assert 5 <= rep.n_maxima <= 8

    # the default for histograms is exactly the 3-cell window
    assert rep == al.visibility_along_cut(amap, cut, smooth=3)

    # without smoothing, shot noise fragments the extrema and drags the
    # spacing-based frequency estimate far off the planted wave
    raw = al.visibility_along_cut(amap, cut, smooth=1)
    assert raw.n_maxima > 2 * rep.n_maxima


def test_map_distance_basics():
    g = al.AngularGrid(8, 16)
    a = al.AngularMap(grid=g, values=np.ones((8, 16)), kind="density")
    b = al.AngularMap(grid=g, values=3.0 * np.ones((8, 16)), kind="density")
    # normalization removes overall scale
    assert al.map_distance(a, b) == pytest.approx(0.0, abs=1e-15)
    assert al.map_distance(a, b, metric="Linf_normalized") == pytest.approx(0.0,
                                                                            abs=1e-15)
    # disjoint supports are at total-variation distance 1
    va = np.zeros((8, 16)); va[2, 3] = 1.0
    vb = np.zeros((8, 16)); vb[5, 9] = 1.0
    da = al.AngularMap(grid=g, values=va, kind="density")
    db = al.AngularMap(grid=g, values=vb, kind="density")
    assert al.map_distance(da, db) == pytest.approx(1.0)


def test_map_distance_histogram_vs_density():
    # histogram drawn exactly proportional to cell mass of a density
    g = al.AngularGrid(8, 16)
    dens = 1.0 + g.centers[..., 2] ** 2
    counts = np.rint(1e6 * dens * g.solid_angles).astype(np.int64)
    a = al.AngularMap(grid=g, values=dens, kind="density")
    h = al.AngularMap(grid=g, values=counts, kind="histogram")
    assert al.map_distance(a, h) < 1e-5


def test_map_distance_errors():
    a = al.AngularMap(grid=al.AngularGrid(8, 16), values=np.ones((8, 16)),
                      kind="density")
    b = al.AngularMap(grid=al.AngularGrid(8, 32), values=np.ones((8, 32)),
                      kind="density")
    with pytest.raises(ValueError):
        al.map_distance(a, b)
    z = al.AngularMap(grid=al.AngularGrid(8, 16), values=np.zeros((8, 16)),
                      kind="density")
    with pytest.raises(ValueError):
        al.map_distance(a, z)
    with pytest.raises(ValueError):
        al.map_distance(a, a, metric="L7")


def test_phase_coordinate_values():
    cfg = al.standard_config(separation=20.0)
    # along +z the path difference is the full separation: 40 pi mod 2 pi = 0
    # (up to the folding branch, so measure distance to the nearest multiple)
    ph = al.phase_coordinate(np.array([[0.0, 0.0, 1.0]]), cfg)
    assert min(ph[0], 2.0 * np.pi - ph[0]) < 1e-9
    # at cos(theta) = 1/80 the phase is exactly pi/2
    z = 1.0 / 80.0
    k = np.array([[np.sqrt(1 - z * z), 0.0, z]])
    assert al.phase_coordinate(k, cfg)[0] == pytest.approx(np.pi / 2.0, abs=1e-9)


def test_phase_visibility_separates_fringes_from_flat():
    cfg = al.standard_config(separation=20.0)
    rng = np.random.default_rng(5)
    n = 20000

    # phases from the two-path law (1 + cos x)/(2 pi), by rejection
    xs = np.empty(0)
    while xs.size < n:
        cand = 2.0 * np.pi * rng.random(4 * n)
        keep = 2.0 * rng.random(4 * n) < 1.0 + np.cos(cand)
        xs = np.concatenate([xs, cand[keep]])
    xs = xs[:n]
    z = xs / (40.0 * np.pi)  # phase = k0 * 20 * z on these directions
    dirs = np.column_stack([np.sqrt(1.0 - z * z), np.zeros(n), z])
    rep = al.fringe_visibility_from_phases(dirs, cfg)
    assert rep.has_fringes
    assert rep.visibility == pytest.approx(1.0, abs=0.03)

    # uniform phases: contrast at the shot-noise level, flagged as no fringes
    zu = 2.0 * np.pi * rng.random(n) / (40.0 * np.pi)
    du = np.column_stack([np.sqrt(1.0 - zu * zu), np.zeros(n), zu])
    rep_u = al.fringe_visibility_from_phases(du, cfg)
    assert not rep_u.has_fringes
    assert rep_u.visibility < 0.03


def test_phase_histogram_counts():
    cfg = al.standard_config()
    dirs = sphere.uniform_directions(np.random.default_rng(0), 1000)
    counts, centers = al.phase_histogram(dirs, cfg, bins=16)
    assert counts.sum() == 1000
    assert centers.shape == (16,)
    assert np.all(np.diff(centers) > 0)


def test_steady_and_classical_maps_share_fringe_structure():
    cfg = al.standard_config(omega1=0.05, omega2=0.05)
    cc = al.ClassicalConfig(r1=cfg.r1, r2=cfg.r2, d_hat=cfg.d_hat,
                            e1=0.05, e2=0.05)
    g = al.AngularGrid(64, 128)
    qm = al.steady_map(cfg, g)
    cm = al.classical_map(cc, g)
    assert qm.kind == "density" and cm.kind == "intensity"
    assert al.map_distance(qm, cm) < 5e-3
