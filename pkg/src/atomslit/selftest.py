"""Named invariant suites behind the ``selftest`` CLI command.

Each suite is a small, fast check of one structural fact the rest of the
package leans on.  Suites raise (usually AssertionError) with a descriptive
message on failure; the runner turns that into per-suite pass/fail lines.
All calls go through module attributes so a harness can corrupt exactly one
function and watch exactly the matching suite fail.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import config, emission, screen, sphere, states, steady, trajectory


@dataclass(frozen=True)
class SelftestResult:
    name: str
    passed: bool
    detail: str


def suite_basis_ordering():
    """Product-basis labels, indices and the excitation-number diagonal."""
    assert states.LABELS == ("11", "12", "21", "22")
    for idx, label in enumerate(states.LABELS):
        k = states.ket(label)
        assert k[idx] == 1.0 and np.count_nonzero(k) == 1, f"ket({label!r}) wrong"
        assert states.basis_index(label) == idx
    assert np.array_equal(np.diag(states.NUMBER_OP).real, [0, 1, 1, 2]), \
        "excitation diagonal wrong"


def suite_lowering_algebra():
    """Per-atom lowering operators act on their own factor only and are
    nilpotent and mutually commuting."""
    pairs = [(states.LOWER_1, "21", "11"), (states.LOWER_1, "22", "12"),
             (states.LOWER_2, "12", "11"), (states.LOWER_2, "22", "21")]
    for op, src, dst in pairs:
        assert np.array_equal(op @ states.ket(src), states.ket(dst))
    assert np.all(states.LOWER_1 @ states.ket("11") == 0)
    assert np.all(states.LOWER_1 @ states.ket("12") == 0)
    assert np.all(states.LOWER_2 @ states.ket("21") == 0)
    assert np.all(states.LOWER_1 @ states.LOWER_1 == 0), "not nilpotent"
    comm = states.LOWER_1 @ states.LOWER_2 - states.LOWER_2 @ states.LOWER_1
    assert np.all(comm == 0), "lowering operators do not commute"


def suite_dipole_normalization():
    """The 3/(8 pi) dipole pattern integrates to 1 over the sphere."""
    cfg = config.standard_config()
    pts, w = sphere.quadrature(48, 96)
    total = float(np.sum(w * emission.angular_factor(cfg.d_hat, pts)))
    total *= 3.0 / (8.0 * np.pi)
    assert abs(total - 1.0) <= 1e-10, f"dipole integral {total!r}"


def suite_density_equivalence():
    """Pure-state and density-matrix angular densities agree."""
    rng = np.random.default_rng(7)
    cfg = config.standard_config(separation=2.5)
    for _ in range(10):
        psi = rng.normal(size=4) + 1j * rng.normal(size=4)
        psi /= np.linalg.norm(psi)
        k = sphere.uniform_directions(rng, 1)[0]
        a = emission.emission_density_pure(psi, k, cfg)
        b = emission.emission_density_mixed(states.dm_from_pure(psi), k, cfg)
        assert abs(a - b) <= 1e-12 * max(1.0, abs(a)), f"densities differ: {a} vs {b}"


def suite_steady_fixed_point():
    """The product of single-atom stationary states annihilates the
    two-atom master equation."""
    for o1, o2 in [(0.3, 0.3), (0.1, 0.5), (0.4 * np.exp(0.9j), 0.2)]:
        cfg = config.standard_config(separation=3.0, omega1=o1, omega2=o2)
        sol = steady.two_atom_steady(cfg)
        res = float(np.abs(steady.master_rhs(sol.rho, cfg)).max())
        assert res <= 1e-12, f"residual {res!r} at drives ({o1}, {o2})"


def suite_integrator_oracle():
    """Brute-force time integration lands on the closed-form stationary state."""
    cfg = config.standard_config(separation=3.0, omega1=0.4, omega2=0.2)
    num = steady.time_integrate_to_steady(cfg, tol=1e-9)
    ref = steady.two_atom_steady(cfg)
    diff = float(np.abs(num.rho - ref.rho).max())
    assert diff <= 1e-7, f"integrated vs closed form differ by {diff!r}"


def suite_sampler_envelope():
    """The rejection-sampler envelope bounds the angular density everywhere."""
    rng = np.random.default_rng(11)
    cfg = config.standard_config(separation=1.3)
    for _ in range(25):
        psi = rng.normal(size=4) + 1j * rng.normal(size=4)
        psi /= np.linalg.norm(psi)
        bound = trajectory.rejection_bound(psi, cfg)
        k = sphere.uniform_directions(rng, 64)
        dens = emission.emission_density_pure_many(psi, k, cfg)
        assert dens.max() <= bound * (1.0 + 1e-12), \
            f"density {dens.max()!r} above envelope {bound!r}"


def suite_gamma_coincidence():
    """Quadrature cross-emission factor matches its closed form.

    For separation s, x = k0 s and u the cosine between dipole and
    separation axis, the closed form is
    (3/2) [ (1-u^2) sin x / x + (1-3u^2)(cos x / x^2 - sin x / x^3) ].
    """
    def closed(x, u):
        return 1.5 * ((1 - u * u) * np.sin(x) / x
                      + (1 - 3 * u * u) * (np.cos(x) / x ** 2 - np.sin(x) / x ** 3))

    for sep, tilt in [(0.3, 0.0), (1.0, 0.0), (2.7, 0.6)]:
        d = (np.sqrt(1.0 - tilt * tilt), 0.0, tilt)
        cfg = config.standard_config(separation=sep, dipole=d)
        g = emission.cross_term_gamma(cfg, 128, 256)
        ref = closed(2.0 * np.pi * sep, tilt) * cfg.decay_rate
        assert abs(g.imag) <= 1e-8, f"imaginary cross term {g.imag!r}"
        assert abs(g.real - ref) <= 1e-8, \
            f"cross term {g.real!r} vs closed form {ref!r} at sep {sep}"
    tiny = config.standard_config(separation=1e-6)
    g0 = emission.cross_term_gamma(tiny, 64, 128)
    assert abs(g0.real - tiny.decay_rate) <= 1e-9, "zero-separation limit broken"


def suite_grid_weights():
    """Cell solid angles tile the sphere exactly; centers bin to their cell."""
    g = screen.AngularGrid(24, 48)
    total = float(g.solid_angles.sum())
    assert abs(total - 4.0 * np.pi) <= 1e-10, f"weights sum to {total!r}"
    it, ip = g.bin_directions(g.centers.reshape(-1, 3))
    assert np.array_equal(it, np.repeat(np.arange(24), 48)), "theta binning off"
    assert np.array_equal(ip, np.tile(np.arange(48), 24)), "phi binning off"


def suite_visibility_calibration():
    """Known synthetic fringes come back with the planted contrast; a flat
    map reports no fringes."""
    g = screen.AngularGrid(64, 128)
    cut = screen.CutSpec(fixed="theta", index=32)
    v0 = 0.37
    row = 1.0 + v0 * np.cos(6.0 * (g.phi_centers - g.phi_centers[4]))
    amap = screen.AngularMap(g, np.tile(row, (64, 1)), "density")
    rep = screen.visibility_along_cut(amap, cut)
    assert rep.has_fringes, "planted fringes not detected"
    assert abs(rep.visibility - v0) <= 1e-9, f"V {rep.visibility!r} vs {v0}"
    assert screen.fringe_count(amap, cut) == 6
    flat = screen.AngularMap(g, np.ones((64, 128)), "density")
    assert not screen.visibility_along_cut(flat, cut).has_fringes, \
        "flat map claims fringes"


def suite_stream_determinism():
    """Trajectories are reproducible from the seed and distinct across seeds."""
    cfg = config.standard_config()
    a = trajectory.run_trajectory(cfg, duration=200.0, dt=0.01, seed=42)
    b = trajectory.run_trajectory(cfg, duration=200.0, dt=0.01, seed=42)
    assert len(a) > 0, "no clicks in 200 lifetimes"
    assert np.array_equal(a.times, b.times), "click times not reproducible"
    assert np.array_equal(a.directions, b.directions), "directions not reproducible"
    c = trajectory.run_trajectory(cfg, duration=200.0, dt=0.01, seed=43)
    assert len(a) != len(c) or not np.array_equal(a.times, c.times), \
        "different seeds gave identical streams"


SUITES = {
    "basis_ordering": suite_basis_ordering,
    "lowering_algebra": suite_lowering_algebra,
    "dipole_normalization": suite_dipole_normalization,
    "density_equivalence": suite_density_equivalence,
    "steady_fixed_point": suite_steady_fixed_point,
    "integrator_oracle": suite_integrator_oracle,
    "sampler_envelope": suite_sampler_envelope,
    "gamma_coincidence": suite_gamma_coincidence,
    "grid_weights": suite_grid_weights,
    "visibility_calibration": suite_visibility_calibration,
    "stream_determinism": suite_stream_determinism,
}


def run_selftests(names: list[str] | None = None) -> list[SelftestResult]:
    """Run the named suites (all by default) and collect results."""
    if names is None:
        names = list(SUITES)
    unknown = [n for n in names if n not in SUITES]
    if unknown:
        raise ValueError(f"unknown selftest suites: {', '.join(unknown)}")
    results = []
    for name in names:
        try:
            SUITES[name]()
        except Exception as exc:  # noqa: BLE001 - report, don't crash the runner
            results.append(SelftestResult(name, False,
                                          f"{type(exc).__name__}: {exc}"))
        else:
            results.append(SelftestResult(name, True, "ok"))
    return results
