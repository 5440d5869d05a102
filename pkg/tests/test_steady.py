import numpy as np
import pytest

import atomslit as al
from atomslit import sphere, steady
from atomslit.states import validate_density

SX = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SM = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)  # |g><e|


def _one_atom_rhs(rho, omega, a):
    """Independent 2x2 oracle for the driven-damped two-level atom."""
    h = 0.5 * (omega * SM.conj().T + np.conj(omega) * SM)
    damp = a * (SM @ rho @ SM.conj().T
                - 0.5 * (SM.conj().T @ SM @ rho + rho @ SM.conj().T @ SM))
    return -1j * (h @ rho - rho @ h) + damp


def test_single_atom_steady_solves_its_master_equation():
    for omega in [0.1, 0.3, 1.0, 0.4 * np.exp(1.1j)]:
        rho = al.single_atom_steady(omega, 1.0)
        assert np.trace(rho).real == pytest.approx(1.0)
        assert np.abs(_one_atom_rhs(rho, omega, 1.0)).max() < 1e-14


def test_single_atom_excited_population_formula():
    # p = |omega|^2 / (A^2 + 2|omega|^2)
    for omega, a in [(0.3, 1.0), (0.3, 2.0), (1.0, 1.0)]:
        rho = al.single_atom_steady(omega, a)
        p = abs(omega) ** 2 / (a * a + 2.0 * abs(omega) ** 2)
        assert rho[1, 1].real == pytest.approx(p, rel=1e-12)
    # the default drive value, written out
    assert al.single_atom_steady(0.3)[1, 1].real == pytest.approx(0.09 / 1.18,
                                                                  rel=1e-12)


def test_two_atom_steady_is_fixed_point_of_master_rhs():
    for o1, o2 in [(0.3, 0.3), (0.1, 0.7), (0.5 * np.exp(0.8j), 0.2 * np.exp(-1.3j))]:
        cfg = al.standard_config(separation=6.0, omega1=o1, omega2=o2)
        sol = al.two_atom_steady(cfg)
        assert sol.method == "closed_form_product"
        assert sol.residual < 1e-13
        assert np.abs(al.master_rhs(sol.rho, cfg)).max() < 1e-13
        validate_density(sol.rho)


def test_time_integration_agrees_with_closed_form():
    cfg = al.standard_config(separation=4.0, omega1=0.4, omega2=0.15)
    num = al.time_integrate_to_steady(cfg)
    ref = al.two_atom_steady(cfg)
    assert num.method == "time_integration"
    assert np.abs(num.rho - ref.rho).max() < 1e-8


def test_time_integration_reports_nonconvergence():
    cfg = al.standard_config(omega1=0.3, omega2=0.3)
    with pytest.raises(RuntimeError):
        al.time_integrate_to_steady(cfg, max_time=1.0, tol=1e-14)


def test_steady_density_equals_mixed_density_of_product_state():
    # dual route: the closed-form angular pattern against the generic
    # density-matrix formula evaluated on the product stationary state
    rng = np.random.default_rng(9)
    dirs = sphere.uniform_directions(rng, 40)
    for o1, o2 in [(0.3, 0.3), (1.0, 0.2), (0.4 * np.exp(2.0j), 0.3)]:
        cfg = al.standard_config(omega1=o1, omega2=o2)
        rho = al.two_atom_steady(cfg).rho
        for k in dirs:
            a = al.steady_emission_density(cfg, k)
            b = al.emission_density_mixed(rho, k, cfg)
            assert a == pytest.approx(b, rel=1e-12, abs=1e-18)


def test_steady_density_many_matches_scalar():
    cfg = al.standard_config(omega1=0.25, omega2=0.55)
    rng = np.random.default_rng(10)
    ks = sphere.uniform_directions(rng, 30)
    many = al.steady_emission_density_many(cfg, ks)
    for i, k in enumerate(ks):
        assert many[i] == pytest.approx(al.steady_emission_density(cfg, k),
                                        rel=1e-12)


def test_steady_total_rate_and_sphere_integral():
    cfg = al.standard_config(omega1=0.3, omega2=0.3)
    rate = al.steady_total_rate(cfg)
    assert rate == pytest.approx(2.0 * 0.09 / 1.18, rel=1e-12)
    # the angular pattern integrates to the total rate up to the small
    # two-atom cross correction (|gamma|/A ~ 1e-4 at separation 20)
    pts, w = sphere.quadrature(128, 256)
    total = float(np.sum(w * al.steady_emission_density_many(cfg, pts)))
    assert total == pytest.approx(rate, rel=5e-4)


def test_equal_drive_visibility_values():
    assert al.equal_drive_visibility(0.1) == pytest.approx(1.0 / 1.02, rel=1e-12)
    assert al.equal_drive_visibility(0.3) == pytest.approx(1.0 / 1.18, rel=1e-12)
    assert al.equal_drive_visibility(1.0) == pytest.approx(1.0 / 3.0, rel=1e-12)
    # scaling in the decay rate: only the ratio omega/A matters
    assert al.equal_drive_visibility(0.6, 2.0) == pytest.approx(
        al.equal_drive_visibility(0.3, 1.0), rel=1e-12)


def test_single_driven_atom_pattern_has_no_azimuthal_fringes():
    # with one atom undriven the stationary pattern carries no interference
    cfg = al.standard_config(omega1=0.3, omega2=0.0)
    grid = al.AngularGrid(32, 64)
    amap = al.steady_map(cfg, grid)
    rep = al.visibility_along_cut(amap, al.CutSpec(fixed="phi", value=np.pi / 2))
    assert not rep.has_fringes


def test_drive_hamiltonian_is_hermitian():
    cfg = al.standard_config(omega1=0.4 * np.exp(0.7j), omega2=0.2)
    h = steady.drive_hamiltonian(cfg)
    assert np.abs(h - h.conj().T).max() < 1e-15
    # undriven atoms have no coherent dynamics
    h0 = steady.drive_hamiltonian(al.standard_config(omega1=0.0, omega2=0.0))
    assert np.all(h0 == 0)
