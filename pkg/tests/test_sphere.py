import numpy as np
import pytest

from atomslit import sphere


def test_direction_round_trip():
    for th, ph in [(0.3, 1.1), (2.5, 4.0), (np.pi / 2, 0.0)]:
        k = sphere.direction(th, ph)
        assert np.linalg.norm(k) == pytest.approx(1.0)
        th2, ph2 = sphere.to_angles(k)
        assert th2 == pytest.approx(th)
        assert ph2 == pytest.approx(ph)


def test_directions_broadcasts():
    th = np.array([0.2, 1.0, 2.0])
    ph = np.array([0.1, 0.5, 3.0])
    ks = sphere.directions(th, ph)
    assert ks.shape == (3, 3)
    for i in range(3):
        assert np.allclose(ks[i], sphere.direction(th[i], ph[i]))


def test_check_unit():
    sphere.check_unit(np.array([0.0, 0.0, 1.0]))
    with pytest.raises(ValueError):
        sphere.check_unit(np.array([0.0, 0.0, 2.0]))
    with pytest.raises(ValueError):
        sphere.check_unit(np.array([1.0, 0.0]))


def test_quadrature_weights_and_moments():
    pts, w = sphere.quadrature(32, 64)
    assert w.sum() == pytest.approx(4.0 * np.pi, abs=1e-12)
    # exact low-order moments of the uniform sphere measure
    assert abs(np.sum(w * pts[:, 2])) < 1e-12
    assert np.sum(w * pts[:, 2] ** 2) == pytest.approx(4.0 * np.pi / 3.0, abs=1e-10)
    assert np.sum(w * pts[:, 0] * pts[:, 1]) == pytest.approx(0.0, abs=1e-12)


def test_quadrature_integrates_plane_wave():
    # integral of exp(i a z) over the sphere is 4 pi sin(a)/a
    a = 11.0
    pts, w = sphere.quadrature(64, 8)
    val = np.sum(w * np.exp(1j * a * pts[:, 2]))
    ref = 4.0 * np.pi * np.sin(a) / a
    assert abs(val - ref) < 1e-10


def test_uniform_directions_statistics():
    rng = np.random.default_rng(123)
    ks = sphere.uniform_directions(rng, 40000)
    assert np.allclose(np.linalg.norm(ks, axis=1), 1.0)
    # component means vanish like 1/sqrt(n)
    assert np.abs(ks.mean(axis=0)).max() < 0.02
    # z is uniform: second moment 1/3
    assert np.mean(ks[:, 2] ** 2) == pytest.approx(1.0 / 3.0, abs=0.01)
