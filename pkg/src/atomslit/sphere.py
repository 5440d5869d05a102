"""Directions on the unit sphere: construction, quadrature, uniform sampling."""

from __future__ import annotations

import numpy as np


def direction(theta: float, phi: float) -> np.ndarray:
    """Unit vector with polar angle theta (from +z) and azimuth phi (from +x)."""
    st = np.sin(theta)
    return np.array([st * np.cos(phi), st * np.sin(phi), np.cos(theta)])


def directions(theta, phi) -> np.ndarray:
    """Vectorized ``direction``; broadcasts theta/phi to an (..., 3) array."""
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    st = np.sin(theta)
    return np.stack([st * np.cos(phi), st * np.sin(phi),
                     np.cos(np.broadcast_to(theta, st.shape))], axis=-1)


def to_angles(k: np.ndarray) -> tuple[float, float]:
    """Polar/azimuth angles of a unit vector, with phi folded into [0, 2*pi)."""
    k = np.asarray(k, dtype=float)
    theta = float(np.arccos(np.clip(k[2], -1.0, 1.0)))
    phi = float(np.arctan2(k[1], k[0])) % (2.0 * np.pi)
    return theta, phi


def check_unit(k: np.ndarray, tol: float = 1e-9) -> np.ndarray:
    k = np.asarray(k, dtype=float)
    if k.shape != (3,):
        raise ValueError(f"direction must be a 3-vector, got shape {k.shape}")
    n = float(np.linalg.norm(k))
    if abs(n - 1.0) > tol:
        raise ValueError(f"direction must be a unit vector (norm = {n!r})")
    return k


def quadrature(n_theta: int = 256, n_phi: int = 512) -> tuple[np.ndarray, np.ndarray]:
    """Product quadrature rule for integrals over the full solid angle.

    Gauss-Legendre nodes in u = cos(theta) crossed with a uniform (trapezoid)
    rule in phi, which is exact for trigonometric polynomials of the azimuth.
    Returns (points, weights) with points (N, 3) and sum(weights) = 4*pi.
    """
    u, wu = np.polynomial.legendre.leggauss(n_theta)
    phi = 2.0 * np.pi * np.arange(n_phi) / n_phi
    wphi = 2.0 * np.pi / n_phi
    su = np.sqrt(1.0 - u**2)
    cp, sp = np.cos(phi), np.sin(phi)
    pts = np.empty((n_theta * n_phi, 3))
    pts[:, 0] = np.outer(su, cp).ravel()
    pts[:, 1] = np.outer(su, sp).ravel()
    pts[:, 2] = np.repeat(u, n_phi)
    w = np.repeat(wu * wphi, n_phi)
    return pts, w


def uniform_directions(rng: np.random.Generator, n: int) -> np.ndarray:
    """n directions drawn uniformly on the sphere (area-preserving in cos(theta))."""
    z = 1.0 - 2.0 * rng.random(n)
    phi = 2.0 * np.pi * rng.random(n)
    s = np.sqrt(np.maximum(0.0, 1.0 - z * z))
    return np.column_stack([s * np.cos(phi), s * np.sin(phi), z])
