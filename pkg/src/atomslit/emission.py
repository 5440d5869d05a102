"""Angular law of spontaneous emission from the atom pair.

For a pure state psi the probability density (per unit time and solid angle)
of detecting a photon in direction k_hat is

    I(k) = (3*A / 8*pi) * (1 - |d.k|^2) * || sum_i exp(-i k0 k.r_i) S_i^- psi ||^2

The collapsed state after such a detection is the normalized amplitude sum
itself, so interference between the two "which atom emitted" pathways is
encoded in the relative phase exp(-i k0 k.(r1 - r2)).
"""

from __future__ import annotations

import numpy as np

from . import sphere
from .config import ExperimentConfig, K0
from .states import LOWER_1, LOWER_2, validate_density, validate_state

#: relative threshold below which the collapsed amplitude counts as fully destructive
_RESET_EPS = 1e-12


class NoEmissionError(ValueError):
    """Raised when a quantity is undefined because no photon can be emitted."""


def prefactor(cfg: ExperimentConfig) -> float:
    """Normalization 3*A/(8*pi) of the single-dipole radiation pattern."""
    return 3.0 * cfg.decay_rate / (8.0 * np.pi)


def angular_factor(d_hat: np.ndarray, k_hat) -> float | np.ndarray:
    """Dipole radiation factor 1 - |d.k|^2; accepts a single k or an (N, 3) batch."""
    k = np.asarray(k_hat, dtype=float)
    dot = k @ np.asarray(d_hat, dtype=float)
    return 1.0 - dot * dot


def phase_factors(cfg: ExperimentConfig, k_hat: np.ndarray) -> tuple[complex, complex]:
    """Propagation phases exp(-i k0 k.r_i) of the two emission pathways."""
    k = np.asarray(k_hat, dtype=float)
    return (complex(np.exp(-1j * K0 * (k @ cfg.r1))),
            complex(np.exp(-1j * K0 * (k @ cfg.r2))))


def emission_density_pure(psi: np.ndarray, k_hat: np.ndarray,
                          cfg: ExperimentConfig) -> float:
    """Angular photon detection density for a normalized pure state."""
    psi = np.asarray(psi, dtype=complex)
    validate_state(psi)
    k = sphere.check_unit(k_hat)
    p1, p2 = phase_factors(cfg, k)
    v = p1 * (LOWER_1 @ psi) + p2 * (LOWER_2 @ psi)
    dens = prefactor(cfg) * angular_factor(cfg.d_hat, k) * float(np.vdot(v, v).real)
    return max(dens, 0.0)


def emission_density_pure_many(psi: np.ndarray, k_hats: np.ndarray,
                               cfg: ExperimentConfig) -> np.ndarray:
    """Vectorized ``emission_density_pure`` over an (N, 3) array of directions.

    Uses the expansion of the collapsed amplitude in the product basis:
    component |11> carries e^{-i k.r1} a21 + e^{-i k.r2} a12 and the
    single-excitation components carry |a22| each, so

        ||.||^2 = |e1 a21 + e2 a12|^2 + 2 |a22|^2.

    Inputs are trusted (no per-direction validation); used by the sampler.
    """
    a = np.asarray(psi, dtype=complex)
    k = np.asarray(k_hats, dtype=float)
    e1 = np.exp(-1j * K0 * (k @ cfg.r1))
    e2 = np.exp(-1j * K0 * (k @ cfg.r2))
    amp0 = e1 * a[2] + e2 * a[1]
    nrm2 = amp0.real**2 + amp0.imag**2 + 2.0 * (a[3].real**2 + a[3].imag**2)
    dens = prefactor(cfg) * angular_factor(cfg.d_hat, k) * nrm2
    return np.maximum(dens, 0.0)


def emission_density_mixed(rho: np.ndarray, k_hat: np.ndarray,
                           cfg: ExperimentConfig) -> float:
    """Angular detection density for a density matrix.

    Partial-trace form of the pure-state law:

        I(k) = pref * (1 - |d.k|^2) * [ 2 rho_22,22 + rho_12,12 + rho_21,21
                                        + 2 Re( <21|rho|12> e^{-i k0 k.(r1-r2)} ) ]

    The interference term couples the two single-excitation coherences with
    the path-difference phase.
    """
    rho = np.asarray(rho, dtype=complex)
    validate_density(rho)
    k = sphere.check_unit(k_hat)
    dphi = K0 * float(k @ (cfg.r1 - cfg.r2))
    bracket = (2.0 * rho[3, 3].real + rho[1, 1].real + rho[2, 2].real
               + 2.0 * (rho[2, 1] * np.exp(-1j * dphi)).real)
    dens = prefactor(cfg) * angular_factor(cfg.d_hat, k) * bracket
    return max(dens, 0.0)


def total_emission_rate(psi: np.ndarray, cfg: ExperimentConfig) -> float:
    """Photon emission rate A * sum_i ||S_i^- psi||^2, the full-sphere integral
    of the angular density up to the two-atom cross correction."""
    psi = np.asarray(psi, dtype=complex)
    validate_state(psi)
    a2 = np.abs(psi) ** 2
    return cfg.decay_rate * float(a2[2] + a2[3] + a2[1] + a2[3])


def reset_state(psi: np.ndarray, k_hat: np.ndarray,
                cfg: ExperimentConfig) -> tuple[np.ndarray | None, float]:
    """Collapsed state after detecting a photon in direction k_hat.

    Returns ``(state, weight)`` where ``weight`` equals the angular density at
    k_hat.  When the emission amplitudes cancel (destructive direction, or no
    excitation at all) there is no post-detection state and ``(None, weight)``
    is returned.
    """
    psi = np.asarray(psi, dtype=complex)
    validate_state(psi)
    k = sphere.check_unit(k_hat)
    p1, p2 = phase_factors(cfg, k)
    u1 = LOWER_1 @ psi
    u2 = LOWER_2 @ psi
    v = p1 * u1 + p2 * u2
    nv = float(np.linalg.norm(v))
    scale = float(np.linalg.norm(u1)) + float(np.linalg.norm(u2))
    weight = prefactor(cfg) * angular_factor(cfg.d_hat, k) * nv * nv
    weight = max(float(weight), 0.0)
    if scale == 0.0 or nv <= _RESET_EPS * scale:
        return None, weight
    return v / nv, weight


def cross_term_gamma(cfg: ExperimentConfig, n_theta: int = 256,
                     n_phi: int = 512) -> complex:
    """Two-atom interference correction to the integrated emission rate.

    gamma = (3A/8pi) * Int (1 - |d.k|^2) exp(-i k0 k.(r1-r2)) dOmega

    evaluated by spherical quadrature (Gauss-Legendre x uniform product rule).
    Equals A at zero separation and falls off on the wavelength scale, so the
    integrated rate is atom-local for well-separated atoms.
    """
    pts, w = sphere.quadrature(n_theta, n_phi)
    f = angular_factor(cfg.d_hat, pts)
    ph = np.exp(-1j * K0 * (pts @ (cfg.r1 - cfg.r2)))
    return complex(prefactor(cfg) * np.sum(w * f * ph))


def overlap_which_way(psi: np.ndarray) -> float:
    """Normalized overlap of the two one-photon-removed images of psi.

    |<S1 psi | S2 psi>| / (||S1 psi|| ||S2 psi||) is the degree to which the
    two emission pathways are indistinguishable: 1 gives full-contrast
    fringes, 0 means the photon carries complete which-atom information.
    If only one image vanishes the pathways are trivially distinguishable
    (returns 0); if both vanish the state cannot emit at all.
    """
    psi = np.asarray(psi, dtype=complex)
    validate_state(psi)
    u1 = LOWER_1 @ psi
    u2 = LOWER_2 @ psi
    n1 = float(np.linalg.norm(u1))
    n2 = float(np.linalg.norm(u2))
    if n1 <= 1e-12 and n2 <= 1e-12:
        raise NoEmissionError("state has no excited-state population; no photon is emitted")
    if n1 <= 1e-12 or n2 <= 1e-12:
        return 0.0
    return min(float(abs(np.vdot(u1, u2))) / (n1 * n2), 1.0)
