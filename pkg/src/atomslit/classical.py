"""Classical reference model: two point dipoles oscillating at the optical
frequency, driven with fixed complex amplitudes.

This is the "what if the sources were antennas" benchmark for the quantum
pattern: same geometry, same far-field dipole factor, but the interference
contrast depends only on the amplitude ratio and never on saturation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import sphere
from .config import K0, _unit3

#: optical angular frequency in units where c = 1 (omega0 = k0)
OMEGA0 = K0


@dataclass(frozen=True)
class ClassicalConfig:
    """Two classical dipole sources with complex drive amplitudes e1, e2."""
    r1: np.ndarray
    r2: np.ndarray
    d_hat: np.ndarray
    e1: complex
    e2: complex
    prefactor: float = 1.0

    def __post_init__(self):
        r1 = np.asarray(self.r1, dtype=float)
        r2 = np.asarray(self.r2, dtype=float)
        if r1.shape != (3,) or r2.shape != (3,):
            raise ValueError("source positions r1, r2 must be 3-vectors")
        d = _unit3(self.d_hat, "d_hat")
        if not self.prefactor > 0:
            raise ValueError(f"prefactor must be positive, got {self.prefactor!r}")
        for a in (r1, r2, d):
            a.setflags(write=False)
        object.__setattr__(self, "r1", r1)
        object.__setattr__(self, "r2", r2)
        object.__setattr__(self, "d_hat", d)
        object.__setattr__(self, "e1", complex(self.e1))
        object.__setattr__(self, "e2", complex(self.e2))


def field_at(ccfg: ClassicalConfig, r_obs: np.ndarray, t: float = 0.0) -> np.ndarray:
    """Radiated field at observation point ``r_obs`` (complex 3-vector).

    Each source contributes its transverse dipole component with the exact
    1/distance amplitude falloff,

        E_i = (e_i / |R - r_i|) [ d - (k.d) k ] exp(-i k0 k.(R - r_i)) exp(-i w0 t),

    where k is the common unit direction from the source midpoint to R.  The
    common-direction approximation is what turns the two spherical waves into
    a simple two-path interference pattern in the far field.
    """
    r_obs = np.asarray(r_obs, dtype=float)
    if r_obs.shape != (3,):
        raise ValueError("observation point must be a 3-vector")
    mid = 0.5 * (ccfg.r1 + ccfg.r2)
    rel = r_obs - mid
    dist_mid = float(np.linalg.norm(rel))
    if dist_mid == 0.0:
        raise ValueError("observation point coincides with the source midpoint")
    k = rel / dist_mid
    trans = ccfg.d_hat - (k @ ccfg.d_hat) * k
    out = np.zeros(3, dtype=complex)
    for ri, ei in ((ccfg.r1, ccfg.e1), (ccfg.r2, ccfg.e2)):
        sep = r_obs - ri
        dist = float(np.linalg.norm(sep))
        if dist == 0.0:
            raise ValueError("observation point coincides with a source")
        out = out + (ei / dist) * trans * np.exp(-1j * K0 * (k @ sep))
    return out * np.exp(-1j * OMEGA0 * t)


def classical_intensity(ccfg: ClassicalConfig, k_hat: np.ndarray) -> float:
    """Far-field angular intensity (at unit reference distance)."""
    k = sphere.check_unit(k_hat)
    return float(classical_intensity_many(ccfg, k[None, :])[0])


def classical_intensity_many(ccfg: ClassicalConfig, k_hats: np.ndarray) -> np.ndarray:
    """Vectorized far-field intensity:

    I(k) = prefactor * (1-|d.k|^2) * [ |e1|^2 + |e2|^2
                                       + 2 Re( e1* e2 e^{-i k0 k.(r1-r2)} ) ]
    """
    k = np.asarray(k_hats, dtype=float)
    dot = k @ ccfg.d_hat
    f = 1.0 - dot * dot
    dphi = K0 * (k @ (ccfg.r1 - ccfg.r2))
    cross = np.conj(ccfg.e1) * ccfg.e2 * np.exp(-1j * dphi)
    bracket = abs(ccfg.e1) ** 2 + abs(ccfg.e2) ** 2 + 2.0 * cross.real
    return np.maximum(ccfg.prefactor * f * bracket, 0.0)


def classical_visibility(e1: complex, e2: complex) -> float:
    """Fringe contrast 2|e1||e2| / (|e1|^2 + |e2|^2) of the two-dipole pattern."""
    a1 = abs(complex(e1))
    a2 = abs(complex(e2))
    if a1 == 0.0 and a2 == 0.0:
        raise ValueError("both amplitudes vanish; the pattern has no intensity")
    return 2.0 * a1 * a2 / (a1 * a1 + a2 * a2)
