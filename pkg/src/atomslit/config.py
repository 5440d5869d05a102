"""Experiment geometry and drive parameters.

Natural units throughout: the spontaneous decay rate A sets the unit of
time (A = 1 by default) and the transition wavelength lambda0 sets the unit
of length, so the free-space wavenumber is k0 = 2*pi.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

#: free-space wavenumber for lambda0 = 1
K0 = 2.0 * np.pi


def _unit3(v, name: str, tol: float = 1e-12) -> np.ndarray:
    a = np.asarray(v, dtype=float)
    if a.shape != (3,):
        raise ValueError(f"{name} must be a 3-vector, got shape {a.shape}")
    n = float(np.linalg.norm(a))
    if abs(n - 1.0) > tol:
        raise ValueError(f"{name} must be a unit vector (|{name}| = {n!r})")
    return a


@dataclass(frozen=True)
class ExperimentConfig:
    """Two fixed atoms, their common dipole orientation and laser drive.

    r1, r2      atom positions (units of lambda0)
    d_hat       unit transition-dipole direction, shared by both atoms
    decay_rate  spontaneous emission rate A of each atom
    omega1/2    complex Rabi frequencies of the driving laser at each atom
    """

    r1: np.ndarray
    r2: np.ndarray
    d_hat: np.ndarray
    decay_rate: float = 1.0
    omega1: complex = 0.0
    omega2: complex = 0.0

    def __post_init__(self):
        r1 = np.asarray(self.r1, dtype=float)
        r2 = np.asarray(self.r2, dtype=float)
        if r1.shape != (3,) or r2.shape != (3,):
            raise ValueError("atom positions r1, r2 must be 3-vectors")
        d = _unit3(self.d_hat, "d_hat")
        if not self.decay_rate > 0:
            raise ValueError(f"decay_rate must be positive, got {self.decay_rate!r}")
        for a in (r1, r2, d):
            a.setflags(write=False)
        object.__setattr__(self, "r1", r1)
        object.__setattr__(self, "r2", r2)
        object.__setattr__(self, "d_hat", d)
        object.__setattr__(self, "omega1", complex(self.omega1))
        object.__setattr__(self, "omega2", complex(self.omega2))

    @property
    def separation(self) -> float:
        return float(np.linalg.norm(self.r1 - self.r2))

    def key(self) -> tuple:
        """Hashable identity, used for caching derived operators."""
        return (tuple(self.r1), tuple(self.r2), tuple(self.d_hat),
                self.decay_rate, self.omega1, self.omega2)


def standard_config(separation: float = 20.0,
                    omega1: complex = 0.3,
                    omega2: complex = 0.3,
                    decay_rate: float = 1.0,
                    axis: Sequence[float] = (0.0, 0.0, 1.0),
                    dipole: Sequence[float] = (1.0, 0.0, 0.0)) -> ExperimentConfig:
    """Symmetric default geometry: atoms at +-(separation/2) along ``axis``.

    The default dipole is perpendicular to the separation axis, which keeps
    the angular dipole factor constant along the scan used for fringe
    analysis.
    """
    ax = np.asarray(axis, dtype=float)
    n = float(np.linalg.norm(ax))
    if n == 0:
        raise ValueError("axis must be a nonzero vector")
    ax = ax / n
    d = np.asarray(dipole, dtype=float)
    nd = float(np.linalg.norm(d))
    if nd == 0:
        raise ValueError("dipole must be a nonzero vector")
    return ExperimentConfig(r1=0.5 * separation * ax,
                            r2=-0.5 * separation * ax,
                            d_hat=d / nd,
                            decay_rate=decay_rate,
                            omega1=omega1, omega2=omega2)


def config_to_dict(cfg: ExperimentConfig) -> dict:
    """JSON-serializable form, used in output metadata sidecars."""
    def cplx(z: complex):
        return [z.real, z.imag]
    return {
        "r1": list(cfg.r1),
        "r2": list(cfg.r2),
        "d_hat": list(cfg.d_hat),
        "decay_rate": cfg.decay_rate,
        "omega1": cplx(cfg.omega1),
        "omega2": cplx(cfg.omega2),
    }


def config_from_dict(d: dict) -> ExperimentConfig:
    def cplx(v) -> complex:
        if isinstance(v, (int, float)):
            return complex(v)
        re, im = v
        return complex(re, im)
    return ExperimentConfig(
        r1=np.asarray(d["r1"], dtype=float),
        r2=np.asarray(d["r2"], dtype=float),
        d_hat=np.asarray(d["d_hat"], dtype=float),
        decay_rate=float(d["decay_rate"]),
        omega1=cplx(d["omega1"]),
        omega2=cplx(d["omega2"]),
    )
