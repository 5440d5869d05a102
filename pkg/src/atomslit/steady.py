"""Driven-dissipative dynamics of the atom pair and its stationary state.

The reduced density matrix obeys

    drho/dt = -i [H, rho] + A sum_i ( S_i rho S_i+  -  1/2 {S_i+ S_i, rho} )

with the resonant-frame drive H = (1/2) sum_i (Omega_i S_i+ + Omega_i* S_i).
Because the atoms are coupled only through the classical laser, the
stationary state factorizes into single-atom stationary states, which gives
a closed form for the stationary angular emission pattern.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from . import sphere
from .config import ExperimentConfig, K0
from .emission import angular_factor, prefactor
from .states import DIM, LOWER_1, LOWER_2, RAISE_1, RAISE_2, ket, tensor


@dataclass(frozen=True)
class SteadyStateSolution:
    """Stationary density matrix with the residual ||drho/dt||_inf and the
    method that produced it ("closed_form_product" or "time_integration")."""
    rho: np.ndarray
    residual: float
    method: str


def single_atom_steady(omega: complex, decay_rate: float = 1.0) -> np.ndarray:
    """Stationary 2x2 density matrix of one resonantly driven atom.

    With D = A^2 + 2|Omega|^2 the excited population is |Omega|^2 / D and the
    coherence is <2|rho|1> = -i A Omega / D.  The coherence phase follows from
    the drive term (Omega/2) S+ in the Hamiltonian; it is what makes the
    product of two such states reproduce the two-atom interference pattern.
    """
    a = float(decay_rate)
    if not a > 0:
        raise ValueError(f"decay_rate must be positive, got {decay_rate!r}")
    o = complex(omega)
    d = a * a + 2.0 * abs(o) ** 2
    p = abs(o) ** 2 / d
    coh = -1j * a * o / d
    return np.array([[1.0 - p, np.conj(coh)], [coh, p]], dtype=complex)


def drive_hamiltonian(cfg: ExperimentConfig) -> np.ndarray:
    """Resonant-frame laser coupling (1/2) sum_i (Omega_i S_i+ + Omega_i* S_i)."""
    return 0.5 * (cfg.omega1 * RAISE_1 + np.conj(cfg.omega1) * LOWER_1
                  + cfg.omega2 * RAISE_2 + np.conj(cfg.omega2) * LOWER_2)


def master_rhs(rho: np.ndarray, cfg: ExperimentConfig) -> np.ndarray:
    """Right-hand side of the master equation (trace- and Hermiticity-preserving)."""
    rho = np.asarray(rho, dtype=complex)
    h = drive_hamiltonian(cfg)
    out = -1j * (h @ rho - rho @ h)
    a = cfg.decay_rate
    for lo, hi in ((LOWER_1, RAISE_1), (LOWER_2, RAISE_2)):
        n = hi @ lo
        out += a * (lo @ rho @ hi - 0.5 * (n @ rho + rho @ n))
    return out


def two_atom_steady(cfg: ExperimentConfig) -> SteadyStateSolution:
    """Stationary state as the product of single-atom stationary states."""
    rho = tensor(single_atom_steady(cfg.omega1, cfg.decay_rate),
                 single_atom_steady(cfg.omega2, cfg.decay_rate))
    res = float(np.abs(master_rhs(rho, cfg)).max())
    return SteadyStateSolution(rho=rho, residual=res, method="closed_form_product")


def time_integrate_to_steady(cfg: ExperimentConfig,
                             rho0: np.ndarray | None = None,
                             tol: float = 1e-10,
                             max_time: float = 2000.0,
                             rtol: float = 1e-10,
                             atol: float = 1e-12) -> SteadyStateSolution:
    """Integrate the master equation until the right-hand side is negligible.

    Serves as an independent route to the stationary state (adaptive explicit
    Runge-Kutta on the real and imaginary parts, steady-state detection via
    ||drho/dt||_inf < tol).  Starts from the two-atom ground state unless
    ``rho0`` is given.  Raises RuntimeError if ``max_time`` (in units of 1/A)
    passes without convergence.
    """
    if rho0 is None:
        g = ket("11")
        rho = np.outer(g, g.conj())
    else:
        rho = np.asarray(rho0, dtype=complex).copy()

    def rhs(_t, y):
        r = (y[:16] + 1j * y[16:]).reshape(DIM, DIM)
        d = master_rhs(r, cfg)
        return np.concatenate([d.real.ravel(), d.imag.ravel()])

    y = np.concatenate([rho.real.ravel(), rho.imag.ravel()])
    chunk = 20.0 / cfg.decay_rate
    t = 0.0
    while t < max_time:
        sol = solve_ivp(rhs, (0.0, chunk), y, method="RK45", rtol=rtol, atol=atol)
        if not sol.success:  # pragma: no cover - solver failure is pathological here
            raise RuntimeError(f"master-equation integration failed: {sol.message}")
        y = sol.y[:, -1]
        t += chunk
        rho = (y[:16] + 1j * y[16:]).reshape(DIM, DIM)
        res = float(np.abs(master_rhs(rho, cfg)).max())
        if res < tol:
            rho = 0.5 * (rho + rho.conj().T)
            rho = rho / np.trace(rho).real
            return SteadyStateSolution(rho=rho, residual=res, method="time_integration")
    raise RuntimeError(
        f"no steady state within t = {max_time!r}/A (residual {res!r} > tol {tol!r})")


def steady_total_rate(cfg: ExperimentConfig) -> float:
    """Stationary photon emission rate A * (p1 + p2) with p_i the excited
    populations; equals 2A|Omega|^2/(A^2+2|Omega|^2) for equal drives."""
    a = cfg.decay_rate
    p1 = abs(cfg.omega1) ** 2 / (a * a + 2.0 * abs(cfg.omega1) ** 2)
    p2 = abs(cfg.omega2) ** 2 / (a * a + 2.0 * abs(cfg.omega2) ** 2)
    return a * (p1 + p2)


def steady_emission_density(cfg: ExperimentConfig, k_hat: np.ndarray) -> float:
    """Closed-form stationary angular emission density.

    I(k) = pref * (1-|d.k|^2) / ((A^2+2|O1|^2)(A^2+2|O2|^2)) *
           [ 4|O1|^2|O2|^2 + A^2|O1|^2 + A^2|O2|^2
             + 2 A^2 Re( O1 conj(O2) e^{-i k0 k.(r1-r2)} ) ]

    This is exactly the mixed-state density evaluated at the product
    stationary state; the interference term inherits the coherence phases
    -i A Omega / D of the driven atoms.
    """
    k = sphere.check_unit(k_hat)
    return float(steady_emission_density_many(cfg, k[None, :])[0])


def steady_emission_density_many(cfg: ExperimentConfig, k_hats: np.ndarray) -> np.ndarray:
    """Vectorized ``steady_emission_density`` over an (N, 3) direction array."""
    k = np.asarray(k_hats, dtype=float)
    a2 = cfg.decay_rate ** 2
    o1, o2 = cfg.omega1, cfg.omega2
    m1, m2 = abs(o1) ** 2, abs(o2) ** 2
    d1 = a2 + 2.0 * m1
    d2 = a2 + 2.0 * m2
    dphi = K0 * (k @ (cfg.r1 - cfg.r2))
    cross = o1 * np.conj(o2) * np.exp(-1j * dphi)
    bracket = 4.0 * m1 * m2 + a2 * m1 + a2 * m2 + 2.0 * a2 * cross.real
    dens = prefactor(cfg) * angular_factor(cfg.d_hat, k) * bracket / (d1 * d2)
    return np.maximum(dens, 0.0)


def equal_drive_visibility(omega: float, decay_rate: float = 1.0) -> float:
    """Fringe visibility A^2/(A^2 + 2 Omega^2) for equal real drives."""
    a2 = float(decay_rate) ** 2
    return a2 / (a2 + 2.0 * abs(omega) ** 2)
