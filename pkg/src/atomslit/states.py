"""Hilbert-space helpers for a pair of two-level atoms.

The product basis is ordered |11>, |12>, |21>, |22>, where the first label
belongs to atom 1 (the slowest-varying index) and 1/2 denote the ground and
excited single-atom levels.  States are plain complex numpy vectors of length
4; density matrices are 4x4 complex arrays.
"""

from __future__ import annotations

import numpy as np

DIM = 4
LABELS = ("11", "12", "21", "22")

# single-atom operators in the {|1>, |2>} basis
SIGMA_MINUS = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)  # |1><2|
SIGMA_PLUS = SIGMA_MINUS.conj().T
_I2 = np.eye(2, dtype=complex)

# two-atom lowering operators, atom 1 acts on the left slot of the product
LOWER_1 = np.kron(SIGMA_MINUS, _I2)
LOWER_2 = np.kron(_I2, SIGMA_MINUS)
RAISE_1 = LOWER_1.conj().T
RAISE_2 = LOWER_2.conj().T

# total excitation number operator: diag(0, 1, 1, 2)
NUMBER_OP = RAISE_1 @ LOWER_1 + RAISE_2 @ LOWER_2

for _op in (SIGMA_MINUS, SIGMA_PLUS, LOWER_1, LOWER_2, RAISE_1, RAISE_2, NUMBER_OP):
    _op.setflags(write=False)


def basis_index(label: str) -> int:
    """Index of a product basis label such as "21" (atom 1 excited)."""
    try:
        return LABELS.index(label)
    except ValueError:
        raise ValueError(f"unknown basis label {label!r}; expected one of {LABELS}") from None


def ket(label: str) -> np.ndarray:
    """Basis vector for the given two-atom label."""
    v = np.zeros(DIM, dtype=complex)
    v[basis_index(label)] = 1.0
    return v


def tensor(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Tensor product with atom 1 as the left factor (Kronecker product)."""
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def lowering(atom: int) -> np.ndarray:
    """Lowering operator S_i^- = |1><2| acting on atom 1 or 2."""
    if atom == 1:
        return LOWER_1
    if atom == 2:
        return LOWER_2
    raise ValueError(f"atom must be 1 or 2, got {atom}")


def apply_lowering(psi: np.ndarray, atom: int) -> np.ndarray:
    return lowering(atom) @ np.asarray(psi, dtype=complex)


def inner(a: np.ndarray, b: np.ndarray) -> complex:
    """<a|b>, conjugate-linear in the first argument."""
    return complex(np.vdot(a, b))


def dm_from_pure(psi: np.ndarray) -> np.ndarray:
    """Projector |psi><psi| for a normalized state."""
    psi = np.asarray(psi, dtype=complex)
    validate_state(psi)
    return np.outer(psi, psi.conj())


def maximally_mixed() -> np.ndarray:
    return np.eye(DIM, dtype=complex) / DIM


def excitation_number(psi: np.ndarray) -> float:
    """Expectation of the total excitation number for a normalized state."""
    psi = np.asarray(psi, dtype=complex)
    return float(np.vdot(psi, NUMBER_OP @ psi).real)


def validate_state(psi: np.ndarray, tol: float = 1e-9) -> None:
    """Raise ValueError unless psi is a normalized length-4 state vector."""
    psi = np.asarray(psi)
    if psi.shape != (DIM,):
        raise ValueError(f"state must have shape ({DIM},), got {psi.shape}")
    norm = float(np.linalg.norm(psi))
    if abs(norm - 1.0) > tol:
        raise ValueError(f"state is not normalized: |psi| = {norm!r}")


def validate_density(rho: np.ndarray, herm_tol: float = 1e-12,
                     trace_tol: float = 1e-12, eig_tol: float = 1e-10) -> None:
    """Raise ValueError unless rho is a valid 4x4 density matrix.

    Checks Hermiticity and unit trace to ``herm_tol``/``trace_tol`` and
    positive semidefiniteness up to ``-eig_tol`` on the smallest eigenvalue.
    """
    rho = np.asarray(rho)
    if rho.shape != (DIM, DIM):
        raise ValueError(f"density matrix must have shape ({DIM},{DIM}), got {rho.shape}")
    if np.abs(rho - rho.conj().T).max() > herm_tol:
        raise ValueError("density matrix is not Hermitian")
    tr = complex(np.trace(rho))
    if abs(tr - 1.0) > trace_tol:
        raise ValueError(f"density matrix trace is {tr!r}, expected 1")
    lo = float(np.linalg.eigvalsh(0.5 * (rho + rho.conj().T)).min())
    if lo < -eig_tol:
        raise ValueError(f"density matrix has negative eigenvalue {lo!r}")
