"""Canonical diagonalization of the separable quadratic chain Hamiltonian.

With ``A = S S^T`` (Cholesky) the rescaled coordinates ``p = S^T q`` and
``x = S^-1 phi`` are canonical and ``H = 1/2 p^T p + 1/2 x^T (S^T B S) x``.
Diagonalizing ``K = S^T B S = U diag(nu^2) U^T`` gives the normal modes;
``V = S U`` maps mode fluxes back to site fluxes (``phi = V X``) and
``q = A^-1 V P``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy import linalg

from a2decouple.errors import InstabilityError, StabilityError
from a2decouple.io import write_csv
from a2decouple.lattice import CouplingKind, LatticeConfig, QuadraticModel

__all__ = [
    "ModeSet",
    "normal_modes",
    "reconstruct_hamiltonian",
    "symplectic_residual",
    "diagonalization_residual",
    "spectral_sum_residual",
    "write_modes_csv",
]

ZERO_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class ModeSet:
    frequencies: np.ndarray
    couplings: np.ndarray
    transform: np.ndarray
    config: LatticeConfig = field(repr=False)
    # uniform-flux (free) mode; kept only so the model can be rebuilt exactly
    zero_mode: np.ndarray = field(repr=False, default=None)
    zero_coupling: float = 0.0

    def __len__(self) -> int:
        return self.frequencies.size


def normal_modes(model: QuadraticModel) -> ModeSet:
    A, B, w = model.charge_matrix, model.flux_matrix, model.coupling_vector
    try:
        S = linalg.cholesky(A, lower=True)
    except linalg.LinAlgError as exc:
        raise StabilityError("charge matrix is not positive definite") from exc

    K = S.T @ B @ S
    K = 0.5 * (K + K.T)
    lam, U = linalg.eigh(K)
    scale = max(1.0, float(np.max(np.abs(lam))))
    tol = ZERO_TOL * scale
    if lam[0] < -tol:
        raise InstabilityError(f"negative mode eigenvalue {lam[0]:.3e}")
    zero = np.abs(lam) <= tol
    if zero.sum() != 1:
        raise InstabilityError(f"expected exactly one zero mode, found {int(zero.sum())}")

    (iz,) = np.nonzero(zero)
    keep = ~zero
    u0 = U[:, iz[0]]
    lam, U = lam[keep], U[:, keep]
    nu = np.sqrt(lam)

    V = S @ U
    v0 = S @ u0
    kind = model.config.coupling_kind
    if kind is CouplingKind.CAPACITIVE:
        # F = w.q = (V^T A^-1 w) . P with P_n = i sqrt(nu_n/2) (a^+ - a)
        Ainv_w = linalg.cho_solve((S, True), w)
        c = V.T @ Ainv_w
        c0 = float(v0 @ Ainv_w)
        amp = np.sqrt(nu / 2.0)
    else:
        # F = w.phi = (V^T w) . X with X_n = (a + a^+) / sqrt(2 nu_n)
        c = V.T @ w
        c0 = float(v0 @ w)
        amp = 1.0 / np.sqrt(2.0 * nu)

    # absorb signs into the mode definitions so every f_n >= 0
    sign = np.where(c < 0, -1.0, 1.0)
    V = V * sign
    f = np.abs(c) * amp

    order = np.argsort(nu, kind="stable")
    return ModeSet(
        frequencies=nu[order],
        couplings=f[order],
        transform=V[:, order],
        config=model.config,
        zero_mode=v0,
        zero_coupling=c0,
    )


def reconstruct_hamiltonian(modes: ModeSet) -> QuadraticModel:
    """Rebuild A, B and the coupling vector from a mode decomposition."""
    V, nu = modes.transform, modes.frequencies
    v0 = modes.zero_mode
    A = V @ V.T + np.outer(v0, v0)
    Ainv_V = np.linalg.solve(A, V)
    B = (Ainv_V * nu**2) @ Ainv_V.T
    B = 0.5 * (B + B.T)

    if modes.config.coupling_kind is CouplingKind.CAPACITIVE:
        c = modes.couplings / np.sqrt(nu / 2.0)
        w = V @ c + modes.zero_coupling * v0
    else:
        c = modes.couplings * np.sqrt(2.0 * nu)
        w = Ainv_V @ c + modes.zero_coupling * np.linalg.solve(A, v0)
    return QuadraticModel(A, B, w, modes.config)


def symplectic_residual(modes: ModeSet, model: QuadraticModel) -> float:
    """Max deviation of [X_n, P_m] = i delta_nm, i.e. of V^T A^-1 V from identity."""
    V = modes.transform
    G = V.T @ np.linalg.solve(model.charge_matrix, V)
    return float(np.max(np.abs(G - np.eye(G.shape[0]))))


def diagonalization_residual(modes: ModeSet, model: QuadraticModel) -> float:
    """Relative deviation of V^T B V from diag(nu^2)."""
    V, nu2 = modes.transform, modes.frequencies**2
    G = V.T @ model.flux_matrix @ V
    return float(np.max(np.abs(G - np.diag(nu2))) / max(nu2.max(), 1.0))


def spectral_sum_residual(modes: ModeSet, model: QuadraticModel) -> float:
    """Relative mismatch between sum(nu^2) and trace(A B)."""
    trace = float(np.sum(model.charge_matrix * model.flux_matrix.T))
    total = float(np.sum(modes.frequencies**2))
    return abs(total - trace) / abs(trace)


def write_modes_csv(modes: ModeSet, path: str | Path) -> Path:
    rows = ((n, nu, f) for n, (nu, f) in enumerate(zip(modes.frequencies, modes.couplings), 1))
    return write_csv(path, ["n", "nu_n", "f_n"], rows)
