"""Discretized waveguide as a periodic chain of coupled oscillators.

Dimensionless units throughout: the qubit gap, the speed of light in the line
and hbar are all one. The Hamiltonian is stored as two quadratic forms,

    H = 1/2 q^T A q + 1/2 phi^T B phi,

with the diamagnetic term ``delta * F**2`` already folded into ``A``
(capacitive coupling, F ~ q at the qubit site) or ``B`` (inductive coupling,
F ~ flux difference across the qubit link).
"""

from __future__ import annotations

import enum
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from a2decouple.errors import ConfigurationError

__all__ = [
    "CoarseLatticeWarning",
    "CouplingKind",
    "LatticeConfig",
    "QuadraticModel",
    "build_chain",
    "dump_model",
    "DEFAULT_LENGTH",
]

# L = 10 wavelengths of the qubit transition, in units of v / omega_0
DEFAULT_LENGTH = 20.0 * np.pi

QUBIT_SITE = 0


class CoarseLatticeWarning(UserWarning):
    """The lattice cutoff is not well above the qubit frequency."""


class CouplingKind(str, enum.Enum):
    CAPACITIVE = "cq"
    INDUCTIVE = "fq"

    @classmethod
    def parse(cls, value: "CouplingKind | str") -> "CouplingKind":
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower()
        aliases = {"cq": cls.CAPACITIVE, "capacitive": cls.CAPACITIVE,
                   "fq": cls.INDUCTIVE, "inductive": cls.INDUCTIVE}
        if key not in aliases:
            raise ConfigurationError(f"unknown coupling kind {value!r} (use cq or fq)")
        return aliases[key]


@dataclass(frozen=True)
class LatticeConfig:
    """Discretization and coupling parameters of one chain.

    ``length`` is the dimensionless line length L*omega_0/v; the default
    corresponds to ten qubit wavelengths.
    """

    M: int
    length: float = DEFAULT_LENGTH
    coupling_kind: CouplingKind = CouplingKind.CAPACITIVE
    delta: float = 0.0
    dipole: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "coupling_kind", CouplingKind.parse(self.coupling_kind))
        if isinstance(self.M, bool) or int(self.M) != self.M:
            raise ConfigurationError(f"M must be an integer, got {self.M!r}")
        object.__setattr__(self, "M", int(self.M))
        if self.M < 4 or self.M % 2:
            raise ConfigurationError(f"M must be even and >= 4, got {self.M}")
        if not np.isfinite(self.length) or self.length <= 0:
            raise ConfigurationError(f"length must be positive, got {self.length}")
        if not np.isfinite(self.delta) or self.delta < 0:
            raise ConfigurationError(f"delta must be >= 0, got {self.delta}")
        if not np.isfinite(self.dipole) or self.dipole < 0:
            raise ConfigurationError(f"dipole must be >= 0, got {self.dipole}")
        if self.cutoff < 10:
            warnings.warn(
                f"cutoff nu_c = {self.cutoff:.3g} < 10 (M={self.M}, L={self.length:.4g})",
                CoarseLatticeWarning,
                stacklevel=3,
            )

    @property
    def spacing(self) -> float:
        return self.length / self.M

    @property
    def cutoff(self) -> float:
        return self.M / self.length


@dataclass(frozen=True, eq=False)
class QuadraticModel:
    charge_matrix: np.ndarray
    flux_matrix: np.ndarray
    coupling_vector: np.ndarray
    config: LatticeConfig = field(repr=False)

    @property
    def M(self) -> int:
        return self.config.M


def second_difference(M: int) -> np.ndarray:
    """Periodic second-difference matrix (2 on the diagonal, -1 on the ring)."""
    lap = 2.0 * np.eye(M)
    idx = np.arange(M)
    lap[idx, (idx + 1) % M] = -1.0
    lap[idx, (idx - 1) % M] = -1.0
    return lap


def build_chain(config: LatticeConfig) -> QuadraticModel:
    M, dx = config.M, config.spacing
    A = np.eye(M)
    B = config.cutoff**2 * second_difference(M)
    w = np.zeros(M)
    if config.coupling_kind is CouplingKind.CAPACITIVE:
        # F = dx^(-1/2) q_0; delta F^2 = 1/2 (2 delta / dx) q_0^2
        w[QUBIT_SITE] = dx**-0.5
        A[QUBIT_SITE, QUBIT_SITE] += 2.0 * config.delta / dx
    else:
        # F = dx^(-3/2) (phi_1 - phi_0)
        diff = np.zeros(M)
        diff[QUBIT_SITE + 1] = 1.0
        diff[QUBIT_SITE] = -1.0
        w = dx**-1.5 * diff
        B = B + (2.0 * config.delta / dx**3) * np.outer(diff, diff)
    return QuadraticModel(A, B, w, config)


def dump_model(model: QuadraticModel, path: str | Path, tol: float = 0.0) -> Path:
    """Write dimensions, config and the nonzero matrix entries as plain text."""
    path = Path(path)
    cfg = model.config
    lines = [
        f"M={cfg.M}",
        f"length={cfg.length!r}",
        f"spacing={cfg.spacing!r}",
        f"cutoff={cfg.cutoff!r}",
        f"coupling_kind={cfg.coupling_kind.value}",
        f"delta={cfg.delta!r}",
        f"dipole={cfg.dipole!r}",
    ]
    for name, mat in (("charge_matrix", model.charge_matrix), ("flux_matrix", model.flux_matrix)):
        rows, cols = np.nonzero(np.abs(mat) > tol)
        lines.append(f"[{name}] shape={mat.shape[0]}x{mat.shape[1]} nnz={rows.size}")
        lines.extend(f"{i} {j} {mat[i, j]:.17g}" for i, j in zip(rows, cols))
    (nz,) = np.nonzero(np.abs(model.coupling_vector) > tol)
    lines.append(f"[coupling_vector] length={model.coupling_vector.size} nnz={nz.size}")
    lines.extend(f"{i} {model.coupling_vector[i]:.17g}" for i in nz)
    path.write_text("\n".join(lines) + "\n")
    return path
