"""Transmon suspended over a transmission line: physical parameters to (d, delta).

Capacitances in farads, impedance in ohms, angular frequency in rad/s, so
that ``C Z omega`` is dimensionless. The emission rate into the line is only
ever reported as a ratio ``gamma(c) / gamma(1)`` with ``c = C_c / C_J``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace

import numpy as np
from scipy import constants, optimize

from a2decouple.errors import ConfigurationError, FitError, ParameterError
from a2decouple.spectral import AlphaSweep, decoupling_law

__all__ = [
    "PAPER_LAW",
    "FIG4B",
    "CircuitParams",
    "EmissionCurve",
    "ExtrapolationWarning",
    "map_circuit",
    "emission_ratio",
    "emission_ratio_no_A2",
    "emission_curve",
    "emission_peak",
    "end_to_end_ratio",
]

# (a, b) of 2 pi alpha = (1 + a delta)^(-b) quoted for the capacitive coupling
PAPER_LAW = (6.77, 2.57)


class ExtrapolationWarning(UserWarning):
    """Requested delta lies outside the range the decoupling law was fit on."""


@dataclass(frozen=True)
class CircuitParams:
    C_c: float
    C_J: float
    Z0: float
    omega0: float
    n_bar: float = 0.5

    def __post_init__(self):
        for name in ("C_c", "C_J", "Z0", "omega0", "n_bar"):
            value = getattr(self, name)
            if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
                raise ParameterError(f"{name} must be a positive number, got {value!r}")

    @property
    def C_sigma(self) -> float:
        return self.C_c + self.C_J

    @property
    def c(self) -> float:
        return self.C_c / self.C_J

    def at_relative_capacitance(self, c: float) -> "CircuitParams":
        return replace(self, C_c=c * self.C_J)


# C_J = 25 fF, Z0 = 50 Ohm, omega0 = 2 pi x 7.5 GHz, C_c = C_J
FIG4B = CircuitParams(C_c=25e-15, C_J=25e-15, Z0=50.0, omega0=2 * np.pi * 7.5e9)


@dataclass(frozen=True, eq=False)
class EmissionCurve:
    c_grid: np.ndarray
    ratio_with_A2: np.ndarray
    ratio_without_A2: np.ndarray
    kappa: float
    law_exponent: float = PAPER_LAW[1]
    law_coefficient: float = PAPER_LAW[0]


def map_circuit(params: CircuitParams, law_coefficient: float = PAPER_LAW[0]) -> tuple[float, float, float]:
    """Return ``(d, delta, kappa)``.

    ``delta = C_c^2 / C_sigma * Z0 * omega0`` and
    ``d = C_c / C_sigma * 2 e n_bar * sqrt(Z0 / hbar)``; the ``sqrt(hbar)``
    is what makes the dipole dimensionless in the core's units, where it
    multiplies couplings normalized as ``f_k^2 = nu_k / (2 L)``.
    """
    ratio = params.C_c / params.C_sigma
    delta = params.C_c * ratio * params.Z0 * params.omega0
    d = ratio * 2.0 * constants.e * params.n_bar * math.sqrt(params.Z0 / constants.hbar)
    kappa = law_coefficient * params.C_J * params.Z0 * params.omega0
    return d, delta, kappa


def emission_ratio_no_A2(c):
    c = np.asarray(c, dtype=float)
    return 4.0 * c**2 / (1.0 + c) ** 2


def emission_ratio(c, kappa: float, b: float = PAPER_LAW[1]):
    c = np.asarray(c, dtype=float)
    if np.any(c <= 0):
        raise ParameterError("c must be positive")
    if kappa < 0:
        raise ParameterError("kappa must be >= 0")
    renorm = (1.0 + kappa / 2.0) / (1.0 + kappa * c**2 / (1.0 + c))
    return emission_ratio_no_A2(c) * renorm**b


def emission_curve(params: CircuitParams, c_grid, law: tuple[float, float] = PAPER_LAW) -> EmissionCurve:
    c_grid = np.asarray(c_grid, dtype=float)
    if c_grid.size == 0 or np.any(c_grid <= 0):
        raise ParameterError("c grid must be nonempty and positive")
    a, b = law
    _, _, kappa = map_circuit(params, a)
    return EmissionCurve(
        c_grid=c_grid,
        ratio_with_A2=emission_ratio(c_grid, kappa, b),
        ratio_without_A2=emission_ratio_no_A2(c_grid),
        kappa=kappa,
        law_exponent=b,
        law_coefficient=a,
    )


def emission_peak(kappa: float, b: float = PAPER_LAW[1], c_max: float = 10.0,
                  n_grid: int = 2001) -> float | None:
    """Location of the interior maximum of the with-A^2 ratio on (0, c_max].

    Dense grid to bracket, golden-section to refine. Returns None when the
    maximum sits on the boundary (monotonic curve).
    """
    grid = np.linspace(c_max / n_grid, c_max, n_grid)
    vals = emission_ratio(grid, kappa, b)
    i = int(np.argmax(vals))
    if i == 0 or i == grid.size - 1:
        return None
    res = optimize.minimize_scalar(
        lambda c: -float(emission_ratio(c, kappa, b)),
        bracket=(grid[i - 1], grid[i], grid[i + 1]),
        method="golden",
        tol=1e-12,
    )
    return float(res.x)


def end_to_end_ratio(params_at_c: CircuitParams, params_at_1: CircuitParams, sweep: AlphaSweep) -> float:
    """``d^2 alpha(delta)`` at ``params_at_c`` over the same at ``params_at_1``.

    ``alpha`` is read from the sweep's fitted decoupling law.
    """
    for name in ("C_J", "Z0", "omega0", "n_bar"):
        if getattr(params_at_c, name) != getattr(params_at_1, name):
            raise ConfigurationError(f"parameter sets differ in {name}")
    if sweep.law_fit is None:
        raise FitError("sweep has no decoupling-law fit")
    law = sweep.law_fit
    lo, hi = float(np.min(sweep.deltas)), float(np.max(sweep.deltas))

    def weight(p):
        d, delta, _ = map_circuit(p, law.a)
        if not lo <= delta <= hi:
            warnings.warn(f"delta={delta:.4g} outside fitted range [{lo}, {hi}]",
                          ExtrapolationWarning, stacklevel=3)
        return d**2 * float(decoupling_law(delta, law.a, law.b))

    return weight(params_at_c) / weight(params_at_1)
