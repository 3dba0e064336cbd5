"""Diamagnetic renormalization of the Ohmic coupling of a qubit to a 1D waveguide."""

__version__ = "0.1.0"

from a2decouple.circuit import (  # noqa: E402
    FIG4B,
    PAPER_LAW,
    CircuitParams,
    EmissionCurve,
    emission_curve,
    emission_peak,
    emission_ratio,
    emission_ratio_no_A2,
    end_to_end_ratio,
    map_circuit,
)
from a2decouple.errors import (  # noqa: E402
    A2Error,
    ConfigurationError,
    FitError,
    InstabilityError,
    ParameterError,
    StabilityError,
)
from a2decouple.lattice import CouplingKind, LatticeConfig, QuadraticModel, build_chain  # noqa: E402
from a2decouple.modes import ModeSet, normal_modes, reconstruct_hamiltonian  # noqa: E402
from a2decouple.spectral import (  # noqa: E402
    AlphaSweep,
    CumulativeCurve,
    LawFit,
    SpectralFit,
    cumulative_coupling,
    extrapolate_continuum,
    fit_decoupling_law,
    fit_power_law,
    sweep_delta,
)
