"""Spectral functions from mode sets.

The cumulative coupling ``D(nu) = 2 pi sum_{nu_n <= nu} d^2 f_n^2`` is a
staircase. It is fit to a power law and the fit is differentiated to give
``J(nu) = 2 pi alpha d^2 nu^s``; ``alpha`` is then extrapolated to vanishing
lattice spacing and swept over the diamagnetic weight ``delta``.
"""

from __future__ import annotations

import logging
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize

from a2decouple.errors import ConfigurationError, FitError
from a2decouple.lattice import DEFAULT_LENGTH, CoarseLatticeWarning, CouplingKind, LatticeConfig, build_chain
from a2decouple.modes import ModeSet, normal_modes

__all__ = [
    "CumulativeCurve",
    "SpectralFit",
    "LawFit",
    "AlphaEntry",
    "AlphaSweep",
    "DEFAULT_WINDOW",
    "cumulative_coupling",
    "fit_power_law",
    "extrapolate_continuum",
    "fit_decoupling_law",
    "decoupling_law",
    "alpha_for",
    "sweep_delta",
]

log = logging.getLogger(__name__)

DEFAULT_WINDOW = (0.2, 2.0)
MIN_SAMPLES = 10
# relative frequency tolerance used to merge degenerate modes
DEGENERACY_TOL = 1e-8
# steps smaller than this (relative to the total weight) belong to decoupled modes
NULL_STEP_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class CumulativeCurve:
    """Staircase samples of D(nu).

    ``D_values`` holds the right limit at each distinct frequency (all modes
    with ``nu_n <= nu`` counted) and ``D_below`` the left limit. Smooth
    curves simply have ``D_below == D_values``.
    """

    nu_grid: np.ndarray
    D_values: np.ndarray
    D_below: np.ndarray = None

    def __post_init__(self):
        nu = np.asarray(self.nu_grid, dtype=float)
        D = np.asarray(self.D_values, dtype=float)
        below = D if self.D_below is None else np.asarray(self.D_below, dtype=float)
        if nu.ndim != 1 or nu.shape != D.shape or below.shape != D.shape:
            raise ConfigurationError("nu_grid, D_values and D_below must be 1D and equal length")
        if nu.size == 0:
            raise ConfigurationError("empty cumulative curve")
        object.__setattr__(self, "nu_grid", nu)
        object.__setattr__(self, "D_values", D)
        object.__setattr__(self, "D_below", below)

    @property
    def steps(self) -> np.ndarray:
        return self.D_values - self.D_below

    def __call__(self, nu) -> np.ndarray:
        """Right-continuous staircase evaluation; zero below the first mode."""
        idx = np.searchsorted(self.nu_grid, np.asarray(nu, dtype=float), side="right") - 1
        vals = np.where(idx >= 0, self.D_values[np.clip(idx, 0, None)], 0.0)
        return vals if np.ndim(nu) else float(vals)


@dataclass(frozen=True)
class SpectralFit:
    prefactor: float
    exponent: float
    fit_window: tuple[float, float]
    residual: float
    n_samples: int = 0

    def J(self, nu) -> np.ndarray:
        return self.prefactor * np.asarray(nu, dtype=float) ** self.exponent

    def alpha(self, dipole: float = 1.0) -> float:
        return self.prefactor / (2.0 * np.pi * dipole**2)


@dataclass(frozen=True)
class LawFit:
    """``2 pi alpha(delta) = (1 + a delta)^(-b)``; ``source`` names the alpha values fitted."""

    a: float
    b: float
    residual: float
    source: str = "continuum"

    def two_pi_alpha(self, delta) -> np.ndarray:
        return decoupling_law(delta, self.a, self.b)


@dataclass(frozen=True)
class AlphaEntry:
    delta: float
    M: int
    spacing: float
    alpha: float
    exponent: float


@dataclass(eq=False)
class AlphaSweep:
    coupling_kind: CouplingKind
    length: float
    window: tuple[float, float]
    entries: list[AlphaEntry]
    extrapolated: list[tuple[float, float]]
    exponents: list[tuple[float, float]]
    law_fit: LawFit | None = None
    notes: list[str] = field(default_factory=list)

    @property
    def deltas(self) -> np.ndarray:
        return np.array([d for d, _ in self.extrapolated])

    @property
    def alpha_continuum(self) -> np.ndarray:
        return np.array([a for _, a in self.extrapolated])

    def alpha_at(self, M: int) -> np.ndarray:
        table = {e.delta: e.alpha for e in self.entries if e.M == M}
        return np.array([table[d] for d in self.deltas])

    @property
    def finest_M(self) -> int:
        return max(e.M for e in self.entries)

    @property
    def continuum_is_decoupling(self) -> bool:
        """Extrapolated alpha positive and strictly decreasing in delta."""
        order = np.argsort(self.deltas)
        a = self.alpha_continuum[order]
        return bool(np.all(a > 0) and np.all(np.diff(a) < 0))


def cumulative_coupling(modes: ModeSet, dipole: float = 1.0) -> CumulativeCurve:
    nu = np.asarray(modes.frequencies, dtype=float)
    if nu.size == 0:
        raise ConfigurationError("empty mode set")
    weight = 2.0 * np.pi * dipole**2 * np.asarray(modes.couplings, dtype=float) ** 2
    order = np.argsort(nu, kind="stable")
    nu, weight = nu[order], weight[order]

    # new group wherever the gap to the previous mode exceeds the tolerance
    tol = DEGENERACY_TOL * nu[-1]
    starts = np.concatenate(([0], np.nonzero(np.diff(nu) > tol)[0] + 1))
    group_weight = np.add.reduceat(weight, starts)
    D = np.cumsum(group_weight)
    return CumulativeCurve(nu[starts], D, D - group_weight)


def fit_power_law(
    curve: CumulativeCurve,
    window: tuple[float, float] = DEFAULT_WINDOW,
    exponent: float | None = None,
) -> SpectralFit:
    """Fit ``D = C nu^(s+1)`` on ``window`` by log-log least squares.

    Staircase samples are taken at mid-riser, ``(D_below + D_values) / 2``,
    which removes the half-step bias of sampling a staircase at its corners.
    Samples whose step is zero (modes that do not couple) are not risers and
    are skipped. Passing ``exponent`` pins ``s`` and fits only ``C``.
    The returned fit describes ``J = dD/dnu = C (s+1) nu^s``.
    """
    lo, hi = map(float, window)
    if not lo < hi:
        raise FitError(f"invalid fit window {window}")
    nu, D = curve.nu_grid, curve.D_values
    steps = curve.steps
    total = float(np.max(np.abs(D))) if D.size else 0.0
    has_steps = np.any(steps != 0)
    y = 0.5 * (curve.D_below + D)
    mask = (nu >= lo) & (nu <= hi)
    if has_steps:
        mask &= steps > NULL_STEP_TOL * total
    x, y = nu[mask], y[mask]
    if x.size < MIN_SAMPLES:
        raise FitError(f"only {x.size} samples in window [{lo}, {hi}] (need {MIN_SAMPLES})")
    if np.any(y <= 0) or np.any(x <= 0):
        raise FitError("nonpositive values in fit window")

    lx, ly = np.log(x), np.log(y)
    if exponent is None:
        slope, intercept = np.polyfit(lx, ly, 1)
        s = slope - 1.0
    else:
        s = float(exponent)
        intercept = float(np.mean(ly - (s + 1.0) * lx))
    C = np.exp(intercept)
    model = C * x ** (s + 1.0)
    residual = float(np.sqrt(np.mean((model / y - 1.0) ** 2)))
    return SpectralFit(
        prefactor=float(C * (s + 1.0)),
        exponent=float(s),
        fit_window=(float(x.min()), float(x.max())),
        residual=residual,
        n_samples=int(x.size),
    )


def extrapolate_continuum(series) -> float:
    """Value at zero spacing from a least-squares fit ``v0 + c1 h + c2 h^2``."""
    pts = np.asarray(list(series), dtype=float)
    if pts.ndim != 2 or pts.shape[0] < 3 or pts.shape[1] != 2:
        raise FitError("need at least 3 (spacing, value) pairs")
    h, v = pts[:, 0], pts[:, 1]
    if np.unique(h).size != h.size:
        raise FitError("duplicate spacings in extrapolation series")
    design = np.vander(h, 3, increasing=True)
    coef, *_ = np.linalg.lstsq(design, v, rcond=None)
    return float(coef[0])


def decoupling_law(delta, a: float, b: float):
    return (1.0 + a * np.asarray(delta, dtype=float)) ** (-b)


def fit_decoupling_law(deltas, two_pi_alpha, source: str = "continuum") -> LawFit:
    """Fit ``2 pi alpha = (1 + a delta)^(-b)`` in log space.

    For a trial ``a`` the best ``b`` is a regression through the origin of
    ``log(2 pi alpha)`` on ``log(1 + a delta)``; ``a`` is then optimized.
    """
    x = np.asarray(deltas, dtype=float)
    y = np.asarray(two_pi_alpha, dtype=float)
    if x.shape != y.shape or x.size < 2:
        raise FitError("need matching delta/alpha arrays with at least 2 points")
    if np.any(y <= 0):
        bad = x[y <= 0]
        raise FitError(f"nonpositive 2*pi*alpha at delta={bad.tolist()}; law fit undefined")
    if np.count_nonzero(x > 0) < 2:
        raise FitError("need at least 2 points with delta > 0")
    ly = np.log(y)

    def best_b(a):
        lx = np.log1p(a * x)
        b = -float(lx @ ly) / float(lx @ lx)
        return b, float(np.sqrt(np.mean((ly + b * lx) ** 2)))

    def objective(log_a):
        return best_b(np.exp(log_a))[1]

    # coarse scan then bounded refinement, both in log a
    grid = np.linspace(np.log(1e-3), np.log(1e4), 221)
    vals = [objective(g) for g in grid]
    i = int(np.argmin(vals))
    lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, grid.size - 1)]
    res = optimize.minimize_scalar(objective, bounds=(lo, hi), method="bounded",
                                   options={"xatol": 1e-12})
    a = float(np.exp(res.x))
    b, resid = best_b(a)
    return LawFit(a=a, b=b, residual=resid, source=source)


def alpha_for(config: LatticeConfig, window=DEFAULT_WINDOW) -> tuple[float, float]:
    """(alpha from an Ohmic fit, free exponent) for a single lattice."""
    modes = normal_modes(build_chain(config))
    curve = cumulative_coupling(modes, config.dipole)
    ohmic = fit_power_law(curve, window, exponent=1.0)
    free = fit_power_law(curve, window)
    return ohmic.alpha(config.dipole), free.exponent


def _sweep_point(args):
    delta, M, kind, length, window = args
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", CoarseLatticeWarning)
        cfg = LatticeConfig(M=M, length=length, coupling_kind=kind, delta=delta)
    alpha, s = alpha_for(cfg, window)
    return AlphaEntry(delta=float(delta), M=int(M), spacing=cfg.spacing, alpha=alpha, exponent=s)


def sweep_delta(
    deltas,
    coupling_kind: CouplingKind | str = CouplingKind.CAPACITIVE,
    M_list=(40, 80, 160, 320),
    length: float = DEFAULT_LENGTH,
    window: tuple[float, float] = DEFAULT_WINDOW,
    workers: int | None = None,
) -> AlphaSweep:
    """Ohmic coefficient over a (delta, M) grid, extrapolated to zero spacing.

    The decoupling law is fit to the extrapolated values. When that is not
    possible (an extrapolated alpha is nonpositive) the law is fit to the
    finest lattice instead; ``law_fit.source`` records which was used and the
    reason is appended to ``notes``.
    """
    kind = CouplingKind.parse(coupling_kind)
    deltas = [float(d) for d in deltas]
    M_list = sorted(int(m) for m in M_list)
    if not deltas or not M_list:
        raise ConfigurationError("deltas and M_list must be nonempty")
    if any(d < 0 for d in deltas):
        raise ConfigurationError("all deltas must be >= 0")
    if len(set(deltas)) != len(deltas):
        raise ConfigurationError("duplicate deltas")
    if len(M_list) < 3 or len(set(M_list)) != len(M_list):
        raise ConfigurationError("need at least 3 distinct M values to extrapolate")

    tasks = [(d, M, kind, float(length), tuple(window)) for d in deltas for M in M_list]
    if workers and workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            entries = list(pool.map(_sweep_point, tasks))
    else:
        entries = [_sweep_point(t) for t in tasks]

    extrapolated, exponents = [], []
    for d in deltas:
        rows = [e for e in entries if e.delta == d]
        extrapolated.append((d, extrapolate_continuum((e.spacing, e.alpha) for e in rows)))
        exponents.append((d, extrapolate_continuum((e.spacing, e.exponent) for e in rows)))

    sweep = AlphaSweep(kind, float(length), tuple(window), entries, extrapolated, exponents)
    if sum(d > 0 for d in deltas) < 2:
        return sweep
    x = np.array(deltas)
    try:
        sweep.law_fit = fit_decoupling_law(x, 2 * np.pi * sweep.alpha_continuum, "continuum")
    except FitError as exc:
        msg = f"continuum law fit failed ({exc}); fitted M={sweep.finest_M} instead"
        log.warning(msg)
        sweep.notes.append(msg)
        sweep.law_fit = fit_decoupling_law(
            x, 2 * np.pi * sweep.alpha_at(sweep.finest_M), f"M={sweep.finest_M}"
        )
    return sweep
