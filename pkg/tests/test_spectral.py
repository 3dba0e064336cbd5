import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from a2decouple.errors import ConfigurationError, FitError
from a2decouple.lattice import LatticeConfig, build_chain
from a2decouple.modes import ModeSet, normal_modes
from a2decouple.spectral import (
    CumulativeCurve,
    cumulative_coupling,
    decoupling_law,
    extrapolate_continuum,
    fit_decoupling_law,
    fit_power_law,
    sweep_delta,
)

L20 = 20 * np.pi


def modes_for(M, delta=0.0, kind="cq"):
    return normal_modes(build_chain(LatticeConfig(M=M, length=L20, coupling_kind=kind, delta=delta)))


def plane_wave_staircase(M, length, dipole=1.0):
    """Right limits of D at each distinct frequency, from the analytic bare chain."""
    dx = length / M
    m = np.arange(1, M // 2 + 1)
    nu = 2 / dx * np.sin(np.pi * m / M)
    mult = np.where(m == M // 2, 1, 2)
    step = 2 * np.pi * dipole**2 * mult * nu / (2 * length)
    return nu, np.cumsum(step)


# cumulative_coupling

def test_cumulative_zero_below_first_mode():
    curve = cumulative_coupling(modes_for(64))
    assert curve(0.5 * curve.nu_grid[0]) == 0.0
    assert curve.D_below[0] == 0.0


def test_cumulative_matches_plane_waves_m320():
    curve = cumulative_coupling(modes_for(320), dipole=1.3)
    nu_ref, D_ref = plane_wave_staircase(320, L20, dipole=1.3)
    np.testing.assert_allclose(curve.nu_grid, nu_ref, rtol=1e-10)
    np.testing.assert_allclose(curve.D_values, D_ref, rtol=1e-9)


def test_cumulative_continuum_shape():
    # mid-riser staircase follows nu^2 / 2 at low frequency
    curve = cumulative_coupling(modes_for(320))
    mid = 0.5 * (curve.D_values + curve.D_below)
    sel = (curve.nu_grid > 0.2) & (curve.nu_grid < 1.0)
    np.testing.assert_allclose(mid[sel], curve.nu_grid[sel] ** 2 / 2, rtol=0.02)


def test_cumulative_degenerate_pairs_merged():
    curve = cumulative_coupling(modes_for(64))
    assert curve.nu_grid.size == 32


@pytest.mark.parametrize("delta", [0.0, 0.5])
def test_cumulative_nondecreasing(delta):
    curve = cumulative_coupling(modes_for(96, delta))
    assert np.all(np.diff(curve.D_values) >= 0)
    assert np.all(curve.steps >= 0)


def test_cumulative_empty():
    empty = ModeSet(np.array([]), np.array([]), np.zeros((4, 0)), LatticeConfig(M=4, length=1.0))
    with pytest.raises(ConfigurationError):
        cumulative_coupling(empty)


# fit_power_law

def test_fit_exact_power_law():
    nu = np.linspace(0.1, 3.0, 40)
    fit = fit_power_law(CumulativeCurve(nu, nu**2))
    assert fit.prefactor == pytest.approx(2.0, abs=1e-10)
    assert fit.exponent == pytest.approx(1.0, abs=1e-10)
    assert fit.residual < 1e-12


def test_fit_forced_exponent():
    nu = np.linspace(0.1, 3.0, 40)
    fit = fit_power_law(CumulativeCurve(nu, 0.7 * nu**2), exponent=1.0)
    assert fit.exponent == 1.0
    assert fit.prefactor == pytest.approx(1.4, rel=1e-12)
    assert fit.alpha() == pytest.approx(1.4 / (2 * np.pi), rel=1e-12)


def test_fit_alternating_noise():
    rng = np.random.default_rng(20141)
    nu = np.sort(rng.uniform(0.2, 2.0, 60))
    noise = 1 + 0.01 * (-1) ** np.arange(nu.size)
    fit = fit_power_law(CumulativeCurve(nu, 0.5 * nu**2 * noise))
    assert abs(fit.exponent - 1.0) <= 0.03


def test_fit_bare_chain_m320():
    fit = fit_power_law(cumulative_coupling(modes_for(320)), (0.2, 2.0))
    assert fit.exponent == pytest.approx(1.0, abs=0.05)
    assert fit.prefactor == pytest.approx(1.0, rel=0.05)


def test_fit_window_clipped_to_samples():
    curve = cumulative_coupling(modes_for(40))  # band ends at 2 nu_c ~ 1.27
    fit = fit_power_law(curve, (0.2, 2.0))
    assert 0.2 <= fit.fit_window[0] and fit.fit_window[1] <= curve.nu_grid[-1]


def test_fit_too_few_samples():
    nu = np.linspace(0.1, 3.0, 40)
    with pytest.raises(FitError):
        fit_power_law(CumulativeCurve(nu, nu**2), (0.2, 0.4))


def test_fit_nonpositive_values():
    nu = np.linspace(0.1, 3.0, 40)
    with pytest.raises(FitError):
        fit_power_law(CumulativeCurve(nu, nu**2 - 1.0))


# extrapolate_continuum

def test_extrapolate_constant():
    assert extrapolate_continuum([(0.1, 5), (0.05, 5), (0.025, 5)]) == pytest.approx(5, abs=1e-12)


def test_extrapolate_linear():
    pts = [(0.1, 1.1), (0.05, 1.05), (0.025, 1.025)]
    assert extrapolate_continuum(pts) == pytest.approx(1.0, abs=1e-12)


@given(*[st.floats(-5, 5).map(lambda v: round(v, 6))] * 3)
def test_extrapolate_exact_quadratic(v0, c1, c2):
    h = np.array([0.4, 0.2, 0.1, 0.05])
    assert extrapolate_continuum(zip(h, v0 + c1 * h + c2 * h**2)) == pytest.approx(v0, abs=1e-9)


@pytest.mark.parametrize("pts", [[(0.1, 1), (0.05, 1)], [(0.1, 1), (0.1, 1), (0.05, 1)]])
def test_extrapolate_errors(pts):
    with pytest.raises(FitError):
        extrapolate_continuum(pts)


def test_extrapolate_bare_alpha():
    sweep = sweep_delta([0.0], M_list=(40, 80, 160, 320))
    assert 2 * np.pi * sweep.alpha_continuum[0] == pytest.approx(1.0, abs=0.02)


# decoupling law

def test_law_recovers_synthetic():
    x = np.array([0, 0.05, 0.1, 0.2, 0.5, 1.0, 2.0])
    law = fit_decoupling_law(x, decoupling_law(x, 6.77, 2.57))
    assert law.a == pytest.approx(6.77, rel=1e-6)
    assert law.b == pytest.approx(2.57, rel=1e-6)
    assert law.residual < 1e-8


def test_law_rejects_nonpositive():
    with pytest.raises(FitError, match="nonpositive"):
        fit_decoupling_law([0, 0.1, 0.2], [1.0, 0.3, -0.01])


# sweep

def test_sweep_structure():
    sweep = sweep_delta([0.0, 0.1, 0.5], "fq", (40, 80, 160))
    assert len(sweep.entries) == 9
    assert [d for d, _ in sweep.extrapolated] == [0.0, 0.1, 0.5]
    assert sweep.finest_M == 160
    assert sweep.law_fit is not None


def test_sweep_alpha_decreases_on_each_lattice():
    deltas = [0.0, 0.05, 0.1, 0.2, 0.5]
    sweep = sweep_delta(deltas, "cq", (80, 160, 320))
    for M in (80, 160, 320):
        assert np.all(np.diff(sweep.alpha_at(M)) < 0)


def test_sweep_lattice_scaling():
    # a point-like A^2 term suppresses alpha as (1 + 2 delta / dx)^-2 on a lattice
    sweep = sweep_delta([0.0, 0.5, 1.0], "cq", (160, 320, 640))
    for e in sweep.entries:
        ratio = e.alpha / sweep.alpha_at(e.M)[0]
        assert ratio * (1 + 2 * e.delta / e.spacing) ** 2 == pytest.approx(1.0, rel=0.05)


def test_sweep_parallel_matches_serial():
    args = ([0.0, 0.2], "cq", (40, 80, 160))
    a = sweep_delta(*args)
    b = sweep_delta(*args, workers=2)
    assert [e.alpha for e in a.entries] == [e.alpha for e in b.entries]


@pytest.mark.parametrize("kwargs", [
    {"deltas": [-0.1, 0.0]}, {"deltas": []}, {"deltas": [0.0], "M_list": (40, 80)},
    {"deltas": [0.1, 0.1]},
])
def test_sweep_invalid(kwargs):
    with pytest.raises(ConfigurationError):
        sweep_delta(**kwargs)


def test_window_insensitivity_bare():
    a = sweep_delta([0.0], window=(0.2, 2.0)).alpha_continuum[0]
    b = sweep_delta([0.0], window=(0.3, 1.5)).alpha_continuum[0]
    assert abs(b / a - 1) < 0.05


# delta = 0 is degenerate (basis arbitrary); covered by the plane-wave tests
@pytest.mark.parametrize("delta", [0.05, 0.2, 1.0])
def test_capacitive_inductive_duality(delta):
    # on a periodic chain, site charge and link current are exchanged by duality
    spectra = []
    for kind in ("cq", "fq"):
        modes = modes_for(160, delta, kind)
        coupled = modes.couplings > 1e-9 * modes.couplings.max()
        spectra.append((modes.frequencies[coupled], modes.couplings[coupled]))
    (nu_c, f_c), (nu_f, f_f) = spectra
    np.testing.assert_allclose(nu_c, nu_f, rtol=1e-10)
    np.testing.assert_allclose(f_c, f_f, rtol=1e-7)
