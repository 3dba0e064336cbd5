"""Command-line runner for the figure reproductions.

    a2decouple dispersion --modes 40,80,160,320 --delta 0
    a2decouple sweep-delta --deltas 0,0.1,0.5,1,2 --modes 40,80,160,320
    a2decouple emission --preset fig4b

Settings are resolved as defaults < preset < ``--config`` file < flags. Every
run writes CSV tables plus ``manifest.txt`` into the output directory.
"""

from __future__ import annotations

import argparse
import dataclasses
import os
import subprocess
import sys
import warnings
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from a2decouple import __version__
from a2decouple.circuit import (
    PAPER_LAW,
    CircuitParams,
    emission_curve,
    emission_peak,
    emission_ratio,
    end_to_end_ratio,
    map_circuit,
)
from a2decouple.errors import A2Error, ConfigurationError
from a2decouple.io import read_record, sha256sum, write_csv, write_record
from a2decouple.lattice import CoarseLatticeWarning, LatticeConfig, build_chain, dump_model
from a2decouple.modes import normal_modes, write_modes_csv
from a2decouple.spectral import cumulative_coupling, fit_power_law, sweep_delta

OUTPUT_ENV = "A2DECOUPLE_OUTPUT"
COMMANDS = ("dispersion", "spectral", "sweep-delta", "emission", "end-to-end", "dump-model")

PRESETS = {
    "fig2": {"modes": (40, 80, 160, 320), "deltas": (0.0,), "delta": 0.0, "length": 10.0},
    "fig3": {"modes": (40, 80, 160, 320), "deltas": (0.0, 0.05, 0.1, 0.2, 0.5, 1.0, 2.0),
             "length": 10.0},
    "fig4b": {"cj": 25.0, "z0": 50.0, "f0": 7.5, "c_grid": (0.01, 10.0, 1000)},
}


@dataclass
class RunConfig:
    command: str
    modes: tuple = (40, 80, 160, 320)
    deltas: tuple = (0.0, 0.05, 0.1, 0.2, 0.5, 1.0, 2.0)
    delta: float = 0.0
    coupling: str = "cq"
    length: float = 10.0  # in qubit wavelengths
    fit_window: tuple = (0.2, 2.0)
    law: str = "paper"
    cj: float = 25.0  # fF
    z0: float = 50.0  # Ohm
    f0: float = 7.5  # GHz
    nbar: float = 0.5
    c_grid: tuple = (0.01, 10.0, 1000)
    output: str = ""
    preset: str = ""
    seed: int = 0
    workers: int = 0

    @property
    def dimensionless_length(self) -> float:
        return 2.0 * np.pi * self.length

    @property
    def circuit(self) -> CircuitParams:
        return CircuitParams(C_c=self.cj * 1e-15, C_J=self.cj * 1e-15, Z0=self.z0,
                             omega0=2 * np.pi * self.f0 * 1e9, n_bar=self.nbar)

    def c_values(self) -> np.ndarray:
        lo, hi, n = self.c_grid
        return np.linspace(lo, hi, int(n))


def _floats(text: str) -> tuple:
    try:
        return tuple(float(t) for t in str(text).split(",") if t.strip())
    except ValueError as exc:
        raise ConfigurationError(f"expected comma-separated numbers, got {text!r}") from exc


def _ints(text: str) -> tuple:
    vals = _floats(text)
    if any(v != int(v) for v in vals):
        raise ConfigurationError(f"expected integers, got {text!r}")
    return tuple(int(v) for v in vals)


def _pair(text: str) -> tuple:
    vals = _floats(text)
    if len(vals) != 2:
        raise ConfigurationError(f"expected lo,hi got {text!r}")
    return vals


def _grid(text: str) -> tuple:
    vals = _floats(text)
    if len(vals) != 3:
        raise ConfigurationError(f"expected lo,hi,n got {text!r}")
    return (vals[0], vals[1], int(vals[2]))


# key -> parser, shared by flags and config files
PARSERS = {
    "modes": _ints,
    "deltas": _floats,
    "delta": float,
    "coupling": str,
    "length": float,
    "fit_window": _pair,
    "law": str,
    "cj": float,
    "z0": float,
    "f0": float,
    "nbar": float,
    "c_grid": _grid,
    "output": str,
    "seed": int,
    "workers": int,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="flat key=value config file")
    common.add_argument("--output", help=f"output directory (default ${OUTPUT_ENV} or ./a2decouple-out)")
    common.add_argument("--preset", choices=sorted(PRESETS))
    common.add_argument("--modes", help="comma-separated lattice sizes M")
    common.add_argument("--deltas", help="comma-separated diamagnetic weights")
    common.add_argument("--delta", help="single diamagnetic weight")
    common.add_argument("--coupling", choices=["cq", "fq"])
    common.add_argument("--length", help="line length in qubit wavelengths")
    common.add_argument("--fit-window", dest="fit_window", help="lo,hi in units of omega_0")
    common.add_argument("--law", choices=["paper", "self"], help="decoupling law for emission curves")
    common.add_argument("--cj", help="qubit capacitance C_J in fF")
    common.add_argument("--z0", help="line impedance in Ohm")
    common.add_argument("--f0", help="qubit frequency in GHz")
    common.add_argument("--nbar", help="charge matrix element n_bar")
    common.add_argument("--c-grid", dest="c_grid", help="lo,hi,n for c = C_c/C_J")
    common.add_argument("--seed", help="integer seed recorded in the manifest")
    common.add_argument("--workers", help="processes for the (delta, M) grid")

    parser = argparse.ArgumentParser(prog="a2decouple", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def resolve_config(args: argparse.Namespace) -> RunConfig:
    values: dict = {}
    if args.preset:
        values.update(PRESETS[args.preset])
    if args.config:
        try:
            record = read_record(args.config)
        except OSError as exc:
            raise ConfigurationError(f"cannot read config {args.config}: {exc.strerror}") from exc
        for key, raw in record.items():
            key = key.replace("-", "_")
            if key == "preset":
                values.update(PRESETS.get(raw) or _bad_preset(raw))
                continue
            if key not in PARSERS:
                raise ConfigurationError(f"unknown config key {key!r}")
            values[key] = PARSERS[key](raw)
    for key, parse in PARSERS.items():
        raw = getattr(args, key, None)
        if raw is not None:
            values[key] = parse(raw)
    if not values.get("output"):
        values["output"] = os.environ.get(OUTPUT_ENV) or "a2decouple-out"
    cfg = RunConfig(command=args.command, preset=args.preset or "", **values)
    if cfg.coupling not in ("cq", "fq"):
        raise ConfigurationError(f"coupling must be cq or fq, got {cfg.coupling!r}")
    if cfg.law not in ("paper", "self"):
        raise ConfigurationError(f"law must be paper or self, got {cfg.law!r}")
    if not cfg.modes or not cfg.deltas:
        raise ConfigurationError("modes and deltas must be nonempty")
    return cfg


def _bad_preset(name):
    raise ConfigurationError(f"unknown preset {name!r}")


def _version_string() -> str:
    here = Path(__file__).resolve().parent
    try:
        sha = subprocess.run(["git", "-C", str(here), "rev-parse", "--short", "HEAD"],
                             capture_output=True, text=True, timeout=5, check=True).stdout.strip()
    except (OSError, subprocess.SubprocessError):
        return __version__
    return f"{__version__}+g{sha}" if sha else __version__


def _lattice(cfg: RunConfig, M: int, delta: float) -> LatticeConfig:
    return LatticeConfig(M=M, length=cfg.dimensionless_length, coupling_kind=cfg.coupling, delta=delta)


def run_dispersion(cfg: RunConfig, out: Path) -> tuple[list[Path], dict]:
    files, rows = [], []
    for M in cfg.modes:
        modes = normal_modes(build_chain(_lattice(cfg, M, cfg.delta)))
        rows.extend((M, n, nu) for n, nu in enumerate(modes.frequencies, 1))
        files.append(write_modes_csv(modes, out / f"modes_M{M}.csv"))
    files.insert(0, write_csv(out / "dispersion.csv", ["M", "n", "nu_n"], rows))
    return files, {}


def run_spectral(cfg: RunConfig, out: Path) -> tuple[list[Path], dict]:
    M = max(cfg.modes)
    spectra, fits = [], []
    for delta in cfg.deltas:
        lat = _lattice(cfg, M, delta)
        curve = cumulative_coupling(normal_modes(build_chain(lat)), lat.dipole)
        fit = fit_power_law(curve, cfg.fit_window)
        ohmic = fit_power_law(curve, cfg.fit_window, exponent=1.0)
        lo, hi = fit.fit_window
        nu = curve.nu_grid[(curve.nu_grid >= lo) & (curve.nu_grid <= hi) & (curve.steps > 0)]
        spectra.extend((delta, x, j) for x, j in zip(nu, fit.J(nu)))
        fits.append((delta, M, fit.prefactor, fit.exponent, ohmic.alpha(lat.dipole), lo, hi, fit.residual))
    files = [
        write_csv(out / "spectral.csv", ["delta", "nu", "J"], spectra),
        write_csv(out / "spectral_fits.csv",
                  ["delta", "M", "prefactor", "exponent", "alpha_ohmic", "nu_lo", "nu_hi", "residual"], fits),
    ]
    return files, {}


def _law_record(sweep) -> dict:
    rec = {"coupling": sweep.coupling_kind.value}
    if sweep.law_fit is None:
        rec["law_fit"] = "none"
        return rec
    law = sweep.law_fit
    rec.update(a=law.a, b=law.b, residual=law.residual, source=law.source)
    if sweep.notes:
        rec["note"] = " | ".join(sweep.notes)
    return rec


def _run_sweep(cfg: RunConfig, coupling=None):
    return sweep_delta(cfg.deltas, coupling or cfg.coupling, cfg.modes,
                       cfg.dimensionless_length, cfg.fit_window, workers=cfg.workers or None)


def run_sweep_delta(cfg: RunConfig, out: Path) -> tuple[list[Path], dict]:
    sweep = _run_sweep(cfg)
    extrap = dict(sweep.extrapolated)
    rows = [(e.delta, e.M, e.alpha, extrap[e.delta]) for e in sweep.entries]
    files = [write_csv(out / "alpha.csv", ["delta", "M", "alpha", "alpha_extrapolated"], rows)]
    rec = _law_record(sweep)
    files.append(write_record(out / "law_fit.txt", rec))
    return files, {f"law_{k}": v for k, v in rec.items()}


def _law(cfg: RunConfig) -> tuple[tuple[float, float], dict]:
    if cfg.law == "paper":
        return PAPER_LAW, {"law": "paper"}
    sweep = _run_sweep(cfg, "cq")
    if sweep.law_fit is None:
        raise ConfigurationError("self law needs at least two positive deltas")
    rec = _law_record(sweep)
    return (sweep.law_fit.a, sweep.law_fit.b), {"law": "self", **{f"law_{k}": v for k, v in rec.items()}}


def run_emission(cfg: RunConfig, out: Path) -> tuple[list[Path], dict]:
    (a, b), info = _law(cfg)
    params = cfg.circuit
    curve = emission_curve(params, cfg.c_values(), (a, b))
    _, delta1, kappa = map_circuit(params, a)
    c_star = emission_peak(kappa, b, c_max=float(cfg.c_grid[1]))
    rows = zip(curve.c_grid, curve.ratio_with_A2, curve.ratio_without_A2)
    files = [
        write_csv(out / "emission.csv", ["c", "ratio_with_A2", "ratio_without_A2"], rows),
        write_record(out / "emission_summary.txt", {
            "kappa": kappa, "delta_at_c1": delta1,
            "c_star": "none" if c_star is None else c_star,
            "law_a": a, "law_b": b,
        }),
    ]
    return files, info


def run_end_to_end(cfg: RunConfig, out: Path) -> tuple[list[Path], dict]:
    sweep = _run_sweep(cfg, "cq")
    if sweep.law_fit is None:
        raise ConfigurationError("end-to-end needs at least two positive deltas")
    law = sweep.law_fit
    ref = cfg.circuit
    _, _, kappa = map_circuit(ref, law.a)
    rows = []
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        for c in cfg.c_values():
            first = end_to_end_ratio(ref.at_relative_capacitance(c), ref, sweep)
            rows.append((c, first, float(emission_ratio(c, kappa, law.b))))
    worst = max(abs(r[1] / r[2] - 1.0) for r in rows)
    files = [
        write_csv(out / "end_to_end.csv", ["c", "ratio_end_to_end", "ratio_closed_form"], rows),
        write_record(out / "end_to_end_summary.txt", {
            "kappa": kappa, "max_relative_mismatch": worst,
            "extrapolation_warnings": len(caught), **_law_record(sweep),
        }),
    ]
    return files, {f"law_{k}": v for k, v in _law_record(sweep).items()}


def run_dump_model(cfg: RunConfig, out: Path) -> tuple[list[Path], dict]:
    files = []
    for M in cfg.modes:
        model = build_chain(_lattice(cfg, M, cfg.delta))
        files.append(dump_model(model, out / f"model_M{M}_{cfg.coupling}.txt"))
    return files, {}


RUNNERS = {
    "dispersion": run_dispersion,
    "spectral": run_spectral,
    "sweep-delta": run_sweep_delta,
    "emission": run_emission,
    "end-to-end": run_end_to_end,
    "dump-model": run_dump_model,
}


def write_manifest(cfg: RunConfig, out: Path, files: list[Path], extra: dict, started: datetime) -> Path:
    record = {
        "command": cfg.command,
        "version": _version_string(),
        "started": started.isoformat(timespec="seconds"),
        "finished": datetime.now(timezone.utc).isoformat(timespec="seconds"),
    }
    for f in dataclasses.fields(cfg):
        if f.name != "command":
            record[f"config.{f.name}"] = getattr(cfg, f.name)
    record.update(extra)
    for path in files:
        record[f"output.{path.name}"] = f"sha256:{sha256sum(path)}"
    return write_record(out / "manifest.txt", record)


def run(cfg: RunConfig) -> list[Path]:
    out = Path(cfg.output)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise ConfigurationError(f"cannot create output directory {out}: {exc.strerror}") from exc
    if not os.access(out, os.W_OK):
        raise ConfigurationError(f"output directory {out} is not writable")
    started = datetime.now(timezone.utc)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", CoarseLatticeWarning)
        files, extra = RUNNERS[cfg.command](cfg, out)
    return files + [write_manifest(cfg, out, files, extra, started)]


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve_config(args)
        files = run(cfg)
    except (A2Error, OSError) as exc:
        print(f"a2decouple {args.command}: error: {exc}", file=sys.stderr)
        return 2
    for path in files:
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
