"""How the Ohmic coefficient depends on the lattice spacing at fixed delta.

The A^2 term acts at a single point, so its strength is set by the lattice
cutoff: 2 pi alpha ~ (1 + 2 delta / dx)^-2 on every lattice and the
decoupling-law coefficient grows like the cutoff. This script prints the
per-lattice alpha, that prediction, and the law fitted on each lattice.

    python scripts/lattice_scaling.py [--coupling cq|fq]
"""

import argparse
import warnings

import numpy as np

from a2decouple.lattice import DEFAULT_LENGTH, CoarseLatticeWarning
from a2decouple.spectral import fit_decoupling_law, sweep_delta

DELTAS = [0.0, 0.05, 0.1, 0.2, 0.5, 1.0, 2.0]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--coupling", default="cq", choices=["cq", "fq"])
    ap.add_argument("--modes", default="40,80,160,320,640,1280")
    args = ap.parse_args()
    M_list = [int(m) for m in args.modes.split(",")]

    warnings.simplefilter("ignore", CoarseLatticeWarning)
    sweep = sweep_delta(DELTAS, args.coupling, M_list)
    print(f"{'M':>6} {'dx':>8} {'nu_c':>7} {'a':>8} {'b':>6}   2*pi*alpha / predicted")
    for M in M_list:
        dx = DEFAULT_LENGTH / M
        two_pi_alpha = 2 * np.pi * sweep.alpha_at(M)
        law = fit_decoupling_law(DELTAS, two_pi_alpha)
        pred = two_pi_alpha[0] * (1 + 2 * np.array(DELTAS) / dx) ** -2
        print(f"{M:>6} {dx:8.4f} {1 / dx:7.2f} {law.a:8.3f} {law.b:6.3f}   "
              + " ".join(f"{r:5.3f}" for r in two_pi_alpha / pred))
    print("\nextrapolated 2*pi*alpha:", np.round(2 * np.pi * sweep.alpha_continuum, 4).tolist())
    print("law:", sweep.law_fit)
    for note in sweep.notes:
        print("note:", note)


if __name__ == "__main__":
    main()
