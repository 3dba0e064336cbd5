"""Regenerate the figure data sets (dispersion, spectra, alpha sweep, emission curve).

    python scripts/reproduce_figures.py [output_dir]
"""

import sys
from pathlib import Path

from a2decouple import cli

RUNS = [
    ("fig2", ["dispersion", "--preset", "fig2"]),
    ("fig2_spectral", ["spectral", "--preset", "fig2"]),
    ("fig3_cq", ["sweep-delta", "--preset", "fig3", "--coupling", "cq"]),
    ("fig3_fq", ["sweep-delta", "--preset", "fig3", "--coupling", "fq"]),
    ("fig3_spectral", ["spectral", "--preset", "fig3"]),
    ("fig4b", ["emission", "--preset", "fig4b"]),
    ("fig4b_self", ["emission", "--preset", "fig4b", "--law", "self"]),
]


def main(root="figures"):
    root = Path(root)
    status = 0
    for name, argv in RUNS:
        print(f"== {name}")
        status |= cli.main(argv + ["--output", str(root / name)])
    return status


if __name__ == "__main__":
    sys.exit(main(*sys.argv[1:]))
