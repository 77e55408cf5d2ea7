#!/usr/bin/env python3
"""Emit R(r/r_o) curve data for the first three bound states.

Writes figure_n1.csv, figure_n2.csv, figure_n3.csv (columns r_over_ro,
R_normalized) into the output directory and prints a short summary of each
curve's zero structure.
"""

import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from vwave.cli import main as cli_main
from vwave.nodes import NodeKind, find_nodes
from vwave.series import build_series
from vwave.units import AtomSpec
from vwave.wronskian import make_radial_grid, sample_wave


def run(z: int, out_dir: Path, samples: int) -> int:
    code = cli_main(
        ["figures", "--z", str(z), "--out-dir", str(out_dir), "--samples", str(samples)]
    )
    if code != 0:
        return code
    for n in (1, 2, 3):
        sol = build_series(AtomSpec(z, n))
        wave = sample_wave(sol, make_radial_grid(sol, samples=samples))
        report = find_nodes(wave)
        kinds = ", ".join(
            f"{nd.kind.value}@{nd.radius / sol.state.r_o:.4f}*r_o" for nd in report.nodes
        )
        print(f"n={n}: r_o={sol.state.r_o:g} bohr; nodes: {kinds}")
    print(f"wrote figure_n1.csv, figure_n2.csv, figure_n3.csv to {out_dir}")
    return 0


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--z", type=int, default=1)
    ap.add_argument("--out-dir", type=Path, default=Path("figures"))
    ap.add_argument("--samples", type=int, default=2000)
    args = ap.parse_args()
    sys.exit(run(args.z, args.out_dir, args.samples))
