"""Ergotropy lower bound against bond dimension for a 40-level seeded instance.

Pass an output path to also save the plot (needs matplotlib).
"""

import sys as _sys

from corrwork.bounds import asymptotic_envelope
from corrwork.instances import random_system

sys = random_system(seed=7, d=40)
curve = asymptotic_envelope(sys, range(1, 1601))

print(f"rank {sys.rank}, E = {sys.mean_energy:.4f}")
for m in (1, 2, 4, 8, 16, 32, 39, 40, 100, 1600):
    row = curve.rows[m - 1]
    print(f"m={m:<5} envelope/E = {row.ratio:.4f}")
first = next(r.m for r in curve.rows if r.ratio == 1.0)
print(f"the bound reaches E first at m = {first}")

if len(_sys.argv) > 1:
    from corrwork.cli import _plot_curve

    _plot_curve(curve, _sys.argv[1])
    print("plot written to", _sys.argv[1])
