"""Typical sets, energy shells and the shell-swap permutation on small systems."""

import math

from corrwork.bounds import shell_constants
from corrwork.instances import fix_4
from corrwork.spectra import make_partition
from corrwork.typicality import energy_shell, family_T_set, shell_swap_work, typical_set

for N in (4, 8, 14):
    rep = typical_set([0.75, 0.25], N, 0.1)
    print(f"coin N={N:<2} |T|={rep.cardinality:<5} <= {rep.cardinality_bound:9.1f}   "
          f"weight={rep.population:.4f} >= {rep.population_bound:.4f}")

for N in (2, 10, 20, 40):
    sh = energy_shell([0, 1], math.log(2), 0.5, N)
    print(f"qubit shell N={N:<2} count={sh.cardinality:<14} method={sh.method:<13} applicable={sh.applicable}")

sys = fix_4()
p = make_partition(sys, 2, "uniform")
t = family_T_set(sys, p, "C", 2, 0.3)
xi = math.sqrt(2.01 * shell_constants(sys.h, t.s0).frakC * 0.3)
res = shell_swap_work(t.spectrum.eigenvalues, t.members, sys.h, 2, t.s0, xi, sys.mean_energy)
print(f"\nfamily C subset: {t.cardinality} eigenvalues carrying {t.population:.4f}")
print(f"after the swap E = {res.energy_after:.4f} <= {res.chain_bound:.4f}: {res.chain_ok}")
