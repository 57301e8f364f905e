"""
Counting critical points
========================

Critical points of |s|_h are local maxima and saddles of the pointwise
norm.  Their mean number grows linearly in the degree.
"""

import numpy as np

from randzeros.ensembles import EnsembleSpec, Family, sample
from randzeros.statistics import critical_count_fit
from randzeros.zeros_crits import find_critical_points

s = sample(EnsembleSpec(Family.SU2_POLY, 12, seed=1), 1)[0]
c = find_critical_points(s)
# maxima minus saddles is 2 minus the number of zeros (Euler characteristic)
print(c.diagnostics)

fit = critical_count_fit([10, 20, 40], 100, seed=2)
for N, m, se in zip(fit.degrees, fit.means, fit.sems):
    ref = (5 * N * N - 8 * N + 4) / (3 * N - 2)
    print(f"N={N:3d}  mean {m:8.3f} +/- {se:.3f}   exact {ref:8.3f}")
print(f"slope {fit.gamma:.4f} +/- {fit.stderr:.4f}; large-N value 5/3 = {5 / 3:.4f}")
