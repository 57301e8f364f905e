"""
How rare is an empty disk?
==========================

Estimate the probability that a disk of scaled radius D contains no zero,
and fit log P against D^2.
"""

import numpy as np

from randzeros.ensembles import EnsembleSpec, Family, sample
from randzeros.statistics import hole_probability, poisson_samples
from randzeros.zeros_crits import find_zeros_batch

N = 50
zeros = find_zeros_batch(sample(EnsembleSpec(Family.SU2_POLY, N, seed=3), 5000))
rep = hole_probability(zeros, D_grid=np.linspace(0, 2.5, 26))

for D, p, lo, hi in zip(rep.D, rep.p, rep.ci_lo, rep.ci_hi):
    print(f"D={D:4.2f}  P={p:.4f}  [{lo:.4f}, {hi:.4f}]")
print(f"fit of log P on D^2: slope {rep.slope:.3f}, R^2 {rep.r2:.4f}, {rep.fit_points} points")

# a Poisson process with the same intensity has P(D) = exp(-D^2) exactly;
# the zeros are far less likely to leave a hole
pois = hole_probability(poisson_samples(N, 5000, np.random.default_rng(0)), D_grid=rep.D)
print(f"Poisson reference slope: {pois.slope:.3f}")
