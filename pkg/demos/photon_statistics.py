"""Photon statistics of a heterodyne squeezed state, two ways.

Builds the state for r=0.8, |gamma|=0.1, beta=1 from the analytic
wavefunction (quadrature) and from the Fock-space eigenvector, compares the
two photon-number distributions, then sweeps |gamma| at balanced phases.

    python3 demos/photon_statistics.py
"""

import math

import numpy as np

from hempss.canonical import CanonicalParams, validate
from hempss.fock import FockCutoff
from hempss.oracle import compare_pnd, joint_eigenstate
from hempss.states import normalize, wave_params
from hempss.statistics import moments, pnd, pnd_adaptive, sweep_gamma

p = CanonicalParams(r=0.8, gamma_mod=0.1, chi_mod=0.1, delta1=math.pi, delta2=0.0)
print(validate(p).summary())

w = normalize(wave_params(p, 1, 1))
grid = pnd(w, p, n_max=30)
print(f"quadrature: captured mass {grid.total_mass:.9f}")

eig = joint_eigenstate(p, 1, 1, FockCutoff.square(40))
print(f"eigenvector: residuals {eig.residual1:.1e}, {eig.residual2:.1e}")
print(f"max |dP| over n1, n2 <= 12: {compare_pnd(eig, grid):.1e}")

print("\nP(n1, n2), n <= 5:")
np.set_printoptions(precision=4, suppress=True, linewidth=100)
print(grid.values[:6, :6])

m = moments(grid)
print(f"\n<n1> = {m.mean_n1:.4f}  <n2> = {m.mean_n2:.4f}  g2 = {m.g2_cross:.4f}")

balanced = p.replace(delta1=math.pi / 2, delta2=math.pi / 2)
g = pnd_adaptive(normalize(wave_params(balanced, 3, 3)), balanced)
print(f"balanced phases, beta=3: max |P - P^T| = {np.abs(g.values - g.values.T).max():.1e}")

print("\n|gamma|   <n1>     <n2>     g2")
for row in sweep_gamma(balanced, 3.0, [0.0, 0.05, 0.1, 0.15, 0.2]).rows:
    print(f"{row['gamma_mod']:.2f}    {row['mean_n1']:.4f}   {row['mean_n2']:.4f}   {row['g2']:.4f}")
