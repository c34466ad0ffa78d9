"""The measured relative entropy and its neighbors.

D_M(rho || sigma) is the best classical relative entropy obtainable by
measuring both states with one POVM. It sits between two familiar
quantities:

    -2 log2 F(rho, sigma)  <=  D_M(rho || sigma)  <=  D(rho || sigma)

and collapses to the classical KL divergence when the states commute.
"""

import numpy as np

from qmarkov import fidelity, measured_rel_ent_lower, measured_relative_entropy, relative_entropy
from qmarkov.entropy import classical_relative_entropy
from qmarkov.states import new_density, random_density

print("random qubit pairs:")
print("pair   -2log2(F)    D_M          D")
for i in range(8):
    rho = random_density((2,), rank=2, seed=i)
    sigma = random_density((2,), rank=2, seed=100 + i)
    lo = -2 * np.log2(fidelity(rho.matrix, sigma.matrix))
    dm = measured_relative_entropy(rho, sigma)
    hi = relative_entropy(rho, sigma.matrix)
    assert lo <= dm + 1e-9 <= hi + 2e-9
    print("%3d   %9.6f   %9.6f   %9.6f" % (i, lo, dm, hi))

print()

# commuting case: the optimal measurement is the common eigenbasis, so the
# variational program lands exactly on the classical KL divergence
p = np.array([0.6, 0.3, 0.1])
q = np.array([0.2, 0.3, 0.5])
dm = measured_relative_entropy(new_density(np.diag(p), (3,)), new_density(np.diag(q), (3,)))
kl = classical_relative_entropy(p, q)
print("commuting pair:  D_M = %.12f,  KL = %.12f" % (dm, kl))

# Monte-Carlo sanity check: random rank-one measurements can only do worse
rho = random_density((3,), rank=3, seed=7)
sigma = random_density((3,), rank=3, seed=8)
dm = measured_relative_entropy(rho, sigma)
lb = measured_rel_ent_lower(rho, sigma, n_samples=500, seed=0)
print()
print("qutrit pair:     D_M = %.6f, best of 500 random bases = %.6f" % (dm, lb))
