"""One recovery map for every extension of a fixed marginal.

The averaged rotated transpose map depends only on rho_BC, yet satisfies

    I(A:C|B) >= D_M(rho_ABC || R(rho_AB))

for every tripartite state with that BC marginal (D_M is the measured
relative entropy). The script builds the map once and tests it against many
random extensions sharing the marginal.
"""

import numpy as np

from qmarkov import AveragingScheme, averaged_rotated_petz, recovery_report
from qmarkov.states import TripartiteLabels, random_density, random_extensions

labels = TripartiteLabels.standard(3)

rho_BC = random_density((2, 2), rank=4, seed=1)
chan = averaged_rotated_petz(rho_BC, AveragingScheme.cosh_weighted())
print("built one averaged map from a single random BC marginal")
print()

extensions = random_extensions(rho_BC, 12, dim_a=2, seed=2, ancilla_dim=2)
print("ext    I(A:C|B)     D_M        I - D_M")
worst = np.inf
for i, rho in enumerate(extensions):
    rep = recovery_report(rho, labels, chan, compute_dm=True)
    delta = rep.delta_meas
    worst = min(worst, delta)
    print("%3d   %9.6f   %9.6f   %9.6f" % (i, rep.I_bits, rep.Dm_bits, delta))

print()
print("min I - D_M = %.6f over all extensions (the bound requires >= 0)" % worst)
print("the same channel worked for every extension; only rho_BC was used")
