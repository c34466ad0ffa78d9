"""Recovery bounds on a random ensemble.

For each random tripartite state, the conditional mutual information bounds
how well the state can be rebuilt from its AB marginal by acting on B alone:

    I(A:C|B) >= -2 log2 F(rho, R(rho_AB))

for the optimal channel R, and the linearized form F >= 1 - (ln 2 / 2) I.
The script compares three candidate recovery maps per state.
"""

import numpy as np

from qmarkov import (
    AveragingScheme,
    averaged_rotated_petz,
    cmi,
    petz_transpose,
    recovery_report,
)
from qmarkov.sdp import fidelity_of_recovery
from qmarkov.states import TripartiteLabels, random_density

labels = TripartiteLabels.standard(3)
scheme = AveragingScheme.cosh_weighted()

print("seed    I(A:C|B)   F(transpose)  F(averaged)   F(optimal)   slack")
worst = np.inf
for seed in range(12):
    rho = random_density((2, 2, 2), rank=8, seed=seed)
    rho_BC = rho.marginal((1, 2))
    I = cmi(rho, labels).I_ACgB
    f_t = recovery_report(rho, labels, petz_transpose(rho_BC)).fid
    f_a = recovery_report(rho, labels, averaged_rotated_petz(rho_BC, scheme)).fid
    f_o, _ = fidelity_of_recovery(rho, labels)
    f_o = min(f_o, 1.0)
    slack = I + 2 * np.log2(f_o)
    worst = min(worst, slack)
    print(
        "%4d   %9.6f   %11.8f  %11.8f  %11.8f  %8.5f"
        % (seed, I, f_t, f_a, f_o, slack)
    )

print()
print("minimum slack I + 2 log2 F(optimal) = %.5f (the bound requires >= 0)" % worst)
