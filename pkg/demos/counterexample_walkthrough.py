"""The transpose recovery map is not square-root optimal for mixed states.

Walks through the three-qubit diagonal state whose optimal recovery fidelity
exceeds the square root of the transpose-map fidelity. For pure states the
square root is a proven upper bound, so this state separates the two regimes.
"""

import numpy as np

from qmarkov import cmi, counterexample_state, petz_transpose, recovery_report
from qmarkov.harness import _counterexample_channel, cmd_sweep
from qmarkov.sdp import fidelity_of_recovery
from qmarkov.states import TripartiteLabels

labels = TripartiteLabels.standard(3)
rho = counterexample_state()

print("state spectrum (diagonal):", np.diag(rho.matrix).real)
print("conditional mutual information I(A:C|B) = %.10f bits" % cmi(rho, labels).I_ACgB)
print()

# the canonical transpose map built from the BC marginal
rep_T = recovery_report(rho, labels, petz_transpose(rho.marginal((1, 2))))
print("transpose map fidelity        F(T)       = %.10f" % rep_T.fid)
print("square root                   sqrt(F(T)) = %.10f" % np.sqrt(rep_T.fid))

# a simple measure-and-prepare map that does strictly better than sqrt(F(T))
rep_R = recovery_report(rho, labels, _counterexample_channel())
print("hand-built recovery map       F(R)       = %.10f" % rep_R.fid)

# and the true optimum over all B -> BC channels, from the SDP
fstar, _ = fidelity_of_recovery(rho, labels)
print("optimum over all channels     F(A;C|B)   = %.10f" % min(fstar, 1.0))
print()
assert rep_R.fid > np.sqrt(rep_T.fid)
print("=> F(R) > sqrt(F(T)): the pure-state upper bound fails for mixed states")
print()

# rotating the transpose map does not help here: the state is diagonal, so
# every rotated variant has the same fidelity
rows = cmd_sweep(rho, -4.0, 4.0, 9)
print("rotated-map fidelity sweep:")
for row in rows:
    tag = "t = %+.1f" % row["t"] if row["kind"] == "rotated" else "averaged"
    print("  %-10s F = %.10f" % (tag, row["fid"]))
