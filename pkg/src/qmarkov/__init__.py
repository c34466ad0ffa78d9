"""Recovery maps for approximate quantum Markov chains.

Numerical toolkit for checking how well a tripartite state can be
reconstructed from its AB marginal by a channel acting on B alone, and for
verifying the conditional-mutual-information bounds that govern this.
"""

from .entropy import (
    EntropyReport,
    cmi,
    measured_rel_ent_lower,
    measured_relative_entropy,
    relative_entropy,
    von_neumann,
)
from .linalg import fidelity, partial_trace, tensor, trace_norm
from .recovery import (
    AveragingScheme,
    Channel,
    RecoveryReport,
    apply,
    averaged_rotated_petz,
    channel_from_kraus,
    petz_transpose,
    recovery_report,
    rotated_petz,
    validate_tpcp,
)
from .sdp import fidelity_of_recovery, fidelity_of_recovery_unital_form, fidelity_sdp
from .states import (
    DensityMatrix,
    TripartiteLabels,
    classical_chain,
    counterexample_state,
    flag_extension,
    new_density,
    purify,
    qcq_state,
    random_density,
)

__all__ = [
    "AveragingScheme",
    "Channel",
    "DensityMatrix",
    "EntropyReport",
    "RecoveryReport",
    "TripartiteLabels",
    "apply",
    "averaged_rotated_petz",
    "channel_from_kraus",
    "classical_chain",
    "cmi",
    "counterexample_state",
    "fidelity",
    "fidelity_of_recovery",
    "fidelity_of_recovery_unital_form",
    "fidelity_sdp",
    "flag_extension",
    "measured_rel_ent_lower",
    "measured_relative_entropy",
    "new_density",
    "partial_trace",
    "petz_transpose",
    "purify",
    "qcq_state",
    "random_density",
    "recovery_report",
    "relative_entropy",
    "rotated_petz",
    "tensor",
    "trace_norm",
    "validate_tpcp",
    "von_neumann",
]

__version__ = "0.1.0"
