"""Small dense semidefinite programs.

A generic block-diagonal SDP interface plus the two quantum instances:
fidelity through its block-matrix characterization, and fidelity of
recovery optimized over all (or unital-form) B -> BC channels.

Problems are handed to cvxpy and solved with the Clarabel interior-point
solver, which is deterministic and accurate enough for the 1e-6/1e-7
tolerances used throughout.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass

import cvxpy as cp
import numpy as np
import numpy.linalg as npl

from . import linalg
from .recovery import Channel
from .states import DensityMatrix, TripartiteLabels

SOLVER_OPTS = dict(
    solver=cp.CLARABEL,
    tol_gap_abs=1e-10,
    tol_gap_rel=1e-10,
    tol_feas=1e-10,
    max_iter=300,
    # the ruiz equilibration loses ~1e-6 of accuracy on near-degenerate
    # recovery instances; the problems here are small and well scaled
    equilibrate_enable=False,
)

GAP_TOL = 1e-7


class SdpError(RuntimeError):
    pass


@dataclass(frozen=True)
class SdpProblem:
    """maximize sum_b tr(C_b X_b)  s.t.  sum_b tr(A_ib X_b) = rhs_i, X_b >= 0.

    Blocks are real symmetric; constraint coefficients are given as sparse
    triples (constraint, block, row, col, value), implicitly symmetrized.
    """

    block_sides: tuple[int, ...]
    objective: tuple[np.ndarray, ...]  # one dense C_b per block
    constraint_triples: tuple[tuple[int, int, int, int, float], ...]
    rhs: tuple[float, ...]

    def __post_init__(self):
        if len(self.objective) != len(self.block_sides):
            raise ValueError("need one objective matrix per block")
        for s, C in zip(self.block_sides, self.objective):
            if C.shape != (s, s) or not np.all(np.isfinite(C)):
                raise ValueError("objective block has wrong shape or non-finite entries")
        n_cons = len(self.rhs)
        for (i, b, r, c, v) in self.constraint_triples:
            if not (0 <= i < n_cons and 0 <= b < len(self.block_sides)):
                raise ValueError(f"triple {(i, b, r, c, v)} out of range")
            s = self.block_sides[b]
            if not (0 <= r < s and 0 <= c < s):
                raise ValueError(f"triple {(i, b, r, c, v)} indexes outside block")


@dataclass(frozen=True)
class SdpSolution:
    primal_blocks: tuple[np.ndarray, ...]
    dual: np.ndarray
    primal_objective: float
    dual_objective: float
    status: str  # optimal | infeasible | max-iter

    @property
    def gap(self) -> float:
        return abs(self.primal_objective - self.dual_objective)

    def as_dict(self) -> dict:
        return {
            "block_sides": [int(B.shape[0]) for B in self.primal_blocks],
            "primal_objective": self.primal_objective,
            "dual_objective": self.dual_objective,
            "gap": self.gap,
            "status": self.status,
        }


def _constraint_matrices(p: SdpProblem) -> list[list[np.ndarray]]:
    mats = [
        [np.zeros((s, s)) for s in p.block_sides] for _ in p.rhs
    ]
    for (i, b, r, c, v) in p.constraint_triples:
        mats[i][b][r, c] += v
        if r != c:
            mats[i][b][c, r] += v
    return mats


def solve_sdp(p: SdpProblem) -> SdpSolution:
    """Solve a generic block SDP; raises SdpError only on solver breakage,
    infeasibility is reported through the status field."""
    if sum(p.block_sides) > 256:
        raise ValueError("total block dimension exceeds 256")
    X = [cp.Variable((s, s), symmetric=True) for s in p.block_sides]
    obj = cp.Maximize(sum(cp.sum(cp.multiply(C, Xb)) for C, Xb in zip(p.objective, X)))
    mats = _constraint_matrices(p)
    cons = [Xb >> 0 for Xb in X]
    eqs = []
    for i, rhs_i in enumerate(p.rhs):
        eqs.append(
            sum(cp.sum(cp.multiply(mats[i][b], X[b])) for b in range(len(X))) == rhs_i
        )
    prob = cp.Problem(obj, cons + eqs)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", UserWarning)
            prob.solve(**SOLVER_OPTS)
    except cp.SolverError as exc:
        raise SdpError(str(exc)) from exc
    if prob.status in (cp.INFEASIBLE, cp.INFEASIBLE_INACCURATE):
        return SdpSolution(
            primal_blocks=tuple(np.zeros((s, s)) for s in p.block_sides),
            dual=np.zeros(len(p.rhs)),
            primal_objective=float("nan"),
            dual_objective=float("nan"),
            status="infeasible",
        )
    status = "optimal" if prob.status in (cp.OPTIMAL, cp.OPTIMAL_INACCURATE) else "max-iter"
    dual = (
        np.array([float(np.asarray(e.dual_value).reshape(())) for e in eqs])
        if eqs
        else np.zeros(0)
    )
    primal = float(prob.value)
    dual_obj = float(np.dot(dual, np.asarray(p.rhs))) if eqs else primal
    return SdpSolution(
        primal_blocks=tuple(np.asarray(Xb.value) for Xb in X),
        dual=dual,
        primal_objective=primal,
        dual_objective=dual_obj,
        status=status,
    )


def problem_dump(p: SdpProblem, sol: SdpSolution, path: str) -> None:
    """Debug dump of a problem/solution pair as JSON."""
    obj = {
        "block_sides": list(p.block_sides),
        "constraint_triples": [list(t) for t in p.constraint_triples],
        "rhs": list(p.rhs),
        "solution": sol.as_dict(),
    }
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=1)


def _solve_cvxpy(objective, constraints) -> cp.Problem:
    prob = cp.Problem(objective, constraints)
    try:
        with warnings.catch_warnings():
            # Clarabel's "almost solved" status is accurate enough for our
            # tolerances; the residuals are checked downstream
            warnings.simplefilter("ignore", UserWarning)
            prob.solve(**SOLVER_OPTS)
    except cp.SolverError as exc:
        raise SdpError(str(exc)) from exc
    if prob.status not in (cp.OPTIMAL, cp.OPTIMAL_INACCURATE):
        raise SdpError(f"solver ended with status {prob.status}")
    return prob


def fidelity_sdp(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    """Fidelity as an SDP: maximize Re tr X s.t. [[rho, X], [X^H, sigma]] >= 0.

    Independent cross-check of the spectral fidelity computation.
    """
    if rho.dims != sigma.dims:
        raise ValueError("states must share dims")
    d = rho.side
    X = cp.Variable((d, d), complex=True)
    cons = [cp.bmat([[rho.matrix, X], [X.H, sigma.matrix]]) >> 0]
    prob = _solve_cvxpy(cp.Maximize(cp.real(cp.trace(X))), cons)
    return float(prob.value)


def _choi_apply_expr(J, rho_AB: np.ndarray, dA: int, dB: int, d_out: int):
    """(id_A (x) Phi_J)(rho_AB) as a cvxpy expression linear in the Choi J."""
    rho_AB_TB = linalg.partial_transpose(rho_AB, (dA, dB), 1)
    M = linalg.tensor(rho_AB_TB, np.eye(d_out))
    E = cp.kron(np.eye(dA), J) @ M
    return cp.partial_trace(E, [dA, dB, d_out], 1)


def _project_to_tpcp(choi: np.ndarray, d_in: int, d_out: int) -> Channel:
    """Clean up solver output: hermitize, clamp to PSD, rescale so that
    tr_out(choi) = id exactly."""
    H = linalg.hermitianize(np.asarray(choi, dtype=complex))
    w, V = npl.eigh(H)
    w = np.maximum(w, 0.0)
    H = (V * w) @ V.conj().T
    T = linalg.partial_trace(H, (d_in, d_out), (0,))
    T_m12 = linalg.matrix_func_on_support(T, lambda x: x ** -0.5)
    # rank-deficient T would leave a trace deficit; complete with a
    # depolarizing direction so the channel stays TP
    corr = linalg.tensor(T_m12, np.eye(d_out))
    H = corr @ H @ corr.conj().T
    P = linalg.support_projector(T)
    resid = np.eye(d_in) - P
    if npl.norm(resid) > 1e-14:
        H = H + linalg.tensor(resid, np.eye(d_out) / d_out)
    H = linalg.hermitianize(H)
    H.setflags(write=False)
    return Channel(H, d_in, d_out)


def fidelity_of_recovery(
    rho: DensityMatrix, labels: TripartiteLabels
) -> tuple[float, Channel]:
    """Best achievable fidelity between rho_ABC and R(rho_AB) over all
    trace-preserving completely positive R from B to B (x) C, together with
    an optimizing channel."""
    labels.validate(rho.dims)
    dA = int(np.prod([rho.dims[i] for i in labels.a]))
    dB = rho.dims[labels.b]
    dC = rho.dims[labels.c]
    if dB * dB * dC > 128:
        raise ValueError("channel Choi dimension too large")
    d = rho.side
    rho_AB = linalg.partial_trace(rho.matrix, rho.dims, labels.a + (labels.b,))
    J = cp.Variable((dB * dB * dC,) * 2, hermitian=True)
    X = cp.Variable((d, d), complex=True)
    sigma = _choi_apply_expr(J, rho_AB, dA, dB, dB * dC)
    cons = [
        J >> 0,
        cp.partial_trace(J, [dB, dB * dC], 1) == np.eye(dB),
        cp.bmat([[rho.matrix, X], [X.H, sigma]]) >> 0,
    ]
    prob = _solve_cvxpy(cp.Maximize(cp.real(cp.trace(X))), cons)
    witness = _project_to_tpcp(J.value, dB, dB * dC)
    return float(prob.value), witness


def fidelity_of_recovery_unital_form(
    rho: DensityMatrix, labels: TripartiteLabels
) -> tuple[float, Channel]:
    """Fidelity of recovery restricted to channels of the sandwiched form

        X |-> rho_BC^{1/2} U(rho_B^{-1/2} X rho_B^{-1/2} (x) id_C) rho_BC^{1/2}

    with U a unital trace-preserving CP map on B (x) C. The variable is the
    Choi matrix of U; unitality and trace preservation are the two partial
    trace constraints.
    """
    labels.validate(rho.dims)
    dA = int(np.prod([rho.dims[i] for i in labels.a]))
    dB = rho.dims[labels.b]
    dC = rho.dims[labels.c]
    dBC = dB * dC
    d = rho.side
    rho_AB = linalg.partial_trace(rho.matrix, rho.dims, labels.a + (labels.b,))
    rho_BC = linalg.partial_trace(rho.matrix, rho.dims, (labels.b, labels.c))
    rho_B = linalg.partial_trace(rho.matrix, rho.dims, (labels.b,))
    rB_m12 = linalg.matrix_func_on_support(rho_B, lambda x: x ** -0.5)
    rBC_12 = linalg.sqrtm_psd(rho_BC)
    # constant input to U: (id_A (x) rho_B^{-1/2}) rho_AB (...) (x) id_C / dC-free embedding
    Z = linalg.op_on_subsystem(rB_m12, (dA, dB), 1)
    pre = Z @ rho_AB @ Z.conj().T
    pre_ABC = linalg.tensor(pre, np.eye(dC))  # on A (x) B (x) C, ordered A,B,C
    K = cp.Variable((dBC * dBC,) * 2, hermitian=True)
    X = cp.Variable((d, d), complex=True)
    # apply U on the BC part, then sandwich with rho_BC^{1/2}
    pre_T = linalg.partial_transpose(pre_ABC, (dA, dBC), 1)
    W = cp.partial_trace(
        cp.kron(np.eye(dA), K) @ linalg.tensor(pre_T, np.eye(dBC)),
        [dA, dBC, dBC],
        1,
    )
    S = linalg.tensor(np.eye(dA), rBC_12)
    sigma = S @ W @ S.conj().T
    # the composite sandwich is trace preserving iff tr_C of the adjoint
    # of U applied to rho_BC gives back rho_B; without this the inner-map
    # constraints alone do not yield a channel
    U_adj_rBC = cp.partial_trace(K @ linalg.tensor(np.eye(dBC), rho_BC), [dBC, dBC], 1).T
    cons = [
        K >> 0,
        cp.partial_trace(K, [dBC, dBC], 1) == np.eye(dBC),  # trace preserving
        cp.partial_trace(K, [dBC, dBC], 0) == np.eye(dBC),  # unital
        cp.partial_trace(U_adj_rBC, [dB, dC], 1) == rho_B,
        cp.bmat([[rho.matrix, X], [X.H, sigma]]) >> 0,
    ]
    prob = _solve_cvxpy(cp.Maximize(cp.real(cp.trace(X))), cons)
    # assemble the composite B -> BC channel from the inner-map Choi
    K_val = linalg.hermitianize(np.asarray(K.value))
    choi = _compose_sandwich_choi(K_val, rho_B, rho_BC, dB, dC)
    witness = _project_to_tpcp(choi, dB, dBC)
    return float(prob.value), witness


def _compose_sandwich_choi(
    K_val: np.ndarray, rho_B: np.ndarray, rho_BC: np.ndarray, dB: int, dC: int
) -> np.ndarray:
    """Choi matrix of X |-> rBC^{1/2} U(rB^{-1/2} X rB^{-1/2} (x) id_C) rBC^{1/2},
    completed off the support of rho_B by preparing rho_BC."""
    dBC = dB * dC
    rB_m12 = linalg.matrix_func_on_support(rho_B, lambda x: x ** -0.5)
    rBC_12 = linalg.sqrtm_psd(rho_BC)
    P = linalg.support_projector(rho_B)
    choi = np.zeros((dB * dBC,) * 2, dtype=complex)
    basis = np.eye(dB)
    for i in range(dB):
        for j in range(dB):
            Xij = np.outer(basis[i], basis[j])
            Y = linalg.tensor(rB_m12 @ Xij @ rB_m12, np.eye(dC))
            # U(Y) = tr_in[K (Y^T (x) id)]
            UY = linalg.partial_trace(
                K_val @ linalg.tensor(Y.T, np.eye(dBC)), (dBC, dBC), (1,)
            )
            out = rBC_12 @ UY @ rBC_12
            # residual weight off the support of rho_B goes to rho_BC
            resid = Xij - P @ Xij @ P
            out = out + np.trace(resid) * rho_BC
            choi += np.kron(Xij, out)
    return choi
