"""Density operators: validation, canonical examples, random ensembles.

States carry their subsystem dimensions. A tripartite split is described by
a :class:`TripartiteLabels` assigning dimension indices to the three parts.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
import numpy.linalg as npl

from . import linalg

PSD_CLAMP = 1e-10
TRACE_TOL = 1e-8


@dataclass(frozen=True)
class DensityMatrix:
    """Validated Hermitian PSD unit-trace operator with subsystem dims."""

    matrix: np.ndarray
    dims: tuple[int, ...]

    @property
    def side(self) -> int:
        return self.matrix.shape[0]

    def marginal(self, keep: Sequence[int]) -> "DensityMatrix":
        keep = sorted(keep)
        M = linalg.partial_trace(self.matrix, self.dims, keep)
        return DensityMatrix(M, tuple(self.dims[k] for k in keep))

    def permute(self, perm: Sequence[int]) -> "DensityMatrix":
        M = linalg.permute_subsystems(self.matrix, self.dims, perm)
        return DensityMatrix(M, tuple(self.dims[p] for p in perm))


@dataclass(frozen=True)
class TripartiteLabels:
    """Indices of the A, B, and C subsystems inside a DimVector.

    The B and C factors must be single subsystems with C immediately after
    B at the end of the dimension list; A may span several factors.
    """

    a: tuple[int, ...]
    b: int
    c: int

    def validate(self, dims: Sequence[int]) -> None:
        n = len(dims)
        all_idx = sorted(self.a + (self.b, self.c))
        if all_idx != list(range(n)):
            raise ValueError(f"labels {self} do not partition {n} subsystems")
        if self.c != n - 1 or self.b != n - 2 or self.a != tuple(range(n - 2)):
            raise ValueError(
                "expected layout A..A, B, C with B and C the last two factors"
            )

    @staticmethod
    def standard(n_subsystems: int) -> "TripartiteLabels":
        return TripartiteLabels(
            a=tuple(range(n_subsystems - 2)), b=n_subsystems - 2, c=n_subsystems - 1
        )


def new_density(M: np.ndarray, dims: Sequence[int]) -> DensityMatrix:
    """Validate and normalize a candidate density matrix.

    Hermitizes, clamps eigenvalue rounding noise in [-1e-10, 0), and
    renormalizes the trace if it deviates from 1 by at most 1e-8. Larger
    deviations and genuinely negative eigenvalues are errors.
    """
    M = np.asarray(M, dtype=complex)
    dims = tuple(int(d) for d in dims)
    side = int(np.prod(dims))
    if M.shape != (side, side):
        raise ValueError(f"matrix shape {M.shape} inconsistent with dims {dims}")
    linalg.check_finite(M)
    H = linalg.hermitianize(M)
    if npl.norm(H - M) > 1e-8 * max(npl.norm(M), 1.0):
        raise ValueError("matrix is not Hermitian within tolerance")
    tr = float(np.trace(H).real)
    if abs(tr - 1.0) > TRACE_TOL:
        raise ValueError(f"trace {tr!r} deviates from 1 by more than {TRACE_TOL}")
    w, V = npl.eigh(H)
    if w[0] < -PSD_CLAMP:
        raise ValueError(f"matrix is not PSD: min eigenvalue {w[0]:.3e}")
    # reconstruct only when repair is actually needed, so that already-valid
    # matrices round-trip bit-for-bit through serialization
    if w[0] < 0.0:
        w = np.maximum(w, 0.0)
        H = (V * w) @ V.conj().T
        H = linalg.hermitianize(H)
        tr = float(np.trace(H).real)
    if abs(tr - 1.0) > 1e-13:
        H = H / tr
    H = np.array(H)
    H.setflags(write=False)
    return DensityMatrix(H, dims)


def random_density(dims: Sequence[int], rank: int, seed: int) -> DensityMatrix:
    """Seeded random state: partial trace of a Haar-random pure state on
    system (x) rank-dimensional ancilla (Ginibre-induced measure)."""
    dims = tuple(int(d) for d in dims)
    side = int(np.prod(dims))
    if not 1 <= rank <= side * max(side, 1):
        if rank < 1:
            raise ValueError(f"rank must be >= 1, got {rank}")
    if rank < 1 or rank > side:
        raise ValueError(f"rank {rank} out of range [1, {side}]")
    rng = np.random.default_rng(seed)
    G = rng.standard_normal((side, rank)) + 1j * rng.standard_normal((side, rank))
    M = G @ G.conj().T
    return new_density(M / np.trace(M).real, dims)


def random_pure(dims: Sequence[int], seed: int) -> DensityMatrix:
    """Haar-random pure state."""
    return random_density(dims, rank=1, seed=seed)


def counterexample_state() -> DensityMatrix:
    """Three-qubit diagonal state for which the transpose recovery map is
    not square-root optimal: 1/2 |000><000| + 1/8 |1><1|_A (x) id_BC."""
    diag = np.array([0.5, 0, 0, 0, 0.125, 0.125, 0.125, 0.125])
    return new_density(np.diag(diag).astype(complex), (2, 2, 2))


def qcq_state(P: Sequence[float], rho_AC_list: Sequence[DensityMatrix]) -> DensityMatrix:
    """State with a classical B register: sum_b P(b)|b><b|_B (x) rho_AC_b,
    reordered to A (x) B (x) C."""
    P = np.asarray(P, dtype=float)
    if P.min() < -1e-12 or abs(P.sum() - 1.0) > 1e-10:
        raise ValueError("P is not a probability distribution")
    if len(rho_AC_list) != len(P):
        raise ValueError("need one AC block per value of B")
    dims_ac = rho_AC_list[0].dims
    if len(dims_ac) != 2 or any(r.dims != dims_ac for r in rho_AC_list):
        raise ValueError("all AC blocks must share the same (dA, dC) dims")
    dA, dC = dims_ac
    dB = len(P)
    # assemble on B (x) A (x) C, then permute to A (x) B (x) C
    M = np.zeros((dB * dA * dC,) * 2, dtype=complex)
    for b, (p, blk) in enumerate(zip(P, rho_AC_list)):
        proj = np.zeros((dB, dB))
        proj[b, b] = 1.0
        M += p * linalg.tensor(proj, blk.matrix)
    M = linalg.permute_subsystems(M, (dB, dA, dC), (1, 0, 2))
    return new_density(M, (dA, dB, dC))


def classical_chain(P: Sequence[float]) -> DensityMatrix:
    """Classical copy chain sum_x P(x) |xxx><xxx| on qudits of dim len(P)."""
    P = np.asarray(P, dtype=float)
    d = len(P)
    M = np.zeros((d ** 3,) * 2)
    for x, p in enumerate(P):
        i = x * d * d + x * d + x
        M[i, i] = p
    return new_density(M.astype(complex), (d, d, d))


def flag_extension(rho0: DensityMatrix, rho1: DensityMatrix, p: float) -> DensityMatrix:
    """Mix two states with an orthogonal two-valued flag prepended:
    (1-p)|0><0| (x) rho0 + p|1><1| (x) rho1.

    The flag register is the leftmost factor and is treated as part of the
    extension system A in entropic calls.
    """
    if rho0.dims != rho1.dims:
        raise ValueError(f"dims mismatch: {rho0.dims} vs {rho1.dims}")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    P0 = np.diag([1.0, 0.0])
    P1 = np.diag([0.0, 1.0])
    M = (1 - p) * linalg.tensor(P0, rho0.matrix) + p * linalg.tensor(P1, rho1.matrix)
    return new_density(M, (2,) + rho0.dims)


def purify(rho: DensityMatrix, rank_tol: float = linalg.DEFAULT_RANK_TOL) -> DensityMatrix:
    """Pure state on system (x) ancilla whose ancilla marginal is ``rho``.

    The ancilla dimension equals the rank of ``rho``; a pure input gets a
    trivial one-dimensional ancilla.
    """
    spec = linalg.herm_eig(rho.matrix)
    w = np.maximum(spec.eigenvalues, 0.0)
    keep = w > rank_tol * max(w[0], 0.0)
    lam = w[keep]
    V = spec.eigenvectors[:, keep]
    r = len(lam)
    psi = np.zeros(rho.side * r, dtype=complex)
    for k in range(r):
        psi += np.sqrt(lam[k]) * np.kron(V[:, k], np.eye(r)[:, k])
    psi /= npl.norm(psi)
    return new_density(np.outer(psi, psi.conj()), rho.dims + (r,))


def random_extensions(
    rho_BC: DensityMatrix,
    n: int,
    dim_a: int,
    seed: int,
    ancilla_dim: int = 1,
) -> list[DensityMatrix]:
    """Extensions of a fixed marginal, as states on A (x) B (x) C.

    Purifies ``rho_BC``, applies a seeded Haar-random isometry from the
    purifying system into A (x) ancilla, and traces out the ancilla. Every
    output has exactly the marginal ``rho_BC``; ``ancilla_dim`` = 1 yields
    pure extensions.
    """
    psi = purify(rho_BC)  # dims (dB, dC, r)
    r = psi.dims[-1]
    d_target = dim_a * ancilla_dim
    if d_target < r:
        raise ValueError(
            f"isometry target dim {d_target} smaller than purifying rank {r}"
        )
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(n):
        G = rng.standard_normal((d_target, r)) + 1j * rng.standard_normal((d_target, r))
        V_iso, _ = npl.qr(G)  # d_target x r isometry
        W = linalg.tensor(np.eye(rho_BC.side), V_iso)
        M = W @ psi.matrix @ W.conj().T
        dims = rho_BC.dims + (dim_a, ancilla_dim)
        # reorder (B, C, A, anc) -> (A, B, C, anc), trace out anc
        M = linalg.permute_subsystems(M, dims, (2, 0, 1, 3))
        M = linalg.partial_trace(M, (dim_a,) + rho_BC.dims + (ancilla_dim,), (0, 1, 2))
        out.append(new_density(M, (dim_a,) + rho_BC.dims))
    return out


def to_json_dict(rho: DensityMatrix) -> dict:
    """State file schema: {dims: [..], matrix: [[re, im], ...] row-major}."""
    flat = rho.matrix.reshape(-1)
    return {
        "dims": list(rho.dims),
        "matrix": [[float(z.real), float(z.imag)] for z in flat],
    }


def from_json_dict(obj: dict) -> DensityMatrix:
    dims = tuple(int(d) for d in obj["dims"])
    side = int(np.prod(dims))
    entries = np.array([complex(re, im) for re, im in obj["matrix"]])
    if entries.size != side * side:
        raise ValueError("matrix entry count inconsistent with dims")
    return new_density(entries.reshape(side, side), dims)


def save_state(rho: DensityMatrix, path: str) -> None:
    with open(path, "w") as fh:
        json.dump(to_json_dict(rho), fh)


def load_state(path: str) -> DensityMatrix:
    with open(path) as fh:
        return from_json_dict(json.load(fh))
