"""Dense complex linear-algebra kernel for multipartite operators.

Everything here works on plain numpy arrays. Subsystem ordering is
big-endian throughout: in a tensor product the leftmost factor varies
slowest, matching ``numpy.kron``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np
import numpy.linalg as npl

DEFAULT_RANK_TOL = 1e-10
HERM_TOL = 1e-10


def hermitianize(A: np.ndarray) -> np.ndarray:
    """Return the Hermitian part (A + A^dagger) / 2."""
    return (A + A.conj().T) / 2


def check_finite(A: np.ndarray, name: str = "matrix") -> None:
    if not np.all(np.isfinite(A)):
        raise ValueError(f"{name} contains NaN or Inf entries")


@dataclass(frozen=True)
class Spectrum:
    """Eigendecomposition of a Hermitian matrix, eigenvalues descending."""

    eigenvalues: np.ndarray  # real, descending
    eigenvectors: np.ndarray  # unitary, columns match eigenvalues

    def reconstruct(self) -> np.ndarray:
        V = self.eigenvectors
        return (V * self.eigenvalues) @ V.conj().T


def herm_eig(H: np.ndarray) -> Spectrum:
    """Spectral decomposition of a Hermitian matrix.

    The input is symmetrized before diagonalization, so inputs that are
    Hermitian only up to rounding noise are accepted.
    """
    H = np.asarray(H, dtype=complex)
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {H.shape}")
    check_finite(H)
    scale = npl.norm(H)
    if scale > 0 and npl.norm(H - H.conj().T) > 1e-8 * scale:
        raise ValueError("matrix is not Hermitian within tolerance")
    w, V = npl.eigh(hermitianize(H))
    order = np.argsort(w)[::-1]
    return Spectrum(eigenvalues=w[order], eigenvectors=V[:, order])


def matrix_func_on_support(
    H: np.ndarray,
    f: Callable[[float], complex],
    rank_tol: float = DEFAULT_RANK_TOL,
) -> np.ndarray:
    """Apply a scalar function to a PSD matrix, restricted to its support.

    Eigenvalues at or below ``rank_tol * lambda_max`` are mapped to zero
    regardless of ``f``; small negative eigenvalues in that band are treated
    as rounding noise, anything more negative is rejected as non-PSD.
    """
    spec = herm_eig(H)
    w = spec.eigenvalues
    lam_max = max(float(w[0]), 0.0)
    thr = rank_tol * lam_max
    if w[-1] < -thr - 1e-300:
        if lam_max == 0.0 or w[-1] < -max(thr, rank_tol):
            raise ValueError(
                f"matrix is not PSD: min eigenvalue {w[-1]:.3e} below clamp range"
            )
    fw = np.zeros(len(w), dtype=complex)
    for i, lam in enumerate(w):
        if lam > thr:
            val = f(lam)
            if not np.isfinite(val):
                raise ValueError(f"function not finite on retained eigenvalue {lam!r}")
            fw[i] = val
    V = spec.eigenvectors
    return (V * fw) @ V.conj().T


def support_projector(H: np.ndarray, rank_tol: float = DEFAULT_RANK_TOL) -> np.ndarray:
    """Projector onto the support (range) of a PSD matrix."""
    return matrix_func_on_support(H, lambda x: 1.0, rank_tol)


def sqrtm_psd(H: np.ndarray, rank_tol: float = DEFAULT_RANK_TOL) -> np.ndarray:
    return matrix_func_on_support(H, np.sqrt, rank_tol)


def tensor(*ops: np.ndarray) -> np.ndarray:
    """Kronecker product, leftmost factor most significant."""
    out = np.array([[1.0 + 0j]])
    for op in ops:
        out = np.kron(out, np.asarray(op, dtype=complex))
    return out


def _check_dims(M: np.ndarray, dims: Sequence[int]) -> tuple[int, ...]:
    dims = tuple(int(d) for d in dims)
    if any(d < 1 for d in dims):
        raise ValueError(f"subsystem dimensions must be >= 1, got {dims}")
    side = int(np.prod(dims))
    if M.shape != (side, side):
        raise ValueError(f"dims {dims} inconsistent with matrix shape {M.shape}")
    return dims


def partial_trace(M: np.ndarray, dims: Sequence[int], keep: Iterable[int]) -> np.ndarray:
    """Trace out all subsystems not listed in ``keep`` (order preserved)."""
    M = np.asarray(M, dtype=complex)
    dims = _check_dims(M, dims)
    n = len(dims)
    keep = sorted(set(int(k) for k in keep))
    if any(k < 0 or k >= n for k in keep):
        raise ValueError(f"keep indices {keep} out of range for {n} subsystems")
    T = M.reshape(dims + dims)
    for i in sorted((i for i in range(n) if i not in keep), reverse=True):
        T = np.trace(T, axis1=i, axis2=i + T.ndim // 2)
    d_keep = int(np.prod([dims[k] for k in keep])) if keep else 1
    return T.reshape(d_keep, d_keep)


def permute_subsystems(M: np.ndarray, dims: Sequence[int], perm: Sequence[int]) -> np.ndarray:
    """Reorder tensor factors: output factor i is input factor perm[i]."""
    M = np.asarray(M, dtype=complex)
    dims = _check_dims(M, dims)
    n = len(dims)
    perm = [int(p) for p in perm]
    if sorted(perm) != list(range(n)):
        raise ValueError(f"perm {perm} is not a permutation of 0..{n - 1}")
    T = M.reshape(dims + dims)
    T = T.transpose(perm + [p + n for p in perm])
    side = int(np.prod(dims))
    return T.reshape(side, side)


def partial_transpose(M: np.ndarray, dims: Sequence[int], target: int) -> np.ndarray:
    """Transpose one tensor factor in place."""
    M = np.asarray(M, dtype=complex)
    dims = _check_dims(M, dims)
    n = len(dims)
    T = M.reshape(dims + dims)
    T = np.swapaxes(T, target, target + n)
    side = int(np.prod(dims))
    return T.reshape(side, side)


def op_on_subsystem(op: np.ndarray, dims: Sequence[int], target: int) -> np.ndarray:
    """Embed an operator on one factor: id (x) op (x) id."""
    dims = tuple(int(d) for d in dims)
    pre = int(np.prod(dims[:target])) if target > 0 else 1
    post = int(np.prod(dims[target + 1:])) if target + 1 < len(dims) else 1
    return tensor(np.eye(pre), op, np.eye(post))


def trace_norm(M: np.ndarray) -> float:
    """Sum of singular values."""
    M = np.asarray(M, dtype=complex)
    check_finite(M)
    return float(npl.svd(M, compute_uv=False).sum())


def fidelity(rho: np.ndarray, sigma: np.ndarray, rank_tol: float = DEFAULT_RANK_TOL) -> float:
    """F(rho, sigma) = || sqrt(rho) sqrt(sigma) ||_1 for PSD operators.

    Computed through spectral square roots, which stays well-conditioned
    for rank-deficient inputs.
    """
    return trace_norm(sqrtm_psd(rho, rank_tol) @ sqrtm_psd(sigma, rank_tol))
