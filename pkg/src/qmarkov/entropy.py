"""Entropic functionals: von Neumann entropy, conditional mutual
information, relative entropy, and measured relative entropy.

All quantities are in bits (log base 2). Conventions: 0 log 0 = 0, and the
relative entropy is +inf when the first argument leaves the support of the
second.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import numpy.linalg as npl
from scipy.optimize import minimize

from . import linalg
from .states import DensityMatrix, TripartiteLabels

LN2 = float(np.log(2.0))
EIG_FLOOR = 1e-12


@dataclass(frozen=True)
class EntropyReport:
    """The four entropies entering the conditional mutual information."""

    H_AB: float
    H_BC: float
    H_B: float
    H_ABC: float

    @property
    def I_ACgB(self) -> float:
        return self.H_AB + self.H_BC - self.H_B - self.H_ABC


def von_neumann(rho: DensityMatrix, rank_tol: float = linalg.DEFAULT_RANK_TOL) -> float:
    """-tr(rho log2 rho), computed over eigenvalues above the rank cutoff."""
    w = linalg.herm_eig(rho.matrix).eigenvalues
    w = w[w > rank_tol * max(float(w[0]), 0.0)]
    return float(-(w * np.log2(w)).sum())


def cmi(rho: DensityMatrix, labels: TripartiteLabels) -> EntropyReport:
    """Conditional mutual information I(A:C|B) via its four entropies."""
    labels.validate(rho.dims)
    ab = labels.a + (labels.b,)
    bc = (labels.b, labels.c)
    return EntropyReport(
        H_AB=von_neumann(rho.marginal(ab)),
        H_BC=von_neumann(rho.marginal(bc)),
        H_B=von_neumann(rho.marginal((labels.b,))),
        H_ABC=von_neumann(rho),
    )


def _log2_on_support(M: np.ndarray) -> np.ndarray:
    return linalg.matrix_func_on_support(M, np.log2)


def _support_leak(rho: np.ndarray, sigma: np.ndarray) -> float:
    """Weight of rho outside the support of sigma."""
    P = linalg.support_projector(sigma)
    return float(np.trace(rho).real - np.trace(P @ rho @ P).real)


def relative_entropy(rho: DensityMatrix, sigma: np.ndarray, support_tol: float = 1e-9) -> float:
    """D(rho || sigma) = tr rho (log2 rho - log2 sigma), or +inf outside support."""
    sigma = np.asarray(sigma, dtype=complex)
    if _support_leak(rho.matrix, sigma) > support_tol:
        return float("inf")
    lr = _log2_on_support(rho.matrix)
    ls = _log2_on_support(sigma)
    # tr(rho log sigma) is well-defined on the joint support; project rho
    P = linalg.support_projector(sigma)
    r = P @ rho.matrix @ P
    return float(np.trace(r @ lr).real - np.trace(r @ ls).real)


def _herm_to_vec(H: np.ndarray) -> np.ndarray:
    d = H.shape[0]
    iu = np.triu_indices(d, 1)
    return np.concatenate([np.diag(H).real, H[iu].real, H[iu].imag])


def _vec_to_herm(x: np.ndarray, d: int) -> np.ndarray:
    iu = np.triu_indices(d, 1)
    n_off = len(iu[0])
    H = np.zeros((d, d), dtype=complex)
    H[np.diag_indices(d)] = x[:d]
    H[iu] = x[d:d + n_off] + 1j * x[d + n_off:]
    return H + np.triu(H, 1).conj().T


def measured_relative_entropy(
    rho: DensityMatrix,
    sigma: DensityMatrix,
    support_tol: float = 1e-9,
    gtol: float = 1e-11,
) -> float:
    """Measured relative entropy D_M(rho || sigma) in bits.

    Solves the concave variational program

        sup_H  tr(rho H) + 1 - tr(sigma exp(H))        (H Hermitian)

    whose value in nats equals the supremum of the classical relative
    entropy over all POVM outcome distributions. The substitution
    omega = exp(H) makes the problem unconstrained; the gradient of
    tr(sigma exp(H)) is evaluated through first divided differences of exp
    on the spectrum of H.
    """
    # restrict to the support of sigma
    w, V = npl.eigh(linalg.hermitianize(sigma.matrix))
    keep = w > EIG_FLOOR * max(float(w[-1]), 0.0)
    Vs = V[:, keep]
    s = Vs.conj().T @ sigma.matrix @ Vs
    r = Vs.conj().T @ rho.matrix @ Vs
    if float(np.trace(rho.matrix).real - np.trace(r).real) > support_tol:
        return float("inf")
    ds = s.shape[0]

    def neg_objective(x: np.ndarray):
        H = _vec_to_herm(x, ds)
        hw, hV = npl.eigh(H)
        # cap keeps exp finite when the line search overshoots; the
        # gradient still points back toward the optimum
        hw = np.clip(hw, -500.0, 500.0)
        ehw = np.exp(hw)
        eH = (hV * ehw) @ hV.conj().T
        f = np.trace(r @ H).real + 1.0 - np.trace(s @ eH).real
        dw = hw[:, None] - hw[None, :]
        small = np.abs(dw) < 1e-10
        with np.errstate(over="ignore", invalid="ignore"):
            Phi = np.where(
                small,
                np.exp(np.clip((hw[:, None] + hw[None, :]) / 2, None, 500.0)),
                (ehw[:, None] - ehw[None, :]) / np.where(small, 1.0, dw),
            )
        S = hV.conj().T @ s @ hV
        G = linalg.hermitianize(r - hV @ (S * Phi) @ hV.conj().T)
        iu = np.triu_indices(ds, 1)
        grad = np.concatenate([np.diag(G).real, 2 * G[iu].real, 2 * G[iu].imag])
        return -f, -grad

    def log_clamped(A: np.ndarray) -> np.ndarray:
        aw, aV = npl.eigh(linalg.hermitianize(A))
        aw = np.maximum(aw, 1e-14)
        return (aV * np.log(aw)) @ aV.conj().T

    x0 = _herm_to_vec(log_clamped(r) - log_clamped(s))
    res = minimize(
        neg_objective, x0, jac=True, method="L-BFGS-B",
        options=dict(maxiter=5000, ftol=1e-16, gtol=gtol),
    )
    return float(-res.fun) / LN2


def classical_relative_entropy(p: np.ndarray, q: np.ndarray) -> float:
    """KL divergence of two outcome distributions, in bits."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    mask = p > 1e-15
    if np.any(q[mask] <= 1e-15):
        return float("inf")
    return float((p[mask] * np.log2(p[mask] / q[mask])).sum())


def measured_rel_ent_lower(
    rho: DensityMatrix,
    sigma: DensityMatrix,
    n_samples: int,
    seed: int,
) -> float:
    """Monte-Carlo lower bound on D_M over Haar-random rank-one projective
    measurements (outcome count = dimension)."""
    d = rho.side
    rng = np.random.default_rng(seed)
    best = 0.0
    for _ in range(n_samples):
        G = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        U, _ = npl.qr(G)
        p = np.einsum("ji,jk,ki->i", U.conj(), rho.matrix, U).real
        q = np.einsum("ji,jk,ki->i", U.conj(), sigma.matrix, U).real
        p = np.clip(p, 0.0, None)
        q = np.clip(q, 0.0, None)
        val = classical_relative_entropy(p / p.sum(), q / max(q.sum(), 1e-300))
        if np.isfinite(val):
            best = max(best, val)
    return best
