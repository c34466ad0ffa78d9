"""Quantum channels as Choi matrices and the Petz recovery-map family.

Choi convention: choi = sum_{ij} |i><j|_in (x) Phi(|i><j|) on in (x) out,
so complete positivity is choi >= 0 and trace preservation is
tr_out(choi) = id_in.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence

import numpy as np
import numpy.linalg as npl

from . import linalg
from .entropy import LN2, cmi, measured_relative_entropy
from .states import DensityMatrix, TripartiteLabels, new_density

CHOI_PSD_TOL = 1e-9
TP_TOL = 1e-8


@dataclass(frozen=True)
class Channel:
    """Completely positive trace-preserving map, stored as a Choi matrix."""

    choi: np.ndarray  # on in (x) out
    dim_in: int
    dim_out: int

    def kraus(self, rank_tol: float = 1e-12) -> list[np.ndarray]:
        """Kraus operators (out x in) from the Choi eigendecomposition."""
        spec = linalg.herm_eig(self.choi)
        ops = []
        lam_max = max(float(spec.eigenvalues[0]), 0.0)
        for lam, v in zip(spec.eigenvalues, spec.eigenvectors.T):
            if lam > rank_tol * lam_max:
                K = np.sqrt(lam) * v.reshape(self.dim_in, self.dim_out).T
                ops.append(K)
        return ops


def channel_from_kraus(kraus_list: Sequence[np.ndarray]) -> Channel:
    """Build a Channel from Kraus operators (each out x in)."""
    if len(kraus_list) == 0:
        raise ValueError("need at least one Kraus operator")
    d_out, d_in = kraus_list[0].shape
    comp = sum(K.conj().T @ K for K in kraus_list)
    if npl.norm(comp - np.eye(d_in)) > TP_TOL * d_in:
        raise ValueError("Kraus operators do not satisfy the completeness relation")
    return _channel_from_kraus_unchecked(kraus_list, d_in, d_out)


def _channel_from_kraus_unchecked(
    kraus_list: Sequence[np.ndarray], d_in: int, d_out: int
) -> Channel:
    choi = np.zeros((d_in * d_out,) * 2, dtype=complex)
    for K in kraus_list:
        # vec of (id (x) K)|Omega> with |Omega> = sum_i |i>|i>
        v = K.T.reshape(-1)  # index order (in, out)
        choi += np.outer(v, v.conj())
    choi = linalg.hermitianize(choi)
    choi.setflags(write=False)
    return Channel(choi, d_in, d_out)


def identity_channel(d: int) -> Channel:
    return channel_from_kraus([np.eye(d)])


def apply(chan: Channel, rho: DensityMatrix, target: int) -> DensityMatrix:
    """Apply a channel to one subsystem; the target factor is replaced by
    the channel output (a B -> B(x)C map expands B into B, C)."""
    if rho.dims[target] != chan.dim_in:
        raise ValueError(
            f"target dim {rho.dims[target]} != channel input dim {chan.dim_in}"
        )
    out = np.zeros_like(rho.matrix, shape=(rho.side // chan.dim_in * chan.dim_out,) * 2)
    for K in chan.kraus():
        Kfull = linalg.op_on_subsystem(K, rho.dims, target)
        # op_on_subsystem builds id (x) K (x) id with K rectangular
        out = out + Kfull @ rho.matrix @ Kfull.conj().T
    out_dims = rho.dims[:target] + _split_dims(chan) + rho.dims[target + 1:]
    return new_density(out, out_dims)


def _split_dims(chan: Channel) -> tuple[int, ...]:
    """Output dims of a recovery channel: B (x) C if dim_out is a multiple
    of dim_in, else a single factor."""
    if chan.dim_out % chan.dim_in == 0 and chan.dim_out > chan.dim_in:
        return (chan.dim_in, chan.dim_out // chan.dim_in)
    return (chan.dim_out,)


def _petz_kraus(
    rho_BC: DensityMatrix, t: float, rank_tol: float = linalg.DEFAULT_RANK_TOL
) -> list[np.ndarray]:
    """Kraus operators of the rotated transpose map
    X |-> rho_BC^{1/2+it} (rho_B^{-1/2-it} X rho_B^{-1/2+it} (x) id_C) rho_BC^{1/2-it}
    completed off the support of rho_B by preparing rho_BC."""
    dB, dC = rho_BC.dims
    rho_B = linalg.partial_trace(rho_BC.matrix, rho_BC.dims, (0,))
    M = linalg.matrix_func_on_support(
        rho_BC.matrix, lambda x: np.exp((0.5 + 1j * t) * np.log(x)), rank_tol
    )
    N = linalg.matrix_func_on_support(
        rho_B, lambda x: np.exp((-0.5 - 1j * t) * np.log(x)), rank_tol
    )
    kraus = []
    for j in range(dC):
        ket = np.zeros((dC, 1))
        ket[j, 0] = 1.0
        kraus.append(M @ np.kron(N, ket))
    # off-support completion: kernel of rho_B is sent to rho_BC
    P = linalg.support_projector(rho_B, rank_tol)
    kw, kV = npl.eigh(np.eye(dB) - P)
    kernel_vecs = [kV[:, i] for i in range(dB) if kw[i] > 0.5]
    if kernel_vecs:
        spec = linalg.herm_eig(rho_BC.matrix)
        lam_max = max(float(spec.eigenvalues[0]), 0.0)
        for lam, phi in zip(spec.eigenvalues, spec.eigenvectors.T):
            if lam > rank_tol * lam_max:
                for u in kernel_vecs:
                    kraus.append(np.sqrt(lam) * np.outer(phi, u.conj()))
    return kraus


def petz_transpose(rho_BC: DensityMatrix) -> Channel:
    """Transpose (Petz) recovery map of a B (x) C marginal."""
    return rotated_petz(rho_BC, 0.0)


def rotated_petz(rho_BC: DensityMatrix, t: float) -> Channel:
    """Rotated transpose map with imaginary power parameter t; t = 0 is the
    plain transpose map."""
    if len(rho_BC.dims) != 2:
        raise ValueError("rho_BC must carry dims (dB, dC)")
    dB, dC = rho_BC.dims
    return _channel_from_kraus_unchecked(_petz_kraus(rho_BC, t), dB, dB * dC)


@dataclass(frozen=True)
class AveragingScheme:
    """Quadrature nodes and weights for mixing rotated transpose maps."""

    nodes: tuple[float, ...]
    weights: tuple[float, ...]

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        if len(self.nodes) != len(w) or len(w) == 0:
            raise ValueError("nodes and weights must be equal-length and non-empty")
        if w.min() < 0 or abs(w.sum() - 1.0) > 1e-12:
            raise ValueError("weights must be non-negative and sum to 1")

    @staticmethod
    def cosh_weighted(n_nodes: int = 41, halfwidth: float = 8.0) -> "AveragingScheme":
        """Uniform grid on [-T, T] weighted by pi/2 (cosh(pi t) + 1)^-1,
        renormalized. This density makes the averaged rotated transpose map
        satisfy the measured-relative-entropy recovery bound."""
        t = np.linspace(-halfwidth, halfwidth, n_nodes)
        w = (np.pi / 2) / (np.cosh(np.pi * t) + 1.0)
        w = w / w.sum()
        return AveragingScheme(tuple(t), tuple(w))

    @staticmethod
    def uniform(n_nodes: int = 41, halfwidth: float = 8.0) -> "AveragingScheme":
        t = np.linspace(-halfwidth, halfwidth, n_nodes)
        w = np.full(n_nodes, 1.0 / n_nodes)
        return AveragingScheme(tuple(t), tuple(w))

    @staticmethod
    def single(t: float = 0.0) -> "AveragingScheme":
        return AveragingScheme((t,), (1.0,))


def averaged_rotated_petz(rho_BC: DensityMatrix, scheme: AveragingScheme) -> Channel:
    """Convex mixture of rotated transpose maps over an averaging scheme."""
    dB, dC = rho_BC.dims
    choi = np.zeros((dB * dB * dC,) * 2, dtype=complex)
    for t, w in zip(scheme.nodes, scheme.weights):
        choi += w * rotated_petz(rho_BC, t).choi
    choi = linalg.hermitianize(choi)
    choi.setflags(write=False)
    return Channel(choi, dB, dB * dC)


@dataclass(frozen=True)
class TpcpValidation:
    min_choi_eigenvalue: float
    tp_deviation: float
    tol: float

    @property
    def passed(self) -> bool:
        return self.min_choi_eigenvalue >= -self.tol and self.tp_deviation <= self.tol


def validate_tpcp(chan: Channel, tol: float = TP_TOL) -> TpcpValidation:
    """Report the Choi minimum eigenvalue and trace-preservation residual."""
    w = linalg.herm_eig(chan.choi).eigenvalues
    tr_out = linalg.partial_trace(chan.choi, (chan.dim_in, chan.dim_out), (0,))
    dev = float(npl.norm(tr_out - np.eye(chan.dim_in)))
    return TpcpValidation(float(w[-1]), dev, tol)


@dataclass(frozen=True)
class RecoveryReport:
    """All quantities of one recovery-bound check, entropies in bits."""

    I_bits: float
    fid: float
    Dm_bits: float | None = None

    @property
    def neg2logF(self) -> float:
        if self.fid <= 0.0:
            return float("inf")
        return -2.0 * float(np.log2(self.fid))

    @property
    def delta_thm1(self) -> float:
        return self.I_bits - self.neg2logF

    @property
    def delta_meas(self) -> float | None:
        if self.Dm_bits is None:
            return None
        return self.I_bits - self.Dm_bits

    @property
    def delta_cor3(self) -> float:
        return self.fid - 1.0 + (LN2 / 2.0) * self.I_bits

    def as_dict(self) -> dict:
        return {
            "I_bits": self.I_bits,
            "fid": self.fid,
            "neg2logF": self.neg2logF,
            "Dm_bits": self.Dm_bits,
            "delta_thm1": self.delta_thm1,
            "delta_meas": self.delta_meas,
            "delta_cor3": self.delta_cor3,
        }


def recover(rho: DensityMatrix, labels: TripartiteLabels, chan: Channel) -> DensityMatrix:
    """Apply a B -> BC recovery channel to the AB marginal of a tripartite
    state, yielding the candidate reconstruction on A (x) B (x) C."""
    labels.validate(rho.dims)
    rho_AB = rho.marginal(labels.a + (labels.b,))
    return apply(chan, rho_AB, target=len(labels.a))


def recovery_report(
    rho: DensityMatrix,
    labels: TripartiteLabels,
    chan: Channel,
    compute_dm: bool = False,
) -> RecoveryReport:
    """Evaluate the recovery bounds of one channel on one state."""
    labels.validate(rho.dims)
    dB = rho.dims[labels.b]
    dC = rho.dims[labels.c]
    if chan.dim_in != dB or chan.dim_out != dB * dC:
        raise ValueError("channel dims inconsistent with the B and C systems")
    recovered = recover(rho, labels, chan)
    fid = min(linalg.fidelity(rho.matrix, recovered.matrix), 1.0)
    report = cmi(rho, labels)
    dm = None
    if compute_dm:
        dm = measured_relative_entropy(rho, recovered)
    return RecoveryReport(I_bits=report.I_ACgB, fid=fid, Dm_bits=dm)


def channel_to_json_dict(chan: Channel) -> dict:
    """Channel file schema: {dim_in, dim_out, choi: [[re, im], ...]}."""
    flat = chan.choi.reshape(-1)
    return {
        "dim_in": chan.dim_in,
        "dim_out": chan.dim_out,
        "choi": [[float(z.real), float(z.imag)] for z in flat],
    }


def channel_from_json_dict(obj: dict) -> Channel:
    d_in = int(obj["dim_in"])
    d_out = int(obj["dim_out"])
    side = d_in * d_out
    entries = np.array([complex(re, im) for re, im in obj["choi"]])
    if entries.size != side * side:
        raise ValueError("choi entry count inconsistent with dims")
    choi = entries.reshape(side, side)
    choi.setflags(write=False)
    return Channel(choi, d_in, d_out)


def save_channel(chan: Channel, path: str) -> None:
    with open(path, "w") as fh:
        json.dump(channel_to_json_dict(chan), fh)


def load_channel(path: str) -> Channel:
    with open(path) as fh:
        return channel_from_json_dict(json.load(fh))
