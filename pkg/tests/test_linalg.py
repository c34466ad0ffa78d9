"""Dense linear-algebra kernel: spectra, tensor manipulations, fidelity."""

import numpy as np
import numpy.linalg as npl
import pytest

from qmarkov import linalg


def _rand_herm(rng, d):
    G = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return (G + G.conj().T) / 2


def _rand_density(rng, d, rank=None):
    rank = rank or d
    G = rng.standard_normal((d, rank)) + 1j * rng.standard_normal((d, rank))
    M = G @ G.conj().T
    return M / np.trace(M).real


class TestHermEig:
    def test_identity(self):
        spec = linalg.herm_eig(np.eye(3))
        assert np.allclose(spec.eigenvalues, [1, 1, 1])

    def test_descending_order(self):
        spec = linalg.herm_eig(np.diag([0.1, 0.7, 0.2]))
        assert np.allclose(spec.eigenvalues, [0.7, 0.2, 0.1])

    def test_pauli_flip(self):
        X = np.array([[0, 1], [1, 0]], dtype=complex)
        spec = linalg.herm_eig(X)
        assert np.allclose(spec.eigenvalues, [1, -1])

    def test_reconstruct_random(self):
        rng = np.random.default_rng(7)
        for _ in range(200):
            d = rng.integers(1, 17)
            H = _rand_herm(rng, d)
            spec = linalg.herm_eig(H)
            assert npl.norm(spec.reconstruct() - H) <= 1e-10 * max(npl.norm(H), 1.0)
            V = spec.eigenvectors
            assert npl.norm(V.conj().T @ V - np.eye(d)) < 1e-12 * d

    def test_rejects_nonhermitian(self):
        with pytest.raises(ValueError):
            linalg.herm_eig(np.array([[0, 1], [0, 0]], dtype=complex))

    def test_rejects_nonsquare(self):
        with pytest.raises(ValueError):
            linalg.herm_eig(np.zeros((2, 3)))

    def test_rejects_nonfinite(self):
        with pytest.raises(ValueError):
            linalg.herm_eig(np.array([[np.nan, 0], [0, 1.0]]))


class TestMatrixFuncOnSupport:
    def test_sqrt_rank_deficient(self):
        out = linalg.matrix_func_on_support(np.diag([4.0, 0.0]), np.sqrt)
        assert np.allclose(out, np.diag([2.0, 0.0]), atol=1e-14)

    def test_inverse_sqrt_on_support(self):
        M = np.diag([0.75, 0.25, 0.0])
        out = linalg.matrix_func_on_support(M, lambda x: x ** -0.5)
        assert np.allclose(out, np.diag([0.75 ** -0.5, 2.0, 0.0]), atol=1e-13)

    def test_unitary_covariance(self):
        rng = np.random.default_rng(3)
        M = _rand_density(rng, 5)
        U, _ = npl.qr(rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5)))
        lhs = linalg.matrix_func_on_support(U @ M @ U.conj().T, np.sqrt)
        rhs = U @ linalg.matrix_func_on_support(M, np.sqrt) @ U.conj().T
        assert npl.norm(lhs - rhs) < 1e-12

    def test_rejects_negative(self):
        with pytest.raises(ValueError, match="not PSD"):
            linalg.matrix_func_on_support(np.diag([1.0, -0.5]), np.sqrt)

    def test_clamps_rounding_noise(self):
        out = linalg.matrix_func_on_support(np.diag([1.0, -1e-14]), np.sqrt)
        assert np.allclose(out, np.diag([1.0, 0.0]), atol=1e-13)

    def test_support_projector(self):
        P = linalg.support_projector(np.diag([0.5, 0.0, 0.5]))
        assert np.allclose(P, np.diag([1.0, 0.0, 1.0]), atol=1e-13)

    def test_sqrtm_psd_squares_back(self):
        rng = np.random.default_rng(11)
        M = _rand_density(rng, 6, rank=3)
        S = linalg.sqrtm_psd(M)
        assert npl.norm(S @ S - M) < 1e-12


class TestTensorOps:
    def test_tensor_order(self):
        out = linalg.tensor(np.diag([1.0, 2.0]), np.eye(2))
        assert np.allclose(out, np.diag([1.0, 1.0, 2.0, 2.0]))

    def test_tensor_matches_kron_chain(self):
        rng = np.random.default_rng(5)
        A, B, C = (rng.standard_normal((d, d)) for d in (2, 3, 2))
        assert np.allclose(linalg.tensor(A, B, C), np.kron(np.kron(A, B), C))

    def test_partial_trace_product(self):
        rng = np.random.default_rng(9)
        a = _rand_density(rng, 2)
        b = _rand_density(rng, 3)
        M = linalg.tensor(a, b)
        assert npl.norm(linalg.partial_trace(M, (2, 3), (0,)) - a) < 1e-14
        assert npl.norm(linalg.partial_trace(M, (2, 3), (1,)) - b) < 1e-14

    def test_partial_trace_bell(self):
        psi = np.array([1.0, 0, 0, 1.0]) / np.sqrt(2)
        M = np.outer(psi, psi)
        for keep in ((0,), (1,)):
            assert npl.norm(linalg.partial_trace(M, (2, 2), keep) - np.eye(2) / 2) < 1e-14

    def test_partial_trace_preserves_trace(self):
        rng = np.random.default_rng(13)
        M = _rand_density(rng, 12)
        red = linalg.partial_trace(M, (2, 3, 2), (1,))
        assert abs(np.trace(red) - np.trace(M)) < 1e-13

    def test_partial_trace_rejects_bad_dims(self):
        with pytest.raises(ValueError):
            linalg.partial_trace(np.eye(4), (2, 3), (0,))
        with pytest.raises(ValueError):
            linalg.partial_trace(np.eye(4), (2, 2), (2,))

    def test_permute_swaps_factors(self):
        rng = np.random.default_rng(17)
        a = _rand_density(rng, 2)
        b = _rand_density(rng, 3)
        M = linalg.tensor(a, b)
        out = linalg.permute_subsystems(M, (2, 3), (1, 0))
        assert npl.norm(out - linalg.tensor(b, a)) < 1e-14

    def test_permute_rejects_bad_perm(self):
        with pytest.raises(ValueError):
            linalg.permute_subsystems(np.eye(4), (2, 2), (0, 0))

    def test_partial_transpose_bell_negativity(self):
        psi = np.array([1.0, 0, 0, 1.0]) / np.sqrt(2)
        M = np.outer(psi, psi)
        w = npl.eigvalsh(linalg.partial_transpose(M, (2, 2), 1))
        assert abs(w.min() + 0.5) < 1e-14

    def test_partial_transpose_involution(self):
        rng = np.random.default_rng(19)
        M = _rand_density(rng, 6)
        PT = linalg.partial_transpose(M, (2, 3), 0)
        assert npl.norm(linalg.partial_transpose(PT, (2, 3), 0) - M) < 1e-14

    def test_op_on_subsystem(self):
        op = np.array([[0, 1], [1, 0]], dtype=complex)
        out = linalg.op_on_subsystem(op, (2, 2, 2), 1)
        assert np.allclose(out, linalg.tensor(np.eye(2), op, np.eye(2)))

    def test_op_on_subsystem_rectangular(self):
        op = np.zeros((4, 2))
        out = linalg.op_on_subsystem(op, (3, 2), 1)
        assert out.shape == (12, 6)


class TestNorms:
    def test_trace_norm_diagonal(self):
        assert abs(linalg.trace_norm(np.diag([1.0, -2.0])) - 3.0) < 1e-14

    def test_trace_norm_unitary_invariance(self):
        rng = np.random.default_rng(23)
        M = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        U, _ = npl.qr(rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4)))
        assert abs(linalg.trace_norm(U @ M) - linalg.trace_norm(M)) < 1e-12


class TestFidelity:
    def test_self_fidelity(self):
        rng = np.random.default_rng(29)
        M = _rand_density(rng, 4)
        assert abs(linalg.fidelity(M, M) - 1.0) < 1e-12

    def test_pure_state_overlap(self):
        rng = np.random.default_rng(31)
        for _ in range(10):
            psi = rng.standard_normal(3) + 1j * rng.standard_normal(3)
            phi = rng.standard_normal(3) + 1j * rng.standard_normal(3)
            psi /= npl.norm(psi)
            phi /= npl.norm(phi)
            f = linalg.fidelity(np.outer(psi, psi.conj()), np.outer(phi, phi.conj()))
            assert abs(f - abs(np.vdot(psi, phi))) < 1e-12

    def test_pure_vs_maximally_mixed(self):
        proj = np.diag([1.0, 0.0])
        assert abs(linalg.fidelity(proj, np.eye(2) / 2) - 1 / np.sqrt(2)) < 1e-14

    def test_commuting_bhattacharyya(self):
        p = np.array([0.1, 0.3, 0.6])
        q = np.array([0.5, 0.25, 0.25])
        f = linalg.fidelity(np.diag(p), np.diag(q))
        assert abs(f - np.sqrt(p * q).sum()) < 1e-13

    def test_symmetry(self):
        rng = np.random.default_rng(37)
        a = _rand_density(rng, 5, rank=3)
        b = _rand_density(rng, 5)
        assert abs(linalg.fidelity(a, b) - linalg.fidelity(b, a)) < 1e-12

    def test_trace_distance_sandwich(self):
        # 1 - F <= (1/2)||rho - sigma||_1 <= sqrt(1 - F^2)
        rng = np.random.default_rng(41)
        for _ in range(50):
            a = _rand_density(rng, 4, rank=int(rng.integers(1, 5)))
            b = _rand_density(rng, 4, rank=int(rng.integers(1, 5)))
            f = linalg.fidelity(a, b)
            td = 0.5 * linalg.trace_norm(a - b)
            assert 1 - f <= td + 1e-10
            assert td <= np.sqrt(max(1 - f * f, 0.0)) + 1e-10

    def test_block_decomposition(self):
        # orthogonal flags: F splits into the convex sum of block fidelities
        rng = np.random.default_rng(43)
        p = 0.3
        a0, a1 = _rand_density(rng, 3), _rand_density(rng, 3)
        b0, b1 = _rand_density(rng, 3), _rand_density(rng, 3)
        P0, P1 = np.diag([1.0, 0.0]), np.diag([0.0, 1.0])
        A = (1 - p) * linalg.tensor(P0, a0) + p * linalg.tensor(P1, a1)
        B = (1 - p) * linalg.tensor(P0, b0) + p * linalg.tensor(P1, b1)
        expect = (1 - p) * linalg.fidelity(a0, b0) + p * linalg.fidelity(a1, b1)
        assert abs(linalg.fidelity(A, B) - expect) < 1e-12

    def test_concavity(self):
        rng = np.random.default_rng(47)
        s = _rand_density(rng, 3)
        a = _rand_density(rng, 3)
        b = _rand_density(rng, 3)
        lam = 0.4
        mix = lam * a + (1 - lam) * b
        lower = lam * linalg.fidelity(a, s) + (1 - lam) * linalg.fidelity(b, s)
        assert linalg.fidelity(mix, s) >= lower - 1e-10
