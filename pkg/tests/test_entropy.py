"""Entropies, conditional mutual information, measured relative entropy."""

import numpy as np
import numpy.linalg as npl
import pytest

from qmarkov import linalg
from qmarkov.entropy import (
    classical_relative_entropy,
    cmi,
    measured_rel_ent_lower,
    measured_relative_entropy,
    relative_entropy,
    von_neumann,
)
from qmarkov.states import (
    TripartiteLabels,
    classical_chain,
    counterexample_state,
    flag_extension,
    new_density,
    random_density,
    random_pure,
)

LABELS3 = TripartiteLabels.standard(3)


class TestVonNeumann:
    def test_pure_state_zero(self):
        assert von_neumann(random_pure((2, 2), seed=0)) < 1e-12

    def test_maximally_mixed(self):
        rho = new_density(np.eye(4) / 4, (4,))
        assert abs(von_neumann(rho) - 2.0) < 1e-12

    def test_biased_qubit(self):
        rho = new_density(np.diag([0.75, 0.25]), (2,))
        assert abs(von_neumann(rho) - 0.8112781244591328) < 1e-12

    def test_unitary_invariance(self):
        rng = np.random.default_rng(1)
        rho = random_density((4,), rank=4, seed=2)
        U, _ = npl.qr(rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4)))
        rot = new_density(U @ rho.matrix @ U.conj().T, (4,))
        assert abs(von_neumann(rot) - von_neumann(rho)) < 1e-10


class TestCmi:
    def test_product_state_zero(self):
        a = random_density((2,), rank=2, seed=1).matrix
        b = random_density((2,), rank=2, seed=2).matrix
        c = random_density((2,), rank=2, seed=3).matrix
        rho = new_density(linalg.tensor(a, b, c), (2, 2, 2))
        assert abs(cmi(rho, LABELS3).I_ACgB) < 1e-12

    def test_ghz(self):
        psi = np.zeros(8)
        psi[0] = psi[7] = 1 / np.sqrt(2)
        rho = new_density(np.outer(psi, psi), (2, 2, 2))
        rep = cmi(rho, LABELS3)
        assert abs(rep.H_ABC) < 1e-12
        assert abs(rep.I_ACgB - 1.0) < 1e-12

    def test_classical_copy_chain_zero(self):
        rho = classical_chain([0.25, 0.75])
        assert abs(cmi(rho, LABELS3).I_ACgB) < 1e-12

    def test_counterexample_value(self):
        rho = counterexample_state()
        assert abs(cmi(rho, LABELS3).I_ACgB - 0.23751681623626553) < 1e-10

    def test_strong_subadditivity_random(self):
        for i in range(25):
            rho = random_density((2, 2, 2), rank=8, seed=100 + i)
            assert cmi(rho, LABELS3).I_ACgB >= -1e-10

    def test_four_factor_split(self):
        labels = TripartiteLabels.standard(4)
        rho = random_density((2, 2, 2, 2), rank=4, seed=5)
        assert cmi(rho, labels).I_ACgB >= -1e-10


class TestRelativeEntropy:
    def test_identical_states(self):
        rho = random_density((3,), rank=3, seed=7)
        assert abs(relative_entropy(rho, rho.matrix)) < 1e-10

    def test_pure_vs_maximally_mixed(self):
        rho = new_density(np.diag([1.0, 0.0]), (2,))
        assert abs(relative_entropy(rho, np.eye(2) / 2) - 1.0) < 1e-12

    def test_support_violation_infinite(self):
        rho = new_density(np.eye(2) / 2, (2,))
        sigma = np.diag([1.0, 0.0])
        assert relative_entropy(rho, sigma) == float("inf")

    def test_classical_matches_kl(self):
        p = np.array([0.2, 0.5, 0.3])
        q = np.array([0.4, 0.4, 0.2])
        rho = new_density(np.diag(p), (3,))
        expect = classical_relative_entropy(p, q)
        assert abs(relative_entropy(rho, np.diag(q)) - expect) < 1e-12

    def test_nonnegative(self):
        for i in range(20):
            rho = random_density((4,), rank=int(np.random.default_rng(i).integers(1, 5)), seed=i)
            sigma = random_density((4,), rank=4, seed=1000 + i)
            assert relative_entropy(rho, sigma.matrix) >= -1e-10

    def test_product_marginal_equals_cmi(self):
        # for rho_BC = rho_B (x) rho_C the conditional mutual information
        # equals D(rho_ABC || rho_AB (x) rho_C)
        from qmarkov.states import random_extensions

        b = random_density((2,), rank=2, seed=31)
        c = random_density((2,), rank=2, seed=32)
        rho_BC = new_density(linalg.tensor(b.matrix, c.matrix), (2, 2))
        (rho,) = random_extensions(rho_BC, 1, dim_a=4, seed=33)
        I = cmi(rho, LABELS3).I_ACgB
        rho_AB = rho.marginal((0, 1))
        sigma = linalg.tensor(rho_AB.matrix, c.matrix)
        assert abs(I - relative_entropy(rho, sigma)) < 1e-9


class TestClassicalRelativeEntropy:
    def test_basic(self):
        assert abs(classical_relative_entropy([0.5, 0.5], [0.25, 0.75]) - (
            0.5 * np.log2(2.0) + 0.5 * np.log2(2.0 / 3.0)
        )) < 1e-13

    def test_support_violation(self):
        assert classical_relative_entropy([0.5, 0.5], [1.0, 0.0]) == float("inf")

    def test_zero_outcomes_ignored(self):
        assert abs(classical_relative_entropy([1.0, 0.0], [1.0, 0.0])) < 1e-13


class TestMeasuredRelativeEntropy:
    def test_identical_states(self):
        rho = random_density((2,), rank=2, seed=41)
        assert abs(measured_relative_entropy(rho, rho)) < 1e-8

    def test_commuting_equals_kl(self):
        p = np.array([0.7, 0.2, 0.1])
        q = np.array([0.3, 0.3, 0.4])
        rho = new_density(np.diag(p), (3,))
        sigma = new_density(np.diag(q), (3,))
        dm = measured_relative_entropy(rho, sigma)
        assert abs(dm - classical_relative_entropy(p, q)) < 1e-6

    def test_support_violation_infinite(self):
        rho = new_density(np.eye(2) / 2, (2,))
        sigma = new_density(np.diag([1.0, 0.0]), (2,))
        assert measured_relative_entropy(rho, sigma) == float("inf")

    def test_rank_deficient_second_argument(self):
        # both supported on the same 2-dim subspace of a qutrit
        p = np.diag([0.6, 0.4, 0.0])
        q = np.diag([0.2, 0.8, 0.0])
        dm = measured_relative_entropy(new_density(p, (3,)), new_density(q, (3,)))
        expect = classical_relative_entropy(np.diag(p), np.diag(q))
        assert abs(dm - expect) < 1e-6

    def test_sandwich_random_qubits(self):
        # -2 log2 F <= D_M <= D
        for i in range(15):
            rho = random_density((2,), rank=2, seed=i)
            sigma = random_density((2,), rank=2, seed=500 + i)
            dm = measured_relative_entropy(rho, sigma)
            lower = -2.0 * np.log2(linalg.fidelity(rho.matrix, sigma.matrix))
            upper = relative_entropy(rho, sigma.matrix)
            assert lower <= dm + 1e-6
            assert dm <= upper + 1e-6

    def test_monte_carlo_lower_bound(self):
        rho = random_density((3,), rank=3, seed=61)
        sigma = random_density((3,), rank=3, seed=62)
        dm = measured_relative_entropy(rho, sigma)
        lb = measured_rel_ent_lower(rho, sigma, n_samples=200, seed=0)
        assert lb <= dm + 1e-6
        assert lb > 0.0

    def test_flag_additivity(self):
        # a classical flag can be measured first, so the measured relative
        # entropy splits across orthogonal blocks
        p = 0.3
        r0 = random_density((2,), rank=2, seed=71)
        r1 = random_density((2,), rank=2, seed=72)
        s0 = random_density((2,), rank=2, seed=73)
        s1 = random_density((2,), rank=2, seed=74)
        rho = flag_extension(r0, r1, p)
        sigma = flag_extension(s0, s1, p)
        expect = (1 - p) * measured_relative_entropy(r0, s0) + p * measured_relative_entropy(r1, s1)
        assert abs(measured_relative_entropy(rho, sigma) - expect) < 2e-5

    def test_nonnegative(self):
        for i in range(10):
            rho = random_density((2, 2), rank=4, seed=i)
            sigma = random_density((2, 2), rank=4, seed=900 + i)
            assert measured_relative_entropy(rho, sigma) >= -1e-8
