#!/usr/bin/env python3

import unittest
import numpy as np
from qrev import channel
from qrev.channel import KrausChannel, DensityMatrix, SuperMatrix
from qrev.randomops import random_channel, random_density, random_unitary, random_hermitian
from qrev.errors import (InvalidState, DimensionMismatch, NonUniqueFixedPoint,
                         ZeroProbabilityBranch, IndexOutOfRange)


def amplitude_damping(gamma):
    return KrausChannel([np.array([[1, 0], [0, np.sqrt(1 - gamma)]]),
                         np.array([[0, np.sqrt(gamma)], [0, 0]])])


class TestDensityMatrix(unittest.TestCase):

    def test_invalid(self):
        with self.assertRaises(InvalidState):
            DensityMatrix(np.diag([0.5, 0.6]))
        with self.assertRaises(InvalidState):
            DensityMatrix(np.diag([1.5, -0.5]))
        with self.assertRaises(InvalidState):
            DensityMatrix(np.array([[0.5, 0.5], [0, 0.5]]))

    def test_maximally_mixed(self):
        np.testing.assert_allclose(DensityMatrix.maximally_mixed(4).mat, np.eye(4) / 4)

    def test_readonly(self):
        rho = DensityMatrix.diagonal([0.3, 0.7])
        with self.assertRaises(ValueError):
            rho.mat[0, 0] = 1


class TestKrausChannel(unittest.TestCase):

    def setUp(self):
        self.rng = np.random.default_rng(11)

    def test_apply_keeps_state(self):
        ch = random_channel(3, self.rng)
        rho = channel.apply(ch, random_density(3, self.rng))
        self.assertAlmostEqual(np.trace(rho.mat).real, 1.0)

    def test_check_tcp(self):
        self.assertTrue(channel.check_tcp(random_channel(4, self.rng, n_kraus=2)).is_tcp)
        rep = channel.check_tcp(KrausChannel([0.5 * np.eye(2)]))
        self.assertFalse(rep.is_tcp)
        self.assertAlmostEqual(rep.max_violation, 0.75)

    def test_mismatched_shapes(self):
        with self.assertRaises(DimensionMismatch):
            KrausChannel([np.eye(2), np.eye(3)])
        with self.assertRaises(DimensionMismatch):
            KrausChannel([np.eye(2)], heat=[0.0, 1.0])

    def test_adjoint_is_unital(self):
        ch = random_channel(3, self.rng)
        np.testing.assert_allclose(channel.adjoint(ch)(np.eye(3)), np.eye(3), atol=1e-12)

    def test_compose_order(self):
        u = random_unitary(2, self.rng)
        v = random_unitary(2, self.rng)
        rv = channel.compose(channel.unitary_channel(v), channel.unitary_channel(u))
        np.testing.assert_allclose(rv.kraus[0], v @ u)

    def test_compose_heat(self):
        r = KrausChannel([np.eye(2) / np.sqrt(2)] * 2, heat=[1.0, -1.0])
        s = KrausChannel([np.eye(2)], heat=[0.5])
        self.assertEqual(channel.compose(r, s).heat, (1.5, -0.5))
        self.assertIsNone(channel.compose(r, channel.identity_channel(2)).heat)

    def test_observe(self):
        ch = amplitude_damping(0.3)
        obs = channel.observe(ch, DensityMatrix.diagonal([0, 1]), 1)
        self.assertAlmostEqual(obs.p, 0.3)
        np.testing.assert_allclose(obs.rho.mat, np.diag([1, 0]), atol=1e-12)
        with self.assertRaises(ZeroProbabilityBranch):
            channel.observe(ch, DensityMatrix.diagonal([1, 0]), 1)
        with self.assertRaises(IndexOutOfRange):
            channel.observe(ch, DensityMatrix.diagonal([1, 0]), 2)

    def test_observe_rare_branch(self):
        # branch 0 nearly cancels on (1, -1 + d): p ~ d^2 / 4
        rng = np.random.default_rng(12)
        plus = np.array([[1, 1], [1, 1]]) / 2
        minus = np.array([[1, -1], [-1, 1]]) / 2
        d = 1e-5
        psi = np.array([1, -1 + d]) / np.sqrt(1 + (1 - d) ** 2)
        rho = DensityMatrix(np.outer(psi, psi))
        for phi in 2 * np.pi * rng.random(50):
            ch = KrausChannel([np.exp(1j * phi) * plus, minus])
            obs = channel.observe(ch, rho, 0)
            self.assertLess(abs(obs.p / (d ** 2 / 2 / (1 + (1 - d) ** 2)) - 1), 1e-3)
            np.testing.assert_allclose(obs.rho.mat, plus, atol=1e-3)
            np.testing.assert_allclose(obs.rho.mat, obs.rho.mat.conj().T, atol=0)


class TestSuperMatrix(unittest.TestCase):

    def setUp(self):
        self.rng = np.random.default_rng(12)
        self.ch = random_channel(3, self.rng)
        self.sm = channel.super_matrix(self.ch)

    def test_apply(self):
        x = random_hermitian(3, self.rng)
        np.testing.assert_allclose(self.sm.apply(x), self.ch(x), atol=1e-12)

    def test_element(self):
        # S_abcd = <a| S(|d><c|) |b>
        n = 3
        a, b, c, d = 0, 2, 1, 2
        x = np.zeros((n, n))
        x[d, c] = 1
        self.assertAlmostEqual(self.sm.element(a, b, c, d), self.ch(x)[a, b])
        self.assertEqual(self.sm.tensor[a, b, c, d], self.sm.element(a, b, c, d))
        self.assertEqual(channel.caves_element(self.sm, a, d, b, c), self.sm.element(a, b, c, d))
        self.assertEqual(channel.terhal_element(self.sm, a, b, d, c),
                         self.sm.element(a, b, c, d))

    def test_choi(self):
        self.assertTrue(channel.is_completely_positive(self.ch))
        j = self.sm.choi()
        np.testing.assert_allclose(j, j.conj().T, atol=1e-12)
        # transposition is positive but not completely positive
        n = 2
        transpose = np.zeros((n * n, n * n))
        for a in range(n):
            for b in range(n):
                transpose[a + n * b, b + n * a] = 1
        self.assertLess(channel.choi_min_eigenvalue(SuperMatrix(transpose)), -0.5)

    def test_matmul_is_compose(self):
        other = random_channel(3, self.rng)
        lhs = channel.super_matrix(other) @ self.sm
        rhs = channel.super_matrix(channel.compose(other, self.ch))
        self.assertLess(lhs.distance(rhs), 1e-12)

    def test_adjoint(self):
        adj = channel.super_matrix(channel.adjoint(self.ch))
        self.assertLess(adj.distance(self.sm.adjoint()), 1e-12)

    def test_not_square_number(self):
        with self.assertRaises(DimensionMismatch):
            SuperMatrix(np.eye(3))


class TestFixedPoint(unittest.TestCase):

    def test_amplitude_damping(self):
        pi = channel.fixed_point(amplitude_damping(0.4))
        np.testing.assert_allclose(pi.mat, np.diag([1, 0]), atol=1e-10)

    def test_random(self):
        rng = np.random.default_rng(13)
        ch = random_channel(4, rng)
        pi = channel.fixed_point(ch)
        np.testing.assert_allclose(ch(pi.mat), pi.mat, atol=1e-10)

    def test_unitary_is_not_unique(self):
        rng = np.random.default_rng(14)
        with self.assertRaises(NonUniqueFixedPoint):
            channel.fixed_point(channel.unitary_channel(random_unitary(3, rng)))

    def test_generator(self):
        # decay |1> -> |0> at rate 1 and a field
        h = np.array([[0, 0.3], [0.3, 1]])
        jump = np.array([[0, 1], [0, 0]])
        gen = channel.lindbladian(h, [jump])
        pi = channel.generator_fixed_point(gen)
        np.testing.assert_allclose(gen.apply(pi.mat), 0, atol=1e-10)
        step = gen.expm(0.5)
        np.testing.assert_allclose(step.apply(pi.mat), pi.mat, atol=1e-10)
        np.testing.assert_allclose(np.trace(step.apply(np.diag([0, 1]))), 1, atol=1e-12)


if __name__ == '__main__':
    unittest.main()
