#!/usr/bin/env python3

import unittest
import numpy as np
from qrev import thermal
from qrev.thermal import BathSpec, CouplingSpec
from qrev.channel import (super_matrix, unitary_channel, check_tcp, apply, DensityMatrix,
                          fixed_point)
from qrev.matcore import unitary_of, kron
from qrev.reversal import reverse_channel, is_detailed_balanced
from qrev.randomops import random_hermitian, random_interaction, random_density
from qrev.errors import NotHermitian, DimensionMismatch


class TestThermalState(unittest.TestCase):

    def test_zero_hamiltonian(self):
        pi, log_z = thermal.thermal_state(np.zeros((3, 3)), 2.0)
        np.testing.assert_allclose(pi.mat, np.eye(3) / 3, atol=1e-15)
        self.assertAlmostEqual(log_z, np.log(3))

    def test_qubit(self):
        delta, beta = 0.7, 1.3
        pi, log_z = thermal.thermal_state(np.diag([0, delta]), beta)
        w = np.exp(-beta * delta)
        np.testing.assert_allclose(pi.mat, np.diag([1, w]) / (1 + w), atol=1e-15)
        self.assertAlmostEqual(log_z, np.log(1 + w))

    def test_low_temperature(self):
        h = np.diag([1.0, 3.0, 4.0])
        pi, log_z = thermal.thermal_state(h, 20.0)
        np.testing.assert_allclose(pi.mat, np.diag([1, 0, 0]), atol=np.exp(-39))
        self.assertAlmostEqual(log_z, -20.0, places=12)

    def test_no_overflow(self):
        p, log_z = thermal.thermal_occupations([-1000.0, 0.0], 5.0)
        self.assertTrue(np.all(np.isfinite(p)))
        self.assertAlmostEqual(log_z, 5000.0)

    def test_not_hermitian(self):
        with self.assertRaises(NotHermitian):
            thermal.thermal_state(np.array([[0, 1], [0, 0]]), 1.0)


class TestSpecs(unittest.TestCase):

    def test_beta(self):
        with self.assertRaises(ValueError):
            BathSpec(np.eye(2), -1.0)
        self.assertEqual(BathSpec(np.eye(2), 0).beta, 0.0)

    def test_epsilon(self):
        with self.assertRaises(ValueError):
            CouplingSpec(np.eye(4), -0.1)
        cpl = CouplingSpec(np.eye(4), 0.1).with_epsilon(0.2)
        self.assertEqual(cpl.epsilon, 0.2)

    def test_joint_hamiltonian(self):
        rng = np.random.default_rng(31)
        hs, hb = random_hermitian(2, rng), random_hermitian(3, rng)
        bath = BathSpec(hb, 1.0)
        u = unitary_of(thermal.joint_hamiltonian(hs, bath, CouplingSpec(np.eye(6), 0.0)), 0.4)
        np.testing.assert_allclose(u, kron(unitary_of(hs, 0.4), unitary_of(hb, 0.4)), atol=1e-12)
        v = random_interaction(2, 3, rng)
        np.testing.assert_allclose(
            thermal.joint_hamiltonian(np.zeros((2, 2)), BathSpec(np.zeros((3, 3)), 1.0),
                                      CouplingSpec(v, 0.3)), 0.3 * v, atol=1e-15)
        with self.assertRaises(DimensionMismatch):
            thermal.joint_hamiltonian(hs, bath, CouplingSpec(np.eye(4), 0.1))


class _TestThermostated():
    '''
    Thermostated qubit with a random coupling to a bath of dimension `dim_bath`.
    '''
    beta = 1.0
    t = 1.0

    def setUp(self):
        self.rng = np.random.default_rng(40 + self.dim_bath)
        self.h_sys = random_hermitian(2, self.rng)
        self.bath = BathSpec(np.diag(np.linspace(0, 1, self.dim_bath)), self.beta)
        self.v = random_interaction(2, self.dim_bath, self.rng)

    def channel(self, eps):
        return thermal.thermostated_channel(self.h_sys, self.bath, CouplingSpec(self.v, eps),
                                            self.t)

    def test_tcp(self):
        for eps in (0.0, 1e-2, 1e-1, 1.0):
            self.assertLess(check_tcp(self.channel(eps)).max_violation, 1e-12)

    def test_labels(self):
        ch = self.channel(0.1)
        e = ch.bath_energies
        self.assertEqual(len(ch), self.dim_bath ** 2)
        for alpha, (i, j) in enumerate(ch.bath_index):
            self.assertEqual(alpha, i * self.dim_bath + j)
            self.assertEqual(ch.heat[alpha], e[i] - e[j])
            self.assertEqual(ch.bath_index[ch.mirror(alpha)], (j, i))

    def test_dilation(self):
        cpl = CouplingSpec(self.v, 0.1)
        ch = self.channel(0.1)
        for _ in range(3):
            rho = random_density(2, self.rng)
            np.testing.assert_allclose(
                apply(ch, rho).mat,
                thermal.dilate_apply(self.h_sys, self.bath, cpl, self.t, rho).mat, atol=1e-10)

    def test_decoupled(self):
        u = unitary_of(self.h_sys, self.t)
        dist = super_matrix(self.channel(0.0)).distance(super_matrix(unitary_channel(u)))
        self.assertLess(dist, 1e-12)

    def test_reversed_dilation(self):
        cpl = CouplingSpec(self.v, 0.1)
        fwd = self.channel(0.1)
        rev = thermal.reversed_dilation_channel(self.h_sys, self.bath, cpl, self.t)
        for alpha, (a, q) in enumerate(zip(fwd.kraus, fwd.heat)):
            b = rev.kraus[fwd.mirror(alpha)]
            np.testing.assert_allclose(b, (a * np.exp(0.5 * self.beta * q)).conj().T,
                                       atol=1e-12)

    def test_balance_first_order(self):
        pi, _ = thermal.thermal_state(self.h_sys, self.beta)
        dev = [np.linalg.norm(self.channel(eps)(pi.mat) - pi.mat) for eps in (1e-2, 5e-3)]
        self.assertTrue(1.6 <= dev[0] / dev[1] <= 2.4)

    def test_weak_coupling_residual(self):
        pi, _ = thermal.thermal_state(self.h_sys, self.beta)
        self.assertLess(thermal.weak_coupling_residual(self.channel(0.0), pi), 1e-10)
        res = [thermal.weak_coupling_residual(self.channel(eps), pi) for eps in (1e-2, 5e-3)]
        self.assertTrue(1.6 <= res[0] / res[1] <= 2.4)

    def test_relabeled(self):
        ch = self.channel(0.1)
        pi = fixed_point(ch)
        rev = reverse_channel(ch, pi)
        self.assertIsInstance(rev, thermal.HeatLabeledChannel)
        self.assertEqual(rev.heat, tuple(-q for q in ch.heat))
        self.assertEqual(rev.bath_index, tuple((j, i) for i, j in ch.bath_index))


class TestThermostated_bath2(_TestThermostated, unittest.TestCase):
    dim_bath = 2


class TestThermostated_bath3(_TestThermostated, unittest.TestCase):
    dim_bath = 3


class TestThermalCases(unittest.TestCase):

    def test_heat_values(self):
        omega = 0.8
        ch = thermal.thermostated_channel(np.zeros((2, 2)), BathSpec(np.diag([0, omega]), 1.0),
                                          CouplingSpec(np.eye(4), 0.0), 1.0)
        self.assertEqual(sorted(set(ch.heat)), [-omega, 0.0, omega])

    def test_time(self):
        with self.assertRaises(ValueError):
            thermal.thermostated_channel(np.zeros((2, 2)), BathSpec(np.eye(2), 1.0),
                                         CouplingSpec(np.eye(4), 0.0), 0.0)

    def test_detailed_balance_without_system_hamiltonian(self):
        rng = np.random.default_rng(50)
        v = random_interaction(2, 2, rng)
        bath = BathSpec(np.diag([0.0, 1.0]), 1.0)
        pi = DensityMatrix.maximally_mixed(2)
        dev = []
        for eps in (0.0, 1e-2, 1e-3):
            ch = thermal.thermostated_channel(np.zeros((2, 2)), bath, CouplingSpec(v, eps), 1.0)
            dev.append(is_detailed_balanced(ch, pi, tol=1.0).deviation)
        self.assertLess(dev[0], 1e-12)
        self.assertLess(dev[2], dev[1])
        self.assertLess(dev[1], 0.1)

    def test_infinite_temperature(self):
        rng = np.random.default_rng(51)
        h_sys = random_hermitian(2, rng)
        bath = BathSpec(np.diag([0.0, 1.0]), 0.0)
        ch = thermal.thermostated_channel(h_sys, bath, CouplingSpec(random_interaction(2, 2, rng),
                                                                    1e-2), 1.0)
        pi, _ = thermal.thermal_state(h_sys, 0.0)
        # pi = I/2 and exp(beta Q / 2) = 1: exact at any coupling
        np.testing.assert_allclose(pi.mat, np.eye(2) / 2, atol=1e-15)
        self.assertLess(thermal.weak_coupling_residual(ch, pi), 1e-12)


if __name__ == '__main__':
    unittest.main()
