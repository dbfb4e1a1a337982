#!/usr/bin/env python3

import unittest
import numpy as np
from qrev import matcore
from qrev.randomops import random_hermitian, random_unitary, ginibre
from qrev.errors import (NotHermitian, NotSquare, SingularOrIndefinite, DimensionMismatch,
                         NonFinite, BasisNotOrthonormal)


class TestHermEig(unittest.TestCase):

    def setUp(self):
        self.rng = np.random.default_rng(3)

    def test_reconstruct(self):
        h = random_hermitian(4, self.rng)
        eig = matcore.herm_eig(h)
        v = eig.eigenvectors
        np.testing.assert_allclose(v @ np.diag(eig.eigenvalues) @ v.conj().T, h, atol=1e-12)
        self.assertTrue(np.all(np.diff(eig.eigenvalues) >= 0))

    def test_not_hermitian(self):
        with self.assertRaises(NotHermitian):
            matcore.herm_eig(np.array([[0, 1], [0, 0]]))

    def test_not_square(self):
        with self.assertRaises(NotSquare):
            matcore.herm_eig(np.zeros((2, 3)))

    def test_nan(self):
        with self.assertRaises(NonFinite):
            matcore.as_matrix([[np.nan, 0], [0, 1]])


class TestPdPower(unittest.TestCase):

    def test_sqrt(self):
        rng = np.random.default_rng(4)
        g = ginibre(3, 3, rng)
        p = g @ g.conj().T + np.eye(3)
        s = matcore.pd_power(p, 0.5)
        np.testing.assert_allclose(s @ s, p, atol=1e-12)
        np.testing.assert_allclose(matcore.pd_power(p, -0.5) @ s, np.eye(3), atol=1e-12)

    def test_exponents_add(self):
        rng = np.random.default_rng(8)
        g = ginibre(3, 3, rng)
        p = g @ g.conj().T + 0.5 * np.eye(3)
        powers = (-1.0, -0.5, 0.5, 1.0)
        for a in powers:
            for b in powers:
                np.testing.assert_allclose(matcore.pd_power(p, a) @ matcore.pd_power(p, b),
                                           matcore.pd_power(p, a + b), atol=1e-10)
        np.testing.assert_allclose(matcore.pd_power(p, 1.0), p, atol=1e-12)
        np.testing.assert_allclose(matcore.pd_power(p, 0.0), np.eye(3), atol=1e-12)

    def test_singular(self):
        with self.assertRaises(SingularOrIndefinite):
            matcore.pd_power(np.diag([1.0, 0.0]), 0.5)

    def test_indefinite(self):
        with self.assertRaises(SingularOrIndefinite):
            matcore.pd_power(np.diag([1.0, -0.5]), -0.5)


class TestUnitaryOf(unittest.TestCase):

    def test_pauli_x(self):
        x = np.array([[0, 1], [1, 0]])
        u = matcore.unitary_of(x, np.pi / 2)
        np.testing.assert_allclose(u, -1j * x, atol=1e-12)

    def test_unitary(self):
        rng = np.random.default_rng(5)
        u = matcore.unitary_of(random_hermitian(3, rng), 0.7)
        self.assertTrue(matcore.is_unitary(u))

    def test_zero_time(self):
        rng = np.random.default_rng(9)
        np.testing.assert_allclose(matcore.unitary_of(random_hermitian(3, rng), 0.0),
                                   np.eye(3), atol=1e-14)

    def test_pauli_z(self):
        z = np.diag([1.0, -1.0])
        np.testing.assert_allclose(matcore.unitary_of(z, np.pi), -np.eye(2), atol=1e-12)

    def test_backwards_in_time(self):
        rng = np.random.default_rng(10)
        h = random_hermitian(4, rng)
        np.testing.assert_allclose(matcore.unitary_of(h, 1.3) @ matcore.unitary_of(h, -1.3),
                                   np.eye(4), atol=1e-12)


class TestPartialTrace(unittest.TestCase):

    def test_product(self):
        a = np.diag([0.25, 0.75])
        b = np.diag([0.5, 0.2, 0.3]).astype(complex)
        b[0, 1], b[1, 0] = 0.1j, -0.1j
        ab = matcore.kron(a, b)
        np.testing.assert_allclose(matcore.partial_trace(ab, 2, 3), a * np.trace(b), atol=1e-14)
        np.testing.assert_allclose(matcore.partial_trace(ab, 2, 3, keep='environment'),
                                   b * np.trace(a), atol=1e-14)

    def test_bell_state(self):
        psi = np.array([1, 0, 0, 1]) / np.sqrt(2)
        bell = np.outer(psi, psi)
        for keep in ('system', 'environment'):
            np.testing.assert_allclose(matcore.partial_trace(bell, 2, 2, keep=keep),
                                       np.eye(2) / 2, atol=1e-14)

    def test_identity(self):
        np.testing.assert_allclose(matcore.partial_trace(np.eye(4) / 2, 2, 2), np.eye(2),
                                   atol=1e-14)

    def test_linear_and_trace_preserving(self):
        rng = np.random.default_rng(11)
        x, y = ginibre(6, 6, rng), ginibre(6, 6, rng)
        a, b = 0.3 - 1.2j, 2.5
        lhs = matcore.partial_trace(a * x + b * y, 2, 3)
        rhs = a * matcore.partial_trace(x, 2, 3) + b * matcore.partial_trace(y, 2, 3)
        np.testing.assert_allclose(lhs, rhs, atol=1e-12)
        for keep in ('system', 'environment'):
            self.assertAlmostEqual(np.trace(matcore.partial_trace(x, 2, 3, keep=keep)),
                                   np.trace(x), places=12)

    def test_wrong_dims(self):
        with self.assertRaises(DimensionMismatch):
            matcore.partial_trace(np.eye(6), 2, 2)


class TestVec(unittest.TestCase):

    def test_column_stacking(self):
        m = np.array([[1, 2], [3, 4]])
        np.testing.assert_array_equal(matcore.vec(m), [1, 3, 2, 4])
        np.testing.assert_array_equal(matcore.unvec(matcore.vec(m)), m)

    def test_kron_identity(self):
        # vec(A X B) = (B^T kron A) vec(X)
        rng = np.random.default_rng(6)
        a, x, b = (ginibre(3, 3, rng) for _ in range(3))
        np.testing.assert_allclose(matcore.vec(a @ x @ b),
                                   np.kron(b.T, a) @ matcore.vec(x), atol=1e-12)

    def test_hs_inner(self):
        a = np.array([[1j, 0], [0, 1]])
        self.assertAlmostEqual(matcore.hs_inner(a, a), 2.0)


class TestBasis(unittest.TestCase):

    def test_fix_phases(self):
        rng = np.random.default_rng(7)
        v = matcore.fix_phases(random_unitary(3, rng))
        for k in range(3):
            first = v[np.flatnonzero(np.abs(v[:, k]) > 1e-12)[0], k]
            self.assertAlmostEqual(first.imag, 0.0)
            self.assertGreater(first.real, 0)

    def test_computational(self):
        np.testing.assert_array_equal(matcore.check_basis(None, 3), np.eye(3))
        np.testing.assert_array_equal(matcore.check_basis('computational', 2), np.eye(2))

    def test_not_orthonormal(self):
        with self.assertRaises(BasisNotOrthonormal):
            matcore.check_basis(np.array([[1, 1], [0, 1]]), 2)


if __name__ == '__main__':
    unittest.main()
