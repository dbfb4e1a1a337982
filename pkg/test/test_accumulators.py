#!/usr/bin/env python3

import unittest
import math
import numpy as np
from qrev import accumulators
from qrev.driven import Trajectory


class _TestAccumulator():

    def test_1d(self):
        rng = np.random.default_rng(42)
        data = rng.random(100)
        acc = self.testacc()
        for d in data:
            acc += d
        np.testing.assert_array_almost_equal(acc.value, self.ref(data))
        self.assertEqual(acc.n, len(data))

    def test_1d_accumulate_other(self):
        rng = np.random.default_rng(42)
        data = rng.random(100)
        acc = self.testacc()
        acc2 = self.testacc()
        for d in data[:len(data)//2]:
            acc += d
        for d in data[len(data)//2:]:
            acc2 += d
        acc += acc2
        np.testing.assert_array_almost_equal(acc.value, self.ref(data))
        self.assertEqual(acc.n, len(data))

    def test_2d(self):
        rng = np.random.default_rng(42)
        data = rng.random((100, 5))
        acc = self.testacc()
        for d in data:
            acc += d
        np.testing.assert_array_almost_equal(acc.value, self.ref(data))
        self.assertEqual(acc.n, len(data))

    def test_merge_empty(self):
        rng = np.random.default_rng(1)
        data = rng.random(10)
        acc = self.testacc()
        for d in data:
            acc += d
        acc += self.testacc()
        np.testing.assert_array_almost_equal(acc.value, self.ref(data))


class TestMean(_TestAccumulator, unittest.TestCase):

    def testacc(self):
        return accumulators.Mean()

    def ref(self, x):
        return np.mean(x, axis=0)


class TestVariance(_TestAccumulator, unittest.TestCase):

    def testacc(self):
        return accumulators.Variance()

    def ref(self, x):
        return np.var(x, axis=0, ddof=1)

    def test_stderr(self):
        acc = self.testacc()
        for x in [1.0, 2.0, 3.0, 4.0]:
            acc += x
        self.assertAlmostEqual(acc.stderr, math.sqrt(np.var([1, 2, 3, 4], ddof=1) / 4))

    def test_single_sample(self):
        acc = self.testacc()
        acc += 1.0
        self.assertTrue(math.isnan(acc.value))


class TestTrajectoryHistogram(unittest.TestCase):

    def trajs(self):
        return [Trajectory(0, (1, 0), 1, (0.5, -0.5)),
                Trajectory(0, (1, 0), 1, (0.5, -0.5)),
                Trajectory(1, (0, 0), 0, (0.0, 0.0))]

    def test_counts(self):
        hist = accumulators.TrajectoryHistogram()
        for tr in self.trajs():
            hist += tr
        self.assertEqual(hist.n, 3)
        self.assertEqual(hist.count((0, (1, 0), 1)), 2)
        self.assertAlmostEqual(hist.frequency(self.trajs()[2]), 1 / 3)

    def test_merge(self):
        a = accumulators.TrajectoryHistogram()
        b = accumulators.TrajectoryHistogram()
        trs = self.trajs()
        a += trs[0]
        b += trs[1]
        b += trs[2]
        a += b
        self.assertEqual(a.value, {(0, (1, 0), 1): 2, (1, (0, 0), 0): 1})

    def test_band_check(self):
        hist = accumulators.TrajectoryHistogram()
        for _ in range(50):
            hist += (0, (0,), 0)
            hist += (1, (0,), 1)
        passed, cells = hist.band_check({(0, (0,), 0): 0.5, (1, (0,), 1): 0.5,
                                         (1, (0,), 0): 0.0})
        self.assertEqual((passed, cells), (3, 3))
        passed, cells = hist.band_check({(0, (0,), 0): 0.9, (1, (0,), 1): 0.1})
        self.assertEqual((passed, cells), (0, 2))

    def test_unexpected_key(self):
        hist = accumulators.TrajectoryHistogram()
        hist += (2, (0,), 2)
        self.assertEqual(hist.band_check({(0, (0,), 0): 1.0}), (0, 2))


if __name__ == '__main__':
    unittest.main()
