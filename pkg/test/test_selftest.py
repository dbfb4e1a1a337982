#!/usr/bin/env python3

import unittest
from unittest import mock
import numpy as np
from qrev import selftest, driven


class TestSelftest(unittest.TestCase):

    def test_all_checks_pass(self):
        metrics, passes = selftest.run_selftest(seed=0, workers=2, n_samples=20000)
        failed = [k for k, v in passes.items() if not v]
        self.assertEqual(failed, [], msg=str({k: metrics.get(k) for k in failed}))
        names = {k.split('.')[0] for k in passes}
        self.assertEqual(names, {name for name, _ in selftest.CHECKS})

    def test_only(self):
        metrics, passes = selftest.run_selftest(seed=1, only=['isolated_system'])
        self.assertEqual(set(passes), {'isolated_system.unitary_reversal'})
        self.assertLess(metrics['isolated_system.unitary_reversal_distance'], 1e-12)

    def test_seed_independent_of_selection(self):
        single, _ = selftest.run_selftest(seed=3, only=['classical_equivariance'])
        both, _ = selftest.run_selftest(seed=3, only=['isolated_system',
                                                      'classical_equivariance'])
        for k, v in single.items():
            self.assertEqual(both[k], v)

    def test_sampler_compares_worker_counts(self):
        calls = []

        def recording(*args, **kwargs):
            calls.append((kwargs.get('workers', 0), kwargs.get('chunk', 2000)))
            return driven.sample_trajectories(*args, **kwargs)

        with mock.patch.object(selftest, 'sample_trajectories', side_effect=recording):
            metrics, passes = selftest.check_sampler(np.random.default_rng(5), n=2000, workers=0)
        self.assertEqual(metrics['parallel_workers'], 2)
        self.assertIn((0, 300), calls)
        self.assertIn((2, 700), calls)
        self.assertTrue(passes['worker_independent'])


if __name__ == '__main__':
    unittest.main()
