#!/usr/bin/env python3

import unittest
import functools
import pickle
from qrev.pipeline import pipeline, Pipeline


@pipeline()
def square_serial(el):
    return el**2


@pipeline(2)
def square_parallel(el):
    return el**2


@pipeline(2)
def increment_parallel(el):
    return el + 1


def scaled_range(bounds, factor):
    return [factor * i for i in range(*bounds)]


class _TestPipeline():

    def test_el(self):
        # function should behave as undecorated with normal arguments
        r = self.squaref(7)
        self.assertEqual(r, 49)

    def test_gen(self):
        gen = (i for i in range(20))
        gen = self.squaref(gen)
        sq = [i**2 for i in range(20)]
        self.assertListEqual(list(gen), sq)

    def test_chained(self):
        gen = (i for i in range(20))
        gen = increment_parallel(gen)
        gen = self.squaref(gen)
        self.assertListEqual(list(gen), [(i + 1)**2 for i in range(20)])

    def test_none_results_kept(self):
        worker = Pipeline(lambda x: None if x % 2 else x, nworkers=0)
        self.assertListEqual(list(worker(iter(range(4)))), [0, None, 2, None])

    def test_partial_chunks(self):
        # chunks of a range come back in order, as trajectory sampling needs
        worker = Pipeline(functools.partial(scaled_range, factor=3), nworkers=self.nworkers)
        bounds = iter([(s, min(s + 7, 30)) for s in range(0, 30, 7)])
        out = [x for part in worker(bounds) for x in part]
        self.assertListEqual(out, [3 * i for i in range(30)])


class TestPipeline_serial(_TestPipeline, unittest.TestCase):

    def setUp(self):
        self.squaref = square_serial
        self.nworkers = 0


class TestPipeline_parallel(_TestPipeline, unittest.TestCase):

    def setUp(self):
        self.squaref = square_parallel
        self.nworkers = 2


class TestPipelineMisc(unittest.TestCase):

    def test_not_callable(self):
        with self.assertRaises(TypeError):
            Pipeline(3)

    def test_negative_workers(self):
        with self.assertRaises(ValueError):
            Pipeline(abs, nworkers=-1)

    def test_pickled_copy_runs_serially(self):
        p = pickle.loads(pickle.dumps(Pipeline(functools.partial(scaled_range, factor=2), 4)))
        self.assertEqual(p.nworkers, 0)
        self.assertEqual(p((0, 3)), [0, 2, 4])

    def test_package_attribute_is_module(self):
        import qrev
        self.assertIs(qrev.pipeline.Pipeline, Pipeline)


if __name__ == '__main__':
    unittest.main()
