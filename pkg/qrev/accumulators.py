# Copyright (C) 2026 The qrev developers
#
# This file is part of qrev.
#
# qrev is free software: you can redistribute it and/or modify
# it under the terms of the GNU General Public License as published by
# the Free Software Foundation, either version 3 of the License, or
# (at your option) any later version.
#
# qrev is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
# GNU General Public License for more details.
#
# You should have received a copy of the GNU General Public License
# along with qrev. If not, see <http://www.gnu.org/licenses/>.
#

'''
Streaming statistics over sampled trajectories.

Accumulators take one sample at a time with `acc += sample` and can be merged
with `acc += other_acc`, so partial results of worker chunks combine into the
statistics of the whole sample.
'''

import abc
import math
import numpy as np


__all__ = ['Accumulator', 'Mean', 'Variance', 'TrajectoryHistogram']


class Accumulator(abc.ABC):
    '''
    Base class. Subclasses define `_accumulate_obj`, `value` and `n`, and
    `_accumulate_other` if two accumulators can be merged.
    '''

    @abc.abstractmethod
    def _accumulate_obj(self, obj):
        pass

    def _accumulate_other(self, other):
        s = '{} cannot merge two accumulators.'
        raise NotImplementedError(s.format(self.__class__.__name__))

    @property
    @abc.abstractmethod
    def value(self):
        pass

    @property
    @abc.abstractmethod
    def n(self):
        pass

    def __repr__(self):
        return '<{cls} of {n} samples>'.format(cls=self.__class__.__name__, n=self.n)

    __str__ = __repr__

    def accumulate(self, other):
        if isinstance(other, self.__class__):
            self._accumulate_other(other)
        else:
            self._accumulate_obj(other)
        return self

    __iadd__ = accumulate


class Mean(Accumulator):
    '''
    Running mean, updated as m_n = m_(n-1) + (x - m_(n-1)) / n.
    '''

    def __init__(self):
        self._val = 0.0
        self._n = 0

    def _accumulate_obj(self, obj):
        self._n += 1
        self._val += (obj - self._val) / self._n

    def _accumulate_other(self, other):
        if other.n == 0:
            return
        ntot = self._n + other._n
        self._val = self._val * (self._n / ntot) + other._val * (other._n / ntot)
        self._n = ntot

    @property
    def value(self):
        return self._val

    @property
    def n(self):
        return self._n


class Variance(Accumulator):
    '''
    Sample variance with Welford's update; merging uses the pairwise formula
    of Chan et al.

    `stderr` is the standard error of the mean, sqrt(var / n).
    '''

    def __init__(self):
        self.mean = Mean()
        self._m2 = 0.0

    def _accumulate_obj(self, obj):
        delta = obj - self.mean.value
        self.mean += obj
        self._m2 += delta * (obj - self.mean.value)

    def _accumulate_other(self, other):
        if other.n == 0:
            return
        n1, n2 = self.n, other.n
        dmean = other.mean.value - self.mean.value
        self._m2 += other._m2 + dmean ** 2 * n1 * n2 / (n1 + n2)
        self.mean += other.mean

    @property
    def n(self):
        return self.mean.n

    @property
    def value(self):
        if self.n < 2:
            return math.nan
        return self._m2 / (self.n - 1)

    @property
    def stderr(self):
        return math.sqrt(self.value / self.n)


class TrajectoryHistogram(Accumulator):
    '''
    Counts of sampled trajectories, keyed by `Trajectory.key`
    (e0, alphas, e_tau). Accepts trajectories or plain keys.
    '''

    def __init__(self):
        self._counts = {}
        self._n = 0

    @staticmethod
    def _key(obj):
        return obj.key if hasattr(obj, 'key') else tuple(obj)

    def _accumulate_obj(self, obj):
        k = self._key(obj)
        self._counts[k] = self._counts.get(k, 0) + 1
        self._n += 1

    def _accumulate_other(self, other):
        for k, c in other._counts.items():
            self._counts[k] = self._counts.get(k, 0) + c
        self._n += other._n

    @property
    def value(self):
        return dict(self._counts)

    @property
    def n(self):
        return self._n

    def count(self, key):
        return self._counts.get(self._key(key), 0)

    def frequency(self, key):
        return self.count(key) / self._n if self._n > 0 else 0.0

    def band_check(self, probabilities, nsigma=3.0):
        '''
        Compares the counts with expected probabilities, `probabilities` maps
        keys to p. A cell passes if |count - n p| <= nsigma sqrt(n p (1 - p)),
        which is the multinomial standard deviation. Sampled keys missing from
        `probabilities` fail.

        returns (number of passing cells, number of cells)
        '''
        expected = {self._key(k): p for k, p in probabilities.items()}
        cells = set(expected) | set(self._counts)
        passed = 0
        for k in cells:
            p = expected.get(k, 0.0)
            c = self._counts.get(k, 0)
            sigma = np.sqrt(self._n * p * (1 - p))
            if p > 0 and abs(c - self._n * p) <= nsigma * sigma:
                passed += 1
            elif p == 0 and c == 0:
                passed += 1
        return passed, len(cells)
