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
An order preserving worker pool decorator.

A function decorated with `pipeline(nworkers)` still works on single arguments.
Called with an iterator it returns a generator over the results, computed in
`nworkers` processes but yielded in the order of the input. Trajectory sampling
relies on this order for results that do not depend on the worker count.
'''

import collections.abc
import functools
import inspect
import logging
import os
from collections import deque
from multiprocessing import Pool


__all__ = ['Pipeline', 'pipeline', 'isiterator']

logger = logging.getLogger(__name__)


def isiterator(x):
    return isinstance(x, collections.abc.Iterator)


class Pipeline():

    def __init__(self, func, nworkers=0):
        '''
        Create a pipeline decorator.

        kwargs
        -------
        nworkers = 0
          number of worker processes given to `multiprocessing.Pool`.
          0 runs everything in the current process.
        '''
        if not callable(func):
            raise TypeError("{} must be a callable".format(func))
        if nworkers < 0:
            raise ValueError('nworkers >= 0 required, but nworkers={} found.'.format(nworkers))
        self.func = func
        self.nworkers = nworkers
        functools.update_wrapper(self, func)

    @property
    def _name(self):
        return getattr(self.func, '__name__', repr(self.func))

    def __call__(self, arg, **kwargs):
        if isiterator(arg):
            if self.nworkers == 0:
                return self._call_serial(arg, **kwargs)
            return self._call_parallel(arg, **kwargs)
        return self.func(arg, **kwargs)

    def _call_serial(self, arg, **kwargs):
        logger.debug('serial execution of "%s"', self._name)
        for el in arg:
            yield self.func(el, **kwargs)

    def _call_parallel(self, arg, **kwargs):
        logger.info('parallel execution of "%s" with %d workers', self._name, self.nworkers)
        with Pool(self.nworkers) as pool:
            cache = deque()
            for el in arg:
                cache.append(pool.apply_async(self, (el,), kwargs))
                if len(cache) < self.nworkers:
                    continue
                yield cache.popleft().get()
            while cache:
                yield cache.popleft().get()

    def __getstate__(self):
        # the wrapped function may be a closure or a partial over protocol data
        import dill
        return dill.dumps(self.func)

    def __setstate__(self, state):
        import dill
        self.func = dill.loads(state)
        # a copy inside a worker always runs serially
        self.nworkers = 0
        logger.debug('"%s" unpickled in PID %d', self._name, os.getpid())


def pipeline(*args, **kwargs):
    def ret(func):
        return Pipeline(func, *args, **kwargs)
    return ret


pipeline.__doc__ = Pipeline.__init__.__doc__
pipeline.__signature__ = inspect.signature(Pipeline)
