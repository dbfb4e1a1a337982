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
Seeded random operators for the test suite, `qrev selftest` and the benchmarks.
Every function takes a `numpy.random.Generator`.
'''

import numpy as np
from .matcore import dagger, herm_eig
from .channel import KrausChannel, DensityMatrix


__all__ = ['ginibre', 'random_hermitian', 'random_unitary', 'random_density',
           'random_channel', 'random_stochastic', 'random_interaction',
           'phase_conjugated', 'nondegenerate']


def ginibre(rows, cols, rng):
    return (rng.standard_normal((rows, cols))
            + 1j * rng.standard_normal((rows, cols))) / np.sqrt(2)


def random_hermitian(dim, rng, scale=1.0):
    g = ginibre(dim, dim, rng)
    return scale * 0.5 * (g + dagger(g))


def random_unitary(dim, rng):
    '''
    Haar distributed unitary (QR of a Ginibre matrix with the phases of R removed).
    '''
    q, r = np.linalg.qr(ginibre(dim, dim, rng))
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def random_density(dim, rng, rank=None):
    '''
    G G^dagger / tr for a dim x rank Ginibre matrix G. Full rank by default.
    '''
    g = ginibre(dim, rank or dim, rng)
    rho = g @ dagger(g)
    return DensityMatrix(rho / np.trace(rho).real)


def random_channel(dim, rng, n_kraus=None):
    '''
    TCP channel from the blocks of a random isometry V (n_kraus * dim x dim),
    so that sum_a A_a^dagger A_a = V^dagger V = I. With n_kraus >= 2 the fixed
    point is unique and full rank almost surely.
    '''
    k = n_kraus or dim
    q, _ = np.linalg.qr(ginibre(k * dim, dim, rng))
    return KrausChannel([q[a * dim:(a + 1) * dim, :] for a in range(k)])


def random_stochastic(dim, rng, concentration=1.0):
    '''
    Column stochastic matrix with Dirichlet distributed columns.
    '''
    return rng.dirichlet(np.full(dim, concentration), size=dim).T


def random_interaction(dim_sys, dim_bath, rng):
    '''
    Hermitian coupling on the joint space normalized to spectral norm 1.
    '''
    v = random_hermitian(dim_sys * dim_bath, rng)
    return v / np.linalg.norm(v, 2)


def phase_conjugated(ch, pi, rng):
    '''
    The channel U S U^dagger with U diagonal in the eigenbasis of `pi` and
    random phases. It keeps `pi` invariant whenever `ch` does.
    '''
    eig = herm_eig(np.asarray(pi))
    v = eig.eigenvectors
    u = (v * np.exp(2j * np.pi * rng.random(v.shape[0]))) @ dagger(v)
    return KrausChannel([u @ a @ dagger(u) for a in ch.kraus])


def nondegenerate(pi, spacing=1e-3):
    '''
    True if neighbouring eigenvalues of `pi` are at least `spacing` apart.
    '''
    w = herm_eig(np.asarray(pi)).eigenvalues
    return bool(np.all(np.diff(w) >= spacing))
