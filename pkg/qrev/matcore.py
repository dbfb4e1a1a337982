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
Dense complex matrix kernel.

Matrices are plain complex `numpy.ndarray`s. Composite spaces are ordered
system factor first, so `kron(A_sys, B_env)` and `partial_trace` agree on
which index belongs to which factor. Vectorization is column stacking:
vec(A X B) = (B^T kron A) vec(X).

Units: hbar = 1.
'''

import logging
from collections import namedtuple
import numpy as np
from . import tolerances as tols
from .errors import (NotHermitian, NotSquare, DimensionMismatch, NonFinite,
                     SingularOrIndefinite, BasisNotOrthonormal)


__all__ = ['HermEig', 'as_matrix', 'dagger', 'herm_eig', 'pd_power', 'unitary_of',
           'kron', 'partial_trace', 'vec', 'unvec', 'hs_inner', 'fix_phases',
           'is_unitary', 'check_basis']

logger = logging.getLogger(__name__)


HermEig = namedtuple('HermEig', ['eigenvalues', 'eigenvectors'])
HermEig.__doc__ = '''
Eigendecomposition of a Hermitian matrix. `eigenvalues` are real and
ascending, the columns of `eigenvectors` are orthonormal.
'''


def as_matrix(x, square=True):
    '''
    returns `x` as a finite 2d complex array. Raises `NotSquare` for non-square
    input if `square` is set.
    '''
    m = np.asarray(x, dtype=complex)
    if m.ndim != 2:
        raise DimensionMismatch(f'expected a matrix, got an array of shape {m.shape}.')
    if square and m.shape[0] != m.shape[1]:
        raise NotSquare(f'expected a square matrix, got shape {m.shape}.')
    if not np.all(np.isfinite(m)):
        raise NonFinite('matrix has NaN or Inf entries.')
    return m


def dagger(a):
    return np.conj(np.transpose(a))


def _check_hermitian(h, tol):
    norm = np.linalg.norm(h)
    dev = np.linalg.norm(h - dagger(h))
    if dev > tol * norm:
        raise NotHermitian(f'|H - H^dagger| = {dev:.3e} exceeds '
                           f'{tol:.1e} * |H| = {tol * norm:.3e}.')


def herm_eig(h, tol=tols.HERM_TOL):
    '''
    Eigendecomposition of a Hermitian matrix.

    kwargs
    ------
      tol = HERM_TOL
        relative hermiticity tolerance, |H - H^dagger| <= tol * |H|.
    '''
    h = as_matrix(h)
    _check_hermitian(h, tol)
    w, v = np.linalg.eigh(0.5 * (h + dagger(h)))
    return HermEig(w, v)


def _spectral_function(eig, values):
    v = eig.eigenvectors
    return (v * values) @ dagger(v)


def pd_power(p, s, rank_tol=tols.RANK_TOL):
    '''
    `p` to the real power `s` for a positive definite matrix `p`.

    Raises `SingularOrIndefinite` if the smallest eigenvalue is not above
    `rank_tol` times the largest one. No regularization is attempted.
    '''
    eig = herm_eig(p)
    lmin, lmax = eig.eigenvalues[0], eig.eigenvalues[-1]
    if not lmax > 0 or not lmin > rank_tol * lmax:
        raise SingularOrIndefinite(
            f'eigenvalues in [{lmin:.3e}, {lmax:.3e}], not positive definite '
            f'at rank_tol={rank_tol:.1e}.')
    return _spectral_function(eig, eig.eigenvalues ** s)


def unitary_of(h, t):
    '''
    U = exp(-i H t) for a Hermitian `h`.
    '''
    eig = herm_eig(h)
    return _spectral_function(eig, np.exp(-1j * eig.eigenvalues * t))


def kron(a, b):
    return np.kron(as_matrix(a, square=False), as_matrix(b, square=False))


def partial_trace(m, dim_sys, dim_env, keep='system'):
    '''
    Partial trace of an operator on the composite space (system kron environment).

    keep = 'system' traces out the environment and returns a dim_sys x dim_sys matrix,
    keep = 'environment' traces out the system.
    '''
    m = as_matrix(m)
    n = dim_sys * dim_env
    if m.shape != (n, n):
        raise DimensionMismatch(f'expected shape {(n, n)} for dims {dim_sys}x{dim_env}, '
                                f'got {m.shape}.')
    m4 = m.reshape(dim_sys, dim_env, dim_sys, dim_env)
    if keep == 'system':
        return np.einsum('ajbj->ab', m4)
    if keep == 'environment':
        return np.einsum('iaib->ab', m4)
    raise ValueError(f"keep must be 'system' or 'environment', not {keep!r}.")


def vec(m):
    '''
    column stacking: [[a, b], [c, d]] becomes (a, c, b, d).
    '''
    return np.asarray(m).T.reshape(-1)


def unvec(v, shape=None):
    v = np.asarray(v)
    if shape is None:
        dim = int(round(np.sqrt(v.size)))
        shape = (dim, dim)
    return v.reshape(shape[1], shape[0]).T


def hs_inner(a, b):
    '''
    Hilbert-Schmidt inner product tr(A^dagger B).
    '''
    return np.vdot(a, b)


def fix_phases(v, tol=1e-12):
    '''
    Multiply every column of `v` by a phase such that its first nonzero
    component is real and positive. Makes eigenbases reproducible.
    '''
    v = np.array(v, dtype=complex)
    for k in range(v.shape[1]):
        col = v[:, k]
        scale = np.max(np.abs(col))
        nonzero = np.flatnonzero(np.abs(col) > tol * scale)
        if len(nonzero) == 0:
            continue
        first = col[nonzero[0]]
        v[:, k] = col * (np.abs(first) / first)
    return v


def is_unitary(u, tol=tols.BASIS_TOL):
    u = np.asarray(u)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        return False
    return np.linalg.norm(dagger(u) @ u - np.eye(u.shape[0])) <= tol


def check_basis(basis, dim, tol=tols.BASIS_TOL):
    '''
    returns `basis` as a unitary matrix whose columns are the basis vectors.
    `None` or 'computational' give the identity.
    '''
    if basis is None or (isinstance(basis, str) and basis == 'computational'):
        return np.eye(dim, dtype=complex)
    b = as_matrix(basis)
    if b.shape != (dim, dim):
        raise DimensionMismatch(f'basis of shape {b.shape} for dimension {dim}.')
    if not is_unitary(b, tol=tol):
        dev = np.linalg.norm(dagger(b) @ b - np.eye(dim))
        raise BasisNotOrthonormal(f'|V^dagger V - I| = {dev:.3e} exceeds {tol:.1e}.')
    return b
