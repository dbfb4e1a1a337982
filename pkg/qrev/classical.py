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
Classical Markov chains and their embedding into quantum operations.

Stochastic matrices are column stochastic throughout: M[j, i] is the
probability of moving from state i to state j, so M p is the distribution
after one step and every column sums to 1. The reversal of a chain with
stationary distribution p is

    M~ = diag(p) M^T diag(p)^(-1),   M~[i, j] p[j] = M[j, i] p[i].

A quantum operation S induces the chain M[a, c] = S_aacc in any orthonormal
basis, and reversing S with respect to its fixed point commutes with this
extraction when the basis diagonalizes the fixed point.
'''

import logging
import numpy as np
from . import tolerances as tols
from .matcore import check_basis, kron, dagger
from .channel import KrausChannel, SuperMatrix, super_matrix
from .errors import (NotStochastic, NonUniqueStationary, NonPositiveStationary,
                     ZeroProbabilityState, NotBalanced, DimensionMismatch, NonFinite)


__all__ = ['as_stochastic', 'as_prob_vector', 'stationary', 'markov_reverse',
           'extract_markov', 'embed_markov', 'is_markov_detailed_balanced']

logger = logging.getLogger(__name__)


def as_stochastic(m, tol=1e-12):
    '''
    returns `m` as a real float array after checking that it is column stochastic.
    '''
    m = np.asarray(m)
    if np.iscomplexobj(m):
        if np.max(np.abs(m.imag), initial=0) > tol:
            raise NotStochastic('stochastic matrix with complex entries.')
        m = m.real
    m = np.array(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f'stochastic matrix of shape {m.shape}.')
    if not np.all(np.isfinite(m)):
        raise NonFinite('stochastic matrix has NaN or Inf entries.')
    if np.min(m) < 0:
        raise NotStochastic(f'negative entry {np.min(m):.3e}.')
    dev = np.max(np.abs(m.sum(axis=0) - 1))
    if dev > tol:
        raise NotStochastic(f'column sums differ from 1 by up to {dev:.3e}. Note that '
                            'M[j, i] is the probability of i -> j.')
    return m


def as_prob_vector(p, tol=1e-12):
    p = np.array(p, dtype=float)
    if p.ndim != 1:
        raise DimensionMismatch(f'probability vector of shape {p.shape}.')
    if not np.all(np.isfinite(p)):
        raise NonFinite('probability vector has NaN or Inf entries.')
    if np.min(p) < 0:
        raise NotStochastic(f'negative probability {np.min(p):.3e}.')
    if abs(p.sum() - 1) > tol:
        raise NotStochastic(f'probabilities sum to {p.sum()!r}.')
    return p


def stationary(m, gap_tol=tols.GAP_TOL, require_positive=True):
    '''
    The stationary distribution M p = p.

    kwargs
    ------
    gap_tol = GAP_TOL
      eigenvalues within `gap_tol` of 1 count as unit eigenvalues. More than
      one raises `NonUniqueStationary`.
    require_positive = True
      raise `NonPositiveStationary` unless every entry is strictly positive,
      which the reversal requires.
    '''
    m = as_stochastic(m, tol=1e-9)
    w, v = np.linalg.eig(m)
    close = np.flatnonzero(np.abs(w - 1) <= gap_tol)
    if len(close) != 1:
        raise NonUniqueStationary(f'{len(close)} eigenvalues within {gap_tol:.1e} of 1.')
    p = np.real(v[:, close[0]])
    p = p / p.sum()
    if np.min(p) < 0:
        if np.min(p) < -1e-12:
            raise NonPositiveStationary(f'stationary vector has entry {np.min(p):.3e}.')
        logger.warning('clipping stationary entries down to %.3e to 0', np.min(p))
        p = np.clip(p, 0, None)
        p = p / p.sum()
    if require_positive and not np.min(p) > 0:
        raise NonPositiveStationary('stationary distribution has zero entries.')
    logger.debug('stationary: residual |Mp - p| = %.3e', np.linalg.norm(m @ p - p))
    return p


def markov_reverse(m, p, balance_tol=tols.BALANCE_TOL):
    '''
    M~ = diag(p) M^T diag(p)^(-1) for the stationary distribution `p` of `m`.
    Raises `ZeroProbabilityState` for p with zeros and `NotBalanced` if
    |M p - p| exceeds `balance_tol`.
    '''
    m = as_stochastic(m, tol=1e-9)
    p = as_prob_vector(p, tol=1e-9)
    if p.shape[0] != m.shape[0]:
        raise DimensionMismatch(f'{p.shape[0]} probabilities for {m.shape[0]} states.')
    if not np.min(p) > 0:
        raise ZeroProbabilityState(f'state {int(np.argmin(p))} has probability 0.')
    dev = np.linalg.norm(m @ p - p)
    if dev > balance_tol:
        raise NotBalanced(f'|M p - p| = {dev:.3e} exceeds balance_tol={balance_tol:.1e}.')
    return (p[:, np.newaxis] * m.T) / p[np.newaxis, :]


def is_markov_detailed_balanced(m, p, tol=tols.BALANCE_TOL):
    '''
    M[j, i] p[i] = M[i, j] p[j] for all i, j within `tol`.
    '''
    flow = np.asarray(m, dtype=float) * np.asarray(p, dtype=float)[np.newaxis, :]
    return float(np.max(np.abs(flow - flow.T))) <= tol


def extract_markov(sm, basis=None, clip_tol=tols.CLIP_TOL, basis_tol=tols.BASIS_TOL):
    '''
    The Markov matrix M[a, c] = S_aacc = <v_a| S(|v_c><v_c|) |v_a> induced by
    a channel in the orthonormal basis whose columns are `basis`.

    kwargs
    ------
    basis = None
      unitary matrix, columns are the basis vectors. `None` or 'computational'
      is the computational basis. Raises `BasisNotOrthonormal`.
    clip_tol = CLIP_TOL
      entries in [-clip_tol, 0) are set to 0, more negative ones raise `NotStochastic`.
    '''
    if isinstance(sm, KrausChannel):
        sm = super_matrix(sm)
    if not isinstance(sm, SuperMatrix):
        sm = SuperMatrix(sm)
    n = sm.dim
    v = check_basis(basis, n, tol=basis_tol)
    w = kron(np.conj(v), v)
    rotated = dagger(w) @ sm.mat @ w
    idx = np.arange(n) * (n + 1)
    m = rotated[np.ix_(idx, idx)]
    if np.max(np.abs(m.imag)) > clip_tol:
        raise NotStochastic(f'extracted Markov matrix has imaginary part '
                            f'{np.max(np.abs(m.imag)):.3e}.')
    m = m.real.copy()
    if np.min(m) < -clip_tol:
        raise NotStochastic(f'extracted Markov matrix has entry {np.min(m):.3e}.')
    m[m < 0] = 0.0
    return m


def embed_markov(m):
    '''
    The channel with Kraus operators sqrt(M[j, i]) |e_j><e_i| for every nonzero
    M[j, i], ordered by (j, i). It dephases in the computational basis and then
    moves populations according to `m`.
    '''
    m = as_stochastic(m, tol=1e-9)
    n = m.shape[0]
    kraus = []
    for j in range(n):
        for i in range(n):
            if m[j, i] > 0:
                a = np.zeros((n, n), dtype=complex)
                a[j, i] = np.sqrt(m[j, i])
                kraus.append(a)
    return KrausChannel(kraus)
