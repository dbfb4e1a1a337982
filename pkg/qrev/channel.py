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
Quantum operations in Kraus form.

A `KrausChannel` is an ordered list of Kraus operators A_a, optionally with one
heat label Q_a per operator. Kraus lists are not unique, therefore two channels
are compared through their `SuperMatrix`, never through their Kraus lists.

The superoperator matrix acts on column stacked operators. The matrix element
S_abcd = <e_a| S(|e_d><e_c|) |e_b> is available through `SuperMatrix.element`
in exactly this index order; `caves_element` and `terhal_element` read the same
numbers in the orderings S_{ad,bc} and S_{ab,dc}.
'''

import logging
from collections import namedtuple
import numpy as np
import scipy.linalg
from . import tolerances as tols
from .matcore import as_matrix, dagger, vec, unvec, kron
from .errors import (DimensionMismatch, InvalidState, NonUniqueFixedPoint,
                     NoPositiveFixedPoint, ZeroProbabilityBranch, IndexOutOfRange)


__all__ = ['DensityMatrix', 'KrausChannel', 'SuperMatrix', 'apply', 'adjoint', 'check_tcp',
           'super_matrix', 'fixed_point', 'observe', 'compose', 'channels_equal',
           'choi_min_eigenvalue', 'is_completely_positive', 'caves_element',
           'terhal_element', 'lindbladian', 'generator_fixed_point',
           'identity_channel', 'unitary_channel']

logger = logging.getLogger(__name__)


def _readonly(m):
    m = np.array(m, dtype=complex)
    m.setflags(write=False)
    return m


class DensityMatrix():

    def __init__(self, mat, tol=tols.STATE_TOL, validate=True):
        '''
        Hermitian, positive semidefinite, unit trace matrix.

        kwargs
        ------
        tol = STATE_TOL
          absolute tolerance for hermiticity, the smallest eigenvalue and the trace.
        validate = True
          when False, the invariants are not checked. Only for internal use on
          matrices which are density matrices by construction.
        '''
        m = as_matrix(mat)
        if validate:
            dev = np.linalg.norm(m - dagger(m))
            if dev > tol:
                raise InvalidState(f'not Hermitian: |rho - rho^dagger| = {dev:.3e}.')
            tr = np.trace(m).real
            if abs(tr - 1) > tol:
                raise InvalidState(f'trace {tr!r} differs from 1 by more than {tol:.1e}.')
            lmin = np.linalg.eigvalsh(0.5 * (m + dagger(m)))[0]
            if lmin < -tol:
                raise InvalidState(f'negative eigenvalue {lmin:.3e}.')
        self._mat = _readonly(0.5 * (m + dagger(m)))

    @classmethod
    def maximally_mixed(cls, dim):
        return cls(np.eye(dim) / dim)

    @classmethod
    def diagonal(cls, p):
        return cls(np.diag(np.asarray(p, dtype=float)))

    @property
    def mat(self):
        return self._mat

    @property
    def dim(self):
        return self._mat.shape[0]

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self._mat, dtype=dtype)

    def __repr__(self):
        return '<DensityMatrix dim={}>'.format(self.dim)


class KrausChannel():

    def __init__(self, kraus, heat=None):
        '''
        A quantum operation rho -> sum_a A_a rho A_a^dagger.

        `kraus` is a sequence of square matrices of equal shape. `heat`, if given,
        holds one real heat label (energy flowing from the bath into the system)
        per Kraus operator. The channel is not required to be trace preserving,
        use `check_tcp` for that.
        '''
        if isinstance(kraus, np.ndarray) and kraus.ndim == 2:
            kraus = [kraus]
        ops = tuple(_readonly(as_matrix(a)) for a in kraus)
        if len(ops) == 0:
            raise ValueError('a channel needs at least one Kraus operator.')
        shape = ops[0].shape
        for a in ops:
            if a.shape != shape:
                raise DimensionMismatch(f'Kraus operators of shapes {shape} and {a.shape}.')
        if heat is not None:
            heat = tuple(float(q) for q in heat)
            if len(heat) != len(ops):
                raise DimensionMismatch(f'{len(heat)} heat labels for {len(ops)} Kraus operators.')
        self._kraus = ops
        self._heat = heat

    @property
    def kraus(self):
        return self._kraus

    @property
    def heat(self):
        return self._heat

    @property
    def dim(self):
        return self._kraus[0].shape[0]

    def __len__(self):
        return len(self._kraus)

    def __call__(self, x):
        '''
        apply the operator sum to any operator `x`, no checks.
        '''
        x = np.asarray(x)
        return sum(a @ x @ dagger(a) for a in self._kraus)

    def relabeled(self, kraus):
        '''
        A channel with the Kraus operators `kraus` in place of the own ones and
        the labels belonging to the time reversed step: heat negated.
        Subclasses carrying more labels override this.
        '''
        heat = None if self._heat is None else [-q for q in self._heat]
        return KrausChannel(kraus, heat=heat)

    def __repr__(self):
        s = '<{cls} dim={d} with {n} Kraus operators{h}>'
        h = ', heat labeled' if self._heat is not None else ''
        return s.format(cls=self.__class__.__name__, d=self.dim, n=len(self), h=h)


def identity_channel(dim):
    return KrausChannel([np.eye(dim)])


def unitary_channel(u):
    return KrausChannel([u])


def _check_dim(ch, m):
    if m.shape != (ch.dim, ch.dim):
        raise DimensionMismatch(f'operator of shape {m.shape} for a channel of '
                                f'dimension {ch.dim}.')


def apply(ch, rho, tol=tols.STATE_TOL):
    '''
    rho' = sum_a A_a rho A_a^dagger. The result is validated as a density matrix.
    '''
    m = np.asarray(rho)
    _check_dim(ch, m)
    return DensityMatrix(ch(m), tol=tol)


def adjoint(ch):
    '''
    The Hilbert-Schmidt adjoint S^x, Kraus operators A_a^dagger. Not trace
    preserving in general. Heat labels are not carried over.
    '''
    return KrausChannel([dagger(a) for a in ch.kraus])


TcpReport = namedtuple('TcpReport', ['max_violation', 'is_tcp'])


def check_tcp(ch, tol=tols.TCP_TOL):
    '''
    max_violation is the spectral norm of sum_a A_a^dagger A_a - I.
    '''
    s = sum(dagger(a) @ a for a in ch.kraus)
    violation = float(np.linalg.norm(s - np.eye(ch.dim), 2))
    return TcpReport(violation, violation <= tol)


class SuperMatrix():

    def __init__(self, mat):
        '''
        A superoperator as a d^2 x d^2 matrix acting on column stacked operators.
        '''
        m = as_matrix(mat)
        dim = int(round(np.sqrt(m.shape[0])))
        if dim * dim != m.shape[0]:
            raise DimensionMismatch(f'{m.shape[0]} is not a square number.')
        self._mat = _readonly(m)
        self._dim = dim

    @property
    def mat(self):
        return self._mat

    @property
    def dim(self):
        return self._dim

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self._mat, dtype=dtype)

    def apply(self, x):
        x = np.asarray(x)
        return unvec(self._mat @ vec(x), x.shape)

    def element(self, a, b, c, d):
        '''
        S_abcd = <e_a| S(|e_d><e_c|) |e_b>
        '''
        n = self._dim
        return self._mat[a + n * b, d + n * c]

    @property
    def tensor(self):
        '''
        T[a, b, c, d] = S_abcd
        '''
        n = self._dim
        return np.einsum('bacd->abcd', self._mat.reshape(n, n, n, n))

    def choi(self):
        '''
        Choi matrix (column stacking), sum_a vec(A_a) vec(A_a)^dagger for a Kraus channel.
        '''
        n = self._dim
        return np.einsum('abcd->dacb', self.tensor).reshape(n * n, n * n)

    def adjoint(self):
        return SuperMatrix(dagger(self._mat))

    def expm(self, t=1.0):
        '''
        exp(L t) for a generator L.
        '''
        return SuperMatrix(scipy.linalg.expm(self._mat * t))

    def distance(self, other):
        return float(np.linalg.norm(self._mat - np.asarray(other)))

    def __matmul__(self, other):
        # (self @ other) applies `other` first
        return SuperMatrix(self._mat @ np.asarray(other))

    def __add__(self, other):
        return SuperMatrix(self._mat + np.asarray(other))

    def __sub__(self, other):
        return SuperMatrix(self._mat - np.asarray(other))

    def __mul__(self, x):
        return SuperMatrix(self._mat * x)

    __rmul__ = __mul__

    def __repr__(self):
        return '<SuperMatrix dim={}>'.format(self._dim)


def super_matrix(ch):
    '''
    sum_a conj(A_a) kron A_a
    '''
    return SuperMatrix(sum(kron(np.conj(a), a) for a in ch.kraus))


def caves_element(sm, a, d, b, c):
    '''
    S_{ad,bc} in the ordering of Caves, the same number as `sm.element(a, b, c, d)`.
    '''
    return sm.element(a, b, c, d)


def terhal_element(sm, a, b, d, c):
    '''
    S_{ab,dc} in the ordering of Terhal and DiVincenzo.
    '''
    return sm.element(a, b, c, d)


def channels_equal(r, s, tol=1e-9):
    return super_matrix(r).distance(super_matrix(s)) <= tol


def choi_min_eigenvalue(ch):
    sm = ch if isinstance(ch, SuperMatrix) else super_matrix(ch)
    j = sm.choi()
    return float(np.linalg.eigvalsh(0.5 * (j + dagger(j)))[0])


def is_completely_positive(ch, tol=1e-9):
    return choi_min_eigenvalue(ch) >= -tol


def compose(r, s):
    '''
    The channel R S: first `s`, then `r`. Kraus operators R_i S_j with index
    i * len(s) + j. Heat labels add when both channels carry them.
    '''
    kraus = [ri @ sj for ri in r.kraus for sj in s.kraus]
    heat = None
    if r.heat is not None and s.heat is not None:
        heat = [qi + qj for qi in r.heat for qj in s.heat]
    return KrausChannel(kraus, heat=heat)


def _eigvec_at(mat, target, gap_tol, what):
    w, v = np.linalg.eig(mat)
    close = np.flatnonzero(np.abs(w - target) <= gap_tol)
    logger.debug('%s: %d eigenvalue(s) within %.1e of %s, spectrum distance %s',
                 what, len(close), gap_tol, target, np.sort(np.abs(w - target))[:3])
    if len(close) > 1:
        raise NonUniqueFixedPoint(f'{what}: eigenvalue {target} has multiplicity {len(close)} '
                                  f'at gap_tol={gap_tol:.1e}.')
    if len(close) == 0:
        raise NoPositiveFixedPoint(f'{what}: no eigenvalue within {gap_tol:.1e} of {target}.')
    return v[:, close[0]]


def _as_state(v, tol):
    x = unvec(v)
    tr = np.trace(x)
    if abs(tr) < tol:
        raise NoPositiveFixedPoint('invariant operator has vanishing trace.')
    x = x / tr
    x = 0.5 * (x + dagger(x))
    x = x / np.trace(x).real
    lmin = np.linalg.eigvalsh(x)[0]
    if lmin < -tol:
        raise NoPositiveFixedPoint(f'invariant operator has eigenvalue {lmin:.3e} < 0.')
    return DensityMatrix(x, tol=tol)


def fixed_point(ch, gap_tol=tols.GAP_TOL, tol=tols.STATE_TOL):
    '''
    The invariant density matrix S pi = pi of a TCP channel.

    The full eigendecomposition of the superoperator matrix is used. Raises
    `NonUniqueFixedPoint` if more than one eigenvalue lies within `gap_tol` of 1,
    as for unitary channels, where every state diagonal in the energy eigenbasis
    is invariant.
    '''
    sm = super_matrix(ch)
    pi = _as_state(_eigvec_at(sm.mat, 1.0, gap_tol, 'fixed_point'), tol)
    residual = np.linalg.norm(ch(pi.mat) - pi.mat)
    if residual > 1e-9:
        raise NoPositiveFixedPoint(f'|S pi - pi| = {residual:.3e} after Hermitization.')
    return pi


Observation = namedtuple('Observation', ['p', 'rho'])


def observe(ch, rho, alpha, p_floor=tols.P_FLOOR):
    '''
    Probability p_a = tr A_a rho A_a^dagger of observing the Kraus interaction `alpha`
    and the conditional state A_a rho A_a^dagger / p_a.
    '''
    if not 0 <= alpha < len(ch):
        raise IndexOutOfRange(f'Kraus index {alpha} for a channel with {len(ch)} operators.')
    m = np.asarray(rho)
    _check_dim(ch, m)
    a = ch.kraus[alpha]
    out = a @ m @ dagger(a)
    out = 0.5 * (out + dagger(out))
    p = float(np.trace(out).real)
    if p <= p_floor:
        raise ZeroProbabilityBranch(f'Kraus branch {alpha} has probability {p:.3e}.')
    # rounding is amplified by 1 / p on rare branches
    return Observation(p, DensityMatrix(out / p, validate=False))


def lindbladian(h, jumps=()):
    '''
    Generator L rho = -i[H, rho] + sum_k (J_k rho J_k^dagger - {J_k^dagger J_k, rho} / 2)
    as a `SuperMatrix`.
    '''
    h = as_matrix(h)
    eye = np.eye(h.shape[0])
    mat = -1j * (kron(eye, h) - kron(h.T, eye))
    for j in jumps:
        j = as_matrix(j)
        jj = dagger(j) @ j
        mat = mat + kron(np.conj(j), j) - 0.5 * kron(eye, jj) - 0.5 * kron(jj.T, eye)
    return SuperMatrix(mat)


def generator_fixed_point(gen, gap_tol=tols.GAP_TOL, tol=tols.STATE_TOL):
    '''
    The stationary state L pi = 0 of a generator.
    '''
    scale = max(1.0, np.linalg.norm(gen.mat, 2))
    return _as_state(_eigvec_at(gen.mat, 0.0, gap_tol * scale, 'generator_fixed_point'), tol)
