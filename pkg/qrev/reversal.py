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
Time reversal of quantum operations.

With D_pi X = pi^(1/2) X pi^(1/2) the reversal (or pi-dual) of a channel S with
invariant state pi is

    S~ = D_pi S^x D_pi^(-1),

which in Kraus form reads A~_a = pi^(1/2) A_a^dagger pi^(-1/2). The same
expression reverses a generator L. The reversal is an involution on channels
with fixed point pi, keeps pi invariant and is trace preserving; S is called
detailed balanced if S~ = S.

The reference state pi is always passed in by the caller. It is never computed
here, so a non-unique fixed point surfaces as an error where pi is computed.
'''

import logging
from collections import namedtuple
import numpy as np
from . import tolerances as tols
from .matcore import dagger, pd_power, kron
from .channel import KrausChannel, SuperMatrix, super_matrix, check_tcp
from .errors import NotBalanced, DimensionMismatch


__all__ = ['PiDual', 'd_pi', 'reverse_channel', 'reverse_super', 'reverse_generator',
           'is_detailed_balanced', 'balance_deviation', 'symmetrize']

logger = logging.getLogger(__name__)


class PiDual():

    def __init__(self, pi, rank_tol=tols.RANK_TOL):
        '''
        The superoperator D_pi for a strictly positive definite `pi`, with the
        square roots pi^(1/2) and pi^(-1/2) computed once.
        Raises `SingularOrIndefinite` for singular `pi`.
        '''
        self.pi = np.array(pi, dtype=complex)
        self.sqrt_pi = pd_power(self.pi, 0.5, rank_tol=rank_tol)
        self.inv_sqrt_pi = pd_power(self.pi, -0.5, rank_tol=rank_tol)

    @property
    def dim(self):
        return self.pi.shape[0]

    def forward(self, x):
        return self.sqrt_pi @ x @ self.sqrt_pi

    def inverse(self, x):
        return self.inv_sqrt_pi @ x @ self.inv_sqrt_pi

    def super_matrix(self, direction='forward'):
        s = self.sqrt_pi if direction == 'forward' else self.inv_sqrt_pi
        return SuperMatrix(kron(np.conj(s), s))

    def __repr__(self):
        return '<PiDual dim={}>'.format(self.dim)


def _pi_dual(pi, rank_tol=tols.RANK_TOL):
    if isinstance(pi, PiDual):
        return pi
    return PiDual(pi, rank_tol=rank_tol)


def d_pi(pd, x, direction='forward'):
    '''
    forward: pi^(1/2) X pi^(1/2), inverse: pi^(-1/2) X pi^(-1/2).
    '''
    pd = _pi_dual(pd)
    x = np.asarray(x)
    if x.shape != pd.pi.shape:
        raise DimensionMismatch(f'operator of shape {x.shape} for pi of shape {pd.pi.shape}.')
    if direction == 'forward':
        return pd.forward(x)
    if direction == 'inverse':
        return pd.inverse(x)
    raise ValueError(f"direction must be 'forward' or 'inverse', not {direction!r}.")


def balance_deviation(ch, pi):
    '''
    |S pi - pi| (Frobenius norm).
    '''
    pi = np.asarray(pi.pi if isinstance(pi, PiDual) else pi)
    return float(np.linalg.norm(ch(pi) - pi))


def reverse_channel(ch, pi, balance_tol=tols.BALANCE_TOL, unbalanced='raise',
                    rank_tol=tols.RANK_TOL):
    '''
    The reversal S~ of the channel `ch` with respect to its invariant state `pi`,
    Kraus operators A~_a = pi^(1/2) A_a^dagger pi^(-1/2) in the same order as
    the forward ones. Heat labels are negated.

    kwargs
    ------
    balance_tol = BALANCE_TOL
      largest admitted |S pi - pi|.
    unbalanced = 'raise'
      what to do if `ch` does not keep `pi` invariant within `balance_tol`:
      'raise' raises `NotBalanced`, 'warn' logs a warning, 'ignore' does nothing.
      The reversal of an unbalanced channel is not trace preserving.
    rank_tol = RANK_TOL
      positive definiteness tolerance for `pi`.
    '''
    pd = _pi_dual(pi, rank_tol=rank_tol)
    if pd.dim != ch.dim:
        raise DimensionMismatch(f'pi of dimension {pd.dim} for a channel of dimension {ch.dim}.')
    dev = balance_deviation(ch, pd)
    if dev > balance_tol:
        msg = f'|S pi - pi| = {dev:.3e} exceeds balance_tol={balance_tol:.1e}.'
        if unbalanced == 'raise':
            raise NotBalanced(msg)
        if unbalanced == 'warn':
            logger.warning('reversing an unbalanced channel: %s', msg)
    kraus = [pd.sqrt_pi @ dagger(a) @ pd.inv_sqrt_pi for a in ch.kraus]
    rev = ch.relabeled(kraus)
    if logger.isEnabledFor(logging.DEBUG):
        logger.debug('reversed %r: balance deviation %.3e, tcp violation %.3e',
                     ch, dev, check_tcp(rev).max_violation)
    return rev


def reverse_super(sm, pi, rank_tol=tols.RANK_TOL):
    '''
    D_pi S^x D_pi^(-1) on the superoperator matrix. Agrees with
    `super_matrix(reverse_channel(ch, pi))` for every Kraus decomposition of `ch`.
    '''
    pd = _pi_dual(pi, rank_tol=rank_tol)
    if pd.dim != sm.dim:
        raise DimensionMismatch(f'pi of dimension {pd.dim} for a superoperator of '
                                f'dimension {sm.dim}.')
    return pd.super_matrix('forward') @ sm.adjoint() @ pd.super_matrix('inverse')


def reverse_generator(gen, pi, rank_tol=tols.RANK_TOL):
    '''
    Reversal L~ = D_pi L^x D_pi^(-1) of a generator L, so that
    exp(L~ t) is the reversal of exp(L t).
    '''
    return reverse_super(gen, pi, rank_tol=rank_tol)


BalanceReport = namedtuple('BalanceReport', ['balanced', 'detailed_balanced', 'deviation'])


def is_detailed_balanced(ch, pi, tol=tols.BALANCE_TOL):
    '''
    balanced: |S pi - pi| <= tol.
    detailed_balanced: balanced and |S~ - S| <= tol, distance of superoperator matrices.
    deviation: |S~ - S|.
    '''
    pd = _pi_dual(pi)
    balanced = balance_deviation(ch, pd) <= tol
    sm = super_matrix(ch)
    deviation = reverse_super(sm, pd).distance(sm)
    return BalanceReport(balanced, balanced and deviation <= tol, deviation)


def symmetrize(ch, pi, balance_tol=tols.BALANCE_TOL):
    '''
    (S + S~) / 2 as a Kraus channel: the operators A_a / sqrt(2) followed by
    A~_a / sqrt(2). Detailed balanced with respect to `pi`.
    '''
    rev = reverse_channel(ch, pi, balance_tol=balance_tol)
    kraus = [a / np.sqrt(2) for a in ch.kraus + rev.kraus]
    heat = None
    if ch.heat is not None:
        heat = ch.heat + rev.heat
    return KrausChannel(kraus, heat=heat)
