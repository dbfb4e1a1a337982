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
Thermostated quantum systems.

A system S is coupled to a finite bath B by

    H^SB = H^S kron I^B + I^S kron H^B + eps H^int.

The bath starts in its thermal state, the joint system evolves unitarily for a
time t and then the bath energy is measured. Conditioned on the bath moving from
eigenstate |b_i> to |b_j> the system evolves with the Kraus operator

    A_ij = sqrt(p_i) <b_j| U_SB |b_i>,   p_i = exp(-beta E_i) / Z_B,

and absorbs the heat Q_ij = E_i - E_j from the bath. Kraus operators are
indexed alpha = i * d_B + j in the ascending bath energy eigenbasis.

Units: hbar = k_B = 1.
'''

import logging
from dataclasses import dataclass
import numpy as np
from . import tolerances as tols
from .matcore import (as_matrix, herm_eig, HermEig, fix_phases, kron, dagger, unitary_of,
                      partial_trace, pd_power)
from .channel import KrausChannel, DensityMatrix
from .errors import DimensionMismatch


__all__ = ['thermal_occupations', 'thermal_state', 'BathSpec', 'CouplingSpec',
           'bath_eigenbasis', 'joint_hamiltonian', 'HeatLabeledChannel',
           'thermostated_channel', 'reversed_dilation_channel', 'dilate_apply',
           'weak_coupling_residual']

logger = logging.getLogger(__name__)


def _check_beta(beta):
    beta = float(beta)
    if not np.isfinite(beta) or beta < 0:
        raise ValueError(f'beta must be finite and >= 0, not {beta!r}.')
    return beta


def thermal_occupations(energies, beta):
    '''
    Boltzmann weights exp(-beta E) / Z and log Z. The energies are shifted by
    their minimum before exponentiating, so large beta does not overflow.
    '''
    beta = _check_beta(beta)
    e = np.asarray(energies, dtype=float)
    e0 = np.min(e)
    w = np.exp(-beta * (e - e0))
    z = np.sum(w)
    return w / z, float(np.log(z) - beta * e0)


def thermal_state(h, beta, herm_tol=tols.HERM_TOL):
    '''
    The Gibbs state exp(-beta H) / tr exp(-beta H) and its log partition function.
    `beta` = 0 gives the maximally mixed state.

    returns (DensityMatrix, log_z)
    '''
    eig = herm_eig(h, tol=herm_tol)
    p, log_z = thermal_occupations(eig.eigenvalues, beta)
    v = eig.eigenvectors
    return DensityMatrix((v * p) @ dagger(v), validate=False), log_z


def _hermitian(h):
    h = as_matrix(h)
    herm_eig(h)
    return h


@dataclass(frozen=True, eq=False)
class BathSpec:
    '''
    Bath Hamiltonian H^B and inverse temperature beta >= 0.
    '''
    h_bath: np.ndarray
    beta: float

    def __post_init__(self):
        object.__setattr__(self, 'h_bath', _hermitian(self.h_bath))
        object.__setattr__(self, 'beta', _check_beta(self.beta))

    @property
    def dim(self):
        return self.h_bath.shape[0]


@dataclass(frozen=True, eq=False)
class CouplingSpec:
    '''
    Interaction Hamiltonian H^int on the joint space and the coupling eps >= 0.
    '''
    h_int: np.ndarray
    epsilon: float

    def __post_init__(self):
        object.__setattr__(self, 'h_int', _hermitian(self.h_int))
        eps = float(self.epsilon)
        if not np.isfinite(eps) or eps < 0:
            raise ValueError(f'epsilon must be finite and >= 0, not {eps!r}.')
        object.__setattr__(self, 'epsilon', eps)

    def with_epsilon(self, epsilon):
        return CouplingSpec(self.h_int, epsilon)


def bath_eigenbasis(h_bath):
    '''
    Eigenbasis of the bath Hamiltonian with ascending energies and the first
    nonzero component of every eigenvector real and positive.
    '''
    eig = herm_eig(h_bath)
    return HermEig(eig.eigenvalues, fix_phases(eig.eigenvectors))


def joint_hamiltonian(h_sys, bath, cpl):
    '''
    H^SB = h_sys kron I^B + I^S kron H^B + eps H^int, system factor first.
    '''
    h_sys = as_matrix(h_sys)
    ds, db = h_sys.shape[0], bath.dim
    if cpl.h_int.shape != (ds * db, ds * db):
        raise DimensionMismatch(f'h_int of shape {cpl.h_int.shape} for d_S={ds}, d_B={db}.')
    h = kron(h_sys, np.eye(db)) + kron(np.eye(ds), bath.h_bath) + cpl.epsilon * cpl.h_int
    return 0.5 * (h + dagger(h))


class HeatLabeledChannel(KrausChannel):

    def __init__(self, kraus, heat, bath_index, bath_energies, beta, epsilon=None):
        '''
        A thermostated channel: every Kraus operator carries its heat label and
        the pair (i, j) of bath eigenstates before and after the step.

        kwargs
        ------
        epsilon = None
          coupling constant the channel was built with. Informational only.
        '''
        super().__init__(kraus, heat=heat)
        bath_index = tuple((int(i), int(j)) for i, j in bath_index)
        if len(bath_index) != len(self):
            raise DimensionMismatch(f'{len(bath_index)} bath index pairs for '
                                    f'{len(self)} Kraus operators.')
        self._bath_index = bath_index
        self._position = {ij: k for k, ij in enumerate(bath_index)}
        self.bath_energies = tuple(float(e) for e in bath_energies)
        self.beta = _check_beta(beta)
        self.epsilon = epsilon

    @property
    def bath_index(self):
        return self._bath_index

    def position(self, i, j):
        '''
        Kraus index of the bath transition (i, j).
        '''
        return self._position[(i, j)]

    def mirror(self, alpha):
        '''
        Kraus index carrying the swapped bath transition (j, i) of `alpha`.
        '''
        i, j = self._bath_index[alpha]
        return self._position[(j, i)]

    def relabeled(self, kraus):
        '''
        Labels of the time reversed step: heat negated, bath transitions swapped.
        '''
        return HeatLabeledChannel(kraus, [-q for q in self.heat],
                                  [(j, i) for i, j in self._bath_index],
                                  self.bath_energies, self.beta, epsilon=self.epsilon)


def _dilation_kraus(u, dim_sys, energies, basis, beta, epsilon):
    db = len(energies)
    w = kron(np.eye(dim_sys), basis)
    u4 = (dagger(w) @ u @ w).reshape(dim_sys, db, dim_sys, db)
    p, _ = thermal_occupations(energies, beta)
    kraus, heat, index = [], [], []
    for i in range(db):
        for j in range(db):
            # <b_j| U |b_i> on the system factor
            kraus.append(np.sqrt(p[i]) * u4[:, j, :, i])
            heat.append(energies[i] - energies[j])
            index.append((i, j))
    return HeatLabeledChannel(kraus, heat, index, energies, beta, epsilon=epsilon)


def _check_time(t):
    t = float(t)
    if not np.isfinite(t) or not t > 0:
        raise ValueError(f'time must be finite and > 0, not {t!r}.')
    return t


def thermostated_channel(h_sys, bath, cpl, t):
    '''
    The heat labeled channel of one thermostated step of duration `t`,
    d_B^2 Kraus operators A_ij = sqrt(p_i) <b_j| exp(-i H^SB t) |b_i>.
    The channel is trace preserving for every coupling.
    '''
    t = _check_time(t)
    h_sys = as_matrix(h_sys)
    eig = bath_eigenbasis(bath.h_bath)
    u = unitary_of(joint_hamiltonian(h_sys, bath, cpl), t)
    ch = _dilation_kraus(u, h_sys.shape[0], eig.eigenvalues, eig.eigenvectors,
                         bath.beta, cpl.epsilon)
    logger.debug('thermostated channel: d_S=%d, d_B=%d, eps=%g, t=%g',
                 h_sys.shape[0], bath.dim, cpl.epsilon, t)
    return ch


def reversed_dilation_channel(h_sys, bath, cpl, t):
    '''
    The thermostated channel of the time reversed joint dynamics U_SB^dagger,
    B_ij = sqrt(p_i) <b_j| U_SB^dagger |b_i>. Its operator B_ji equals
    (A_ij exp(beta Q_ij / 2))^dagger exactly.
    '''
    t = _check_time(t)
    h_sys = as_matrix(h_sys)
    eig = bath_eigenbasis(bath.h_bath)
    u = unitary_of(joint_hamiltonian(h_sys, bath, cpl), -t)
    return _dilation_kraus(u, h_sys.shape[0], eig.eigenvalues, eig.eigenvectors,
                           bath.beta, cpl.epsilon)


def dilate_apply(h_sys, bath, cpl, t, rho):
    '''
    tr_B U_SB (rho kron pi_B) U_SB^dagger, the thermostated step evaluated on
    the joint space instead of through Kraus operators.
    '''
    h_sys = as_matrix(h_sys)
    ds, db = h_sys.shape[0], bath.dim
    pi_b, _ = thermal_state(bath.h_bath, bath.beta)
    u = unitary_of(joint_hamiltonian(h_sys, bath, cpl), _check_time(t))
    joint = u @ kron(np.asarray(rho), pi_b.mat) @ dagger(u)
    return DensityMatrix(partial_trace(joint, ds, db, keep='system'))


def weak_coupling_residual(hlc, pi_sys, rank_tol=tols.RANK_TOL):
    '''
    max_alpha |A~_alpha^dagger - A_alpha exp(beta Q_alpha / 2)| (spectral norm)
    with A~_alpha = pi^(1/2) A_alpha^dagger pi^(-1/2).

    A_alpha exp(beta Q_alpha / 2) is the adjoint of the mirrored Kraus operator
    of `reversed_dilation_channel`, so the residual measures how far reversing
    the system alone is from reversing the joint dynamics. It vanishes without
    coupling and grows linearly in eps.
    '''
    s = pd_power(np.asarray(pi_sys), 0.5, rank_tol=rank_tol)
    s_inv = pd_power(np.asarray(pi_sys), -0.5, rank_tol=rank_tol)
    if s.shape[0] != hlc.dim:
        raise DimensionMismatch(f'pi of dimension {s.shape[0]} for a channel of '
                                f'dimension {hlc.dim}.')
    residual = 0.0
    for a, q in zip(hlc.kraus, hlc.heat):
        rev_dag = dagger(s @ dagger(a) @ s_inv)
        dev = np.linalg.norm(rev_dag - a * np.exp(0.5 * hlc.beta * q), 2)
        residual = max(residual, float(dev))
    return residual
