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
Driven protocols and trajectory statistics.

A protocol is a time ordered list of steps S_1 ... S_tau, each a heat labeled
channel for the system Hamiltonian H^S_t of that interval. A trajectory records
the initial measurement outcome e_0 in `init_basis`, the Kraus index alpha_t of
every step and the final outcome e_tau in `final_basis`. The system is never
measured at intermediate times.

The reverse protocol runs the reversed steps S~_tau ... S~_1, each reversed
with respect to its reference state. The reverse of a trajectory visits the
same Kraus positions in reverse order; the reversed step carries the negated
heat and the swapped bath transition at that position.

Log ratios of forward and reverse path probabilities are compared with the
heat by `mr_check` (paths conditioned on their starting point) and
`crooks_check` (paths weighted with equilibrium endpoint occupations).
'''

import functools
import logging
import math
from collections import namedtuple
from dataclasses import dataclass
import numpy as np
from . import tolerances as tols
from .matcore import as_matrix, herm_eig, fix_phases, check_basis, dagger
from .channel import fixed_point, identity_channel
from .reversal import reverse_channel
from .classical import as_prob_vector
from .thermal import (BathSpec, CouplingSpec, HeatLabeledChannel, thermal_state,
                      thermostated_channel)
from .accumulators import Variance
from .pipeline import Pipeline
from .errors import (DimensionMismatch, IndexOutOfRange, ZeroProbabilityBranch,
                     EnumerationTooLarge, NotEigenbasis)


__all__ = ['ThermalSetup', 'Protocol', 'Trajectory', 'trajectory_prob', 'reverse_protocol',
           'mr_check', 'crooks_check', 'enumerate_trajectories', 'sample_trajectories',
           'jarzynski_check', 'jarzynski_estimate', 'mr_table', 'mr_summary',
           'endpoint_occupations', 'identity_protocol']

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class ThermalSetup:
    '''
    The bath and coupling a thermostated protocol was built from. Kept so the
    protocol can be rebuilt at another coupling.
    '''
    h_bath: np.ndarray
    h_int: np.ndarray
    epsilon: float
    time: float


def _energy_basis(h):
    return fix_phases(herm_eig(h).eigenvectors)


class Protocol():

    def __init__(self, steps, h_sys_list, beta, init_basis=None, final_basis=None,
                 thermal=None):
        '''
        A driven protocol.

        kwargs
        ------
        init_basis = None
          basis of the initial measurement, columns are basis vectors.
          Defaults to the energy eigenbasis of the first system Hamiltonian.
        final_basis = None
          basis of the final measurement, defaults to the energy eigenbasis of
          the last system Hamiltonian.
        thermal = None
          `ThermalSetup` of a thermostated protocol, used by `with_epsilon`.
        '''
        steps = tuple(steps)
        if len(steps) == 0:
            raise ValueError('a protocol needs at least one step.')
        hs = tuple(as_matrix(h) for h in h_sys_list)
        if len(hs) != len(steps):
            raise DimensionMismatch(f'{len(hs)} system Hamiltonians for {len(steps)} steps.')
        dim = steps[0].dim
        for t, (s, h) in enumerate(zip(steps, hs)):
            if s.dim != dim or h.shape != (dim, dim):
                raise DimensionMismatch(f'step {t} has dimension {s.dim} and a Hamiltonian '
                                        f'of shape {h.shape}, expected {dim}.')
            herm_eig(h)
        self.beta = float(beta)
        if not np.isfinite(self.beta) or self.beta < 0:
            raise ValueError(f'beta must be finite and >= 0, not {beta!r}.')
        for t, s in enumerate(steps):
            if isinstance(s, HeatLabeledChannel) and not math.isclose(s.beta, self.beta):
                raise ValueError(f'step {t} was built at beta={s.beta}, protocol has '
                                 f'beta={self.beta}.')
        self.steps = steps
        self.h_sys_list = hs
        if init_basis is None:
            init_basis = _energy_basis(hs[0])
        if final_basis is None:
            final_basis = _energy_basis(hs[-1])
        self.init_basis = check_basis(init_basis, dim)
        self.final_basis = check_basis(final_basis, dim)
        self.thermal = thermal
        self._stacks = tuple(np.stack(s.kraus) for s in steps)
        self._heats = tuple(tuple(s.heat) if s.heat is not None else (0.0,) * len(s)
                            for s in steps)

    @classmethod
    def thermostated(cls, h_sys_list, h_bath, h_int, epsilon, beta, time,
                     init_basis=None, final_basis=None):
        '''
        One thermostated step of duration `time` per system Hamiltonian, all with
        the same bath, coupling and inverse temperature.
        '''
        bath = BathSpec(h_bath, beta)
        cpl = CouplingSpec(h_int, epsilon)
        steps = [thermostated_channel(h, bath, cpl, time) for h in h_sys_list]
        setup = ThermalSetup(bath.h_bath, cpl.h_int, cpl.epsilon, float(time))
        return cls(steps, h_sys_list, beta, init_basis=init_basis,
                   final_basis=final_basis, thermal=setup)

    def with_epsilon(self, epsilon):
        if self.thermal is None:
            raise ValueError('only thermostated protocols can be rebuilt at another coupling.')
        th = self.thermal
        return Protocol.thermostated(self.h_sys_list, th.h_bath, th.h_int, epsilon,
                                     self.beta, th.time, init_basis=self.init_basis,
                                     final_basis=self.final_basis)

    @property
    def tau(self):
        return len(self.steps)

    @property
    def dim(self):
        return self.steps[0].dim

    @property
    def epsilon(self):
        '''
        Largest coupling of all steps, 0 for steps without one.
        '''
        return max((getattr(s, 'epsilon', None) or 0.0) for s in self.steps)

    @property
    def n_trajectories(self):
        return self.dim * self.dim * math.prod(len(s) for s in self.steps)

    def heat(self, t, alpha):
        return self._heats[t][alpha]

    def trajectory(self, e0, alphas, e_tau):
        '''
        The trajectory (e0; alphas; e_tau) with the heat labels of this protocol.
        '''
        alphas = tuple(int(a) for a in alphas)
        _check_indices(self, int(e0), alphas, int(e_tau))
        heats = tuple(self._heats[t][a] for t, a in enumerate(alphas))
        return Trajectory(int(e0), alphas, int(e_tau), heats)

    def __repr__(self):
        s = '<Protocol dim={d} with {tau} steps at beta={b}>'
        return s.format(d=self.dim, tau=self.tau, b=self.beta)


@dataclass(frozen=True)
class Trajectory:
    '''
    One measured history (e0; alpha_1 ... alpha_tau; e_tau) with the heat
    absorbed in every step.
    '''
    e0: int
    alphas: tuple
    e_tau: int
    heats: tuple

    def __post_init__(self):
        object.__setattr__(self, 'alphas', tuple(self.alphas))
        object.__setattr__(self, 'heats', tuple(float(q) for q in self.heats))
        if len(self.heats) != len(self.alphas):
            raise DimensionMismatch(f'{len(self.heats)} heats for {len(self.alphas)} steps.')

    @property
    def q_total(self):
        # correctly rounded, hence exactly antisymmetric under reversal
        return math.fsum(self.heats)

    @property
    def key(self):
        return (self.e0, self.alphas, self.e_tau)

    def reversed(self):
        '''
        The trajectory of the reverse protocol: endpoints swapped, Kraus
        positions in reverse order, heats negated.
        '''
        return Trajectory(self.e_tau, self.alphas[::-1], self.e0,
                          tuple(-q for q in self.heats[::-1]))


def _check_indices(p, e0, alphas, e_tau):
    if len(alphas) != p.tau:
        raise IndexOutOfRange(f'{len(alphas)} Kraus indices for a protocol with {p.tau} steps.')
    if not 0 <= e0 < p.dim or not 0 <= e_tau < p.dim:
        raise IndexOutOfRange(f'endpoint indices ({e0}, {e_tau}) for dimension {p.dim}.')
    for t, a in enumerate(alphas):
        if not 0 <= a < len(p.steps[t]):
            raise IndexOutOfRange(f'Kraus index {a} at step {t} with {len(p.steps[t])} '
                                  'operators.')


def _amplitude(p, tr):
    _check_indices(p, tr.e0, tr.alphas, tr.e_tau)
    psi = p.init_basis[:, tr.e0]
    for ops, a in zip(p._stacks, tr.alphas):
        psi = ops[a] @ psi
    return np.vdot(p.final_basis[:, tr.e_tau], psi)


def _conditional_prob(p, tr):
    return float(abs(_amplitude(p, tr)) ** 2)


def _initial(p, initial):
    initial = as_prob_vector(initial, tol=1e-9)
    if initial.shape[0] != p.dim:
        raise DimensionMismatch(f'{initial.shape[0]} initial probabilities for dimension {p.dim}.')
    return initial


def trajectory_prob(p, tr, initial):
    '''
    initial[e0] |<e_tau| A_(alpha_tau) ... A_(alpha_1) |e0>|^2, the joint
    probability of the trajectory when e0 is drawn from `initial`.
    '''
    initial = _initial(p, initial)
    return float(initial[tr.e0]) * _conditional_prob(p, tr)


def endpoint_occupations(p, which='initial'):
    '''
    <e|pi|e> for the thermal state pi of the first ('initial') or last ('final')
    system Hamiltonian in the corresponding measurement basis. For energy
    eigenbases these are the Boltzmann weights.

    returns (occupations, energies <e|H|e>, log_z)
    '''
    if which == 'initial':
        h, basis = p.h_sys_list[0], p.init_basis
    elif which == 'final':
        h, basis = p.h_sys_list[-1], p.final_basis
    else:
        raise ValueError(f"which must be 'initial' or 'final', not {which!r}.")
    pi, log_z = thermal_state(h, p.beta)
    occ = np.real(np.einsum('ia,ij,ja->a', np.conj(basis), pi.mat, basis))
    occ = np.clip(occ, 0, None)
    energies = np.real(np.einsum('ia,ij,ja->a', np.conj(basis), h, basis))
    return occ / occ.sum(), energies, log_z


def _references(p, reference):
    if reference == 'thermal':
        return [thermal_state(h, p.beta)[0] for h in p.h_sys_list]
    if reference == 'fixed_point':
        return [fixed_point(s) for s in p.steps]
    raise ValueError(f"reference must be 'thermal' or 'fixed_point', not {reference!r}.")


def reverse_protocol(p, reference='thermal', balance_tol=None, unbalanced='raise'):
    '''
    Steps in reverse order, each replaced by its reversal with respect to the
    reference state pi_t; the measurement bases are swapped.

    kwargs
    ------
    reference = 'thermal'
      'thermal' uses the Gibbs state of H^S_t at the protocol's beta, which a
      thermostated step keeps invariant only up to O(eps); the reversed steps
      are then trace preserving up to O(eps) as well. 'fixed_point' uses the
      exact fixed point of every step.
    balance_tol = None
      largest admitted |S_t pi_t - pi_t|. Defaults to BALANCE_EPS_FACTOR * eps
      for the protocol's coupling eps, at least BALANCE_TOL.
    unbalanced = 'raise'
      passed to `reverse_channel`.
    '''
    if balance_tol is None:
        balance_tol = max(tols.BALANCE_TOL, tols.BALANCE_EPS_FACTOR * p.epsilon)
    refs = _references(p, reference)
    steps = [reverse_channel(s, pi, balance_tol=balance_tol, unbalanced=unbalanced)
             for s, pi in zip(p.steps[::-1], refs[::-1])]
    logger.debug('reversed %r with %s references, balance_tol=%.1e', p, reference, balance_tol)
    return Protocol(steps, p.h_sys_list[::-1], p.beta,
                    init_basis=p.final_basis, final_basis=p.init_basis)


MrResult = namedtuple('MrResult', ['log_ratio', 'minus_beta_q', 'residual', 'p_fwd', 'p_rev'])
CrooksResult = namedtuple('CrooksResult', ['log_ratio', 'target', 'residual', 'work'])


def _path_pair(p, tr, rev, reference, p_floor):
    if rev is None:
        rev = reverse_protocol(p, reference=reference)
    p_fwd = _conditional_prob(p, tr)
    if p_fwd <= p_floor:
        raise ZeroProbabilityBranch(f'trajectory {tr.key} has forward probability {p_fwd:.3e}.')
    p_rev = _conditional_prob(rev, tr.reversed())
    if p_rev <= p_floor:
        raise ZeroProbabilityBranch(f'reverse of trajectory {tr.key} has probability '
                                    f'{p_rev:.3e}.')
    return p_fwd, p_rev


def mr_check(p, tr, rev=None, reference='thermal', p_floor=tols.P_FLOOR):
    '''
    Compares log(p / p~) with -beta Q for one trajectory, where p is the
    probability of the trajectory given e0 and p~ the probability of the
    reversed trajectory in the reverse protocol given e_tau.

    For a constant system Hamiltonian log(p / p~) = -beta (E[e_tau] - E[e0])
    holds exactly, so the residual is beta times the energy of the trajectory
    not accounted for by the heat. It vanishes without coupling and for
    couplings conserving the uncoupled energy.

    kwargs
    ------
    rev = None
      the reverse protocol. Computed with `reference` if not given; pass it
      when checking many trajectories.
    p_floor = P_FLOOR
      probabilities at or below this raise `ZeroProbabilityBranch`.
    '''
    p_fwd, p_rev = _path_pair(p, tr, rev, reference, p_floor)
    log_ratio = math.log(p_fwd) - math.log(p_rev)
    mbq = -p.beta * tr.q_total
    return MrResult(log_ratio, mbq, abs(log_ratio - mbq), p_fwd, p_rev)


def crooks_check(p, tr, rev=None, reference='thermal', p_floor=tols.P_FLOOR):
    '''
    Compares log(P / P~) with beta (W - dF), where P and P~ start from the
    thermal occupations of the first and the last system Hamiltonian,
    W = E_tau[e_tau] - E_1[e0] - Q and beta dF = log Z_1 - log Z_tau.
    '''
    p_fwd, p_rev = _path_pair(p, tr, rev, reference, p_floor)
    occ_i, e_i, log_z1 = endpoint_occupations(p, 'initial')
    occ_f, e_f, log_zt = endpoint_occupations(p, 'final')
    if occ_i[tr.e0] <= 0 or occ_f[tr.e_tau] <= 0:
        raise ZeroProbabilityBranch(f'endpoint of trajectory {tr.key} has zero occupation.')
    log_ratio = (math.log(occ_i[tr.e0] * p_fwd) - math.log(occ_f[tr.e_tau] * p_rev))
    work = float(e_f[tr.e_tau] - e_i[tr.e0]) - tr.q_total
    target = p.beta * work - log_z1 + log_zt
    return CrooksResult(log_ratio, target, abs(log_ratio - target), work)


def enumerate_trajectories(p, initial, cap=tols.ENUM_CAP, p_floor=tols.P_FLOOR):
    '''
    Every trajectory with joint probability above `p_floor` and its probability,
    in lexicographic order of (e0, alphas, e_tau). Branches are pruned as soon
    as their weight drops to `p_floor`.

    Raises `EnumerationTooLarge` if d^2 prod_t K_t exceeds `cap`.
    '''
    initial = _initial(p, initial)
    total = p.n_trajectories
    if total > cap:
        raise EnumerationTooLarge(f'{total} trajectories exceed the enumeration cap {cap}.')
    fb = dagger(p.final_basis)
    out = []

    def descend(e0, w0, t, psi, alphas):
        if t == p.tau:
            probs = w0 * np.abs(fb @ psi) ** 2
            for e, pr in enumerate(probs):
                if pr > p_floor:
                    out.append((p.trajectory(e0, alphas, e), float(pr)))
            return
        phis = p._stacks[t] @ psi
        weights = w0 * np.sum(np.abs(phis) ** 2, axis=1)
        for a, phi in enumerate(phis):
            if weights[a] > p_floor:
                descend(e0, w0, t + 1, phi, alphas + (a,))

    for e0 in range(p.dim):
        if initial[e0] > p_floor:
            descend(e0, float(initial[e0]), 0, p.init_basis[:, e0], ())
    logger.info('enumerated %d of %d trajectories, total probability %.12f',
                len(out), total, math.fsum(pr for _, pr in out))
    return out


def _draw(weights, u):
    cum = np.cumsum(weights)
    return min(int(np.searchsorted(cum, u * cum[-1], side='right')), len(weights) - 1)


def _sample_chunk(bounds, protocol, initial, seed):
    # one counter based stream per trajectory ordinal
    p = protocol
    fb = dagger(p.final_basis)
    out = []
    for ordinal in range(*bounds):
        rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(ordinal,)))
        e0 = _draw(initial, rng.random())
        psi = p.init_basis[:, e0]
        alphas = []
        for ops in p._stacks:
            phis = ops @ psi
            w = np.sum(np.abs(phis) ** 2, axis=1)
            a = _draw(w, rng.random())
            psi = phis[a] / np.sqrt(w[a])
            alphas.append(a)
        e_tau = _draw(np.abs(fb @ psi) ** 2, rng.random())
        out.append(p.trajectory(e0, alphas, e_tau))
    return out


def sample_trajectories(p, initial, n, seed, workers=0, chunk=2000):
    '''
    Draw `n` trajectories: e0 from `initial`, every Kraus index from the
    conditional branch probabilities of the current state, e_tau from the final
    measurement.

    Trajectory k uses the random stream SeedSequence(seed, spawn_key=(k,)),
    and chunks are collected in order, so the result depends on `seed` only,
    never on `workers` or `chunk`.

    kwargs
    ------
    workers = 0
      number of worker processes, 0 samples in the current process.
    chunk = 2000
      trajectories per task.
    '''
    if not n >= 1:
        raise ValueError(f'n >= 1 required, but n={n} found.')
    initial = _initial(p, initial)
    worker = Pipeline(functools.partial(_sample_chunk, protocol=p, initial=initial,
                                        seed=int(seed)),
                      nworkers=workers)
    bounds = iter([(s, min(s + chunk, n)) for s in range(0, n, chunk)])
    out = []
    for part in worker(bounds):
        out.extend(part)
    logger.info('sampled %d trajectories with seed %d on %d workers', n, seed, workers)
    return out


def _check_eigenbasis(h, basis, tol, which):
    d = dagger(basis) @ h @ basis
    off = d - np.diag(np.diag(d))
    dev = np.linalg.norm(off)
    if dev > tol * max(1.0, np.linalg.norm(h)):
        raise NotEigenbasis(f'{which} basis does not diagonalize its Hamiltonian, '
                            f'off-diagonal norm {dev:.3e}.')


JarzynskiResult = namedtuple('JarzynskiResult', ['lhs', 'rhs', 'rel_err'])
JarzynskiEstimate = namedtuple('JarzynskiEstimate', ['estimate', 'stderr', 'rhs', 'n'])


def _work(tr, e_i, e_f):
    return float(e_f[tr.e_tau] - e_i[tr.e0]) - tr.q_total


def _jarzynski_setup(p, basis_tol):
    _check_eigenbasis(p.h_sys_list[0], p.init_basis, basis_tol, 'initial')
    _check_eigenbasis(p.h_sys_list[-1], p.final_basis, basis_tol, 'final')
    occ, e_i, log_z1 = endpoint_occupations(p, 'initial')
    _, e_f, log_zt = endpoint_occupations(p, 'final')
    return occ, e_i, e_f, math.exp(log_zt - log_z1)


def jarzynski_check(p, cap=tols.ENUM_CAP, p_floor=tols.P_FLOOR, basis_tol=1e-8):
    '''
    <exp(-beta W)> over all trajectories starting from the thermal occupations
    of the first Hamiltonian, with W = E_tau[e_tau] - E_1[e0] - Q, against
    Z_tau / Z_1.

    Both measurement bases must be energy eigenbases of the endpoint
    Hamiltonians, otherwise `NotEigenbasis` is raised.
    '''
    occ, e_i, e_f, rhs = _jarzynski_setup(p, basis_tol)
    trajs = enumerate_trajectories(p, occ, cap=cap, p_floor=p_floor)
    lhs = math.fsum(pr * math.exp(-p.beta * _work(tr, e_i, e_f)) for tr, pr in trajs)
    return JarzynskiResult(lhs, rhs, abs(lhs - rhs) / rhs)


def jarzynski_estimate(p, n, seed, workers=0, basis_tol=1e-8):
    '''
    Sampled estimate of <exp(-beta W)> and its standard error from `n`
    trajectories.
    '''
    occ, e_i, e_f, rhs = _jarzynski_setup(p, basis_tol)
    acc = Variance()
    for tr in sample_trajectories(p, occ, n, seed, workers=workers):
        acc += math.exp(-p.beta * _work(tr, e_i, e_f))
    stderr = acc.stderr if acc.n > 1 else math.nan
    return JarzynskiEstimate(acc.mean.value, stderr, rhs, acc.n)


def mr_table(p, initial=None, reference='thermal', cap=tols.ENUM_CAP, p_floor=tols.P_FLOOR):
    '''
    One row per enumerated trajectory with the quantities of `mr_check`.
    `weight` is the joint forward probability with e0 drawn from `initial`,
    which defaults to the thermal occupations of the first Hamiltonian.
    Trajectories whose reverse is unreachable are kept with status
    'unreachable_reverse' and no log ratio.
    '''
    if initial is None:
        initial = endpoint_occupations(p, 'initial')[0]
    rev = reverse_protocol(p, reference=reference)
    rows = []
    for tr, weight in enumerate_trajectories(p, initial, cap=cap, p_floor=p_floor):
        row = {'e0': tr.e0, 'alphas': list(tr.alphas), 'e_tau': tr.e_tau, 'weight': weight,
               'Q': tr.q_total}
        try:
            res = mr_check(p, tr, rev=rev, p_floor=p_floor)
        except ZeroProbabilityBranch:
            row.update(p_fwd=_conditional_prob(p, tr), p_rev=_conditional_prob(rev, tr.reversed()),
                       log_ratio=None, residual=None, status='unreachable_reverse')
        else:
            row.update(p_fwd=res.p_fwd, p_rev=res.p_rev, log_ratio=res.log_ratio,
                       residual=res.residual, status='ok')
        rows.append(row)
    return rows


def mr_summary(rows, p_min=1e-12):
    '''
    Largest residual over rows with weight above `p_min`, probability weighted
    mean residual and the number of unreachable reverse trajectories.
    '''
    ok = [r for r in rows if r['status'] == 'ok']
    considered = [r['residual'] for r in ok if r['weight'] > p_min]
    wsum = math.fsum(r['weight'] for r in ok)
    mean = math.fsum(r['weight'] * r['residual'] for r in ok) / wsum if wsum > 0 else 0.0
    return {'max_residual': max(considered, default=0.0),
            'mean_residual': mean,
            'n_trajectories': len(rows),
            'n_unreachable': len(rows) - len(ok)}


def identity_protocol(dim, tau, beta=1.0):
    '''
    `tau` identity steps with vanishing system Hamiltonians. Test fixture.
    '''
    h = np.zeros((dim, dim))
    return Protocol([identity_channel(dim) for _ in range(tau)], [h] * tau, beta)

