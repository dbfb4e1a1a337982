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
The acceptance suite behind `qrev selftest`.

Every check takes a seeded `numpy.random.Generator` and returns two dicts,
the measured metrics and the pass flags computed from them.
'''

import logging
import time
import numpy as np
from .matcore import unitary_of, dagger, herm_eig
from .channel import (super_matrix, check_tcp, fixed_point, choi_min_eigenvalue, compose,
                      unitary_channel, apply)
from .reversal import reverse_channel, symmetrize
from .classical import stationary, markov_reverse, extract_markov
from .thermal import (BathSpec, CouplingSpec, thermostated_channel, dilate_apply, thermal_state,
                      weak_coupling_residual)
from .driven import (Protocol, mr_table, mr_summary, jarzynski_check, enumerate_trajectories,
                     sample_trajectories, endpoint_occupations)
from .accumulators import TrajectoryHistogram
from .randomops import (random_channel, random_hermitian, random_density, random_stochastic,
                        random_interaction, phase_conjugated, nondegenerate)
from .errors import NonUniqueFixedPoint, NoPositiveFixedPoint


__all__ = ['CHECKS', 'run_selftest']

logger = logging.getLogger(__name__)

BATH = np.diag([0.0, 1.0])


def _random_balanced_channel(dim, rng, spacing=0.0):
    '''
    Random channel and its fixed point, redrawn until the fixed point is
    unique, full rank and has eigenvalues at least `spacing` apart.
    '''
    while True:
        ch = random_channel(dim, rng, n_kraus=dim)
        try:
            pi = fixed_point(ch)
        except (NonUniqueFixedPoint, NoPositiveFixedPoint):
            continue
        w = herm_eig(pi.mat).eigenvalues
        if w[0] > 1e-3 and (spacing == 0 or nondegenerate(pi.mat, spacing)):
            return ch, pi


def check_reversal_algebra(rng, n=50):
    invol, fix, tcp, choi = 0.0, 0.0, 0.0, np.inf
    for k in range(n):
        ch, pi = _random_balanced_channel(2 + k % 3, rng)
        rev = reverse_channel(ch, pi)
        revrev = reverse_channel(rev, pi)
        invol = max(invol, super_matrix(revrev).distance(super_matrix(ch)))
        fix = max(fix, float(np.linalg.norm(rev(pi.mat) - pi.mat)))
        tcp = max(tcp, check_tcp(rev).max_violation)
        choi = min(choi, choi_min_eigenvalue(rev))
    metrics = {'involution_residual': invol, 'fixed_point_residual': fix,
               'tcp_violation': tcp, 'choi_min_eigenvalue': choi}
    passes = {'involution': invol <= 1e-9, 'fixed_point': fix <= 1e-9,
              'trace_preserving': tcp <= 1e-8, 'completely_positive': choi >= -1e-9}
    return metrics, passes


def check_contravariance(rng, n=20):
    worst = 0.0
    for k in range(n):
        s, pi = _random_balanced_channel(2 + k % 3, rng)
        if k % 2 == 0:
            s = symmetrize(s, pi)
            r = phase_conjugated(s, pi, rng)
        else:
            s, r = phase_conjugated(s, pi, rng), s
        lhs = reverse_channel(compose(r, s), pi)
        rhs = compose(reverse_channel(s, pi), reverse_channel(r, pi))
        worst = max(worst, super_matrix(lhs).distance(super_matrix(rhs)))
    return {'contravariance_residual': worst}, {'contravariance': worst <= 1e-9}


def check_isolated(rng, n=10):
    worst = 0.0
    for k in range(n):
        d = 2 + k % 3
        u = unitary_of(random_hermitian(d, rng), 1.0)
        rev = reverse_channel(unitary_channel(u), np.eye(d) / d)
        worst = max(worst, super_matrix(rev).distance(super_matrix(unitary_channel(dagger(u)))))
    return {'unitary_reversal_distance': worst}, {'unitary_reversal': worst <= 1e-12}


def check_classical(rng, n=20):
    equiv = 0.0
    for k in range(n):
        ch, pi = _random_balanced_channel(2 + k % 3, rng, spacing=1e-3)
        eig = herm_eig(pi.mat)
        m = extract_markov(ch, eig.eigenvectors)
        lhs = extract_markov(reverse_channel(ch, pi), eig.eigenvectors)
        rhs = markov_reverse(m, eig.eigenvalues / eig.eigenvalues.sum())
        equiv = max(equiv, float(np.max(np.abs(lhs - rhs))))
    invol, flow = 0.0, 0.0
    for k in range(n):
        m = random_stochastic(2 + k % 4, rng)
        p = stationary(m)
        mr = markov_reverse(m, p)
        invol = max(invol, float(np.max(np.abs(markov_reverse(mr, p) - m))))
        flow = max(flow, float(np.max(np.abs(mr * p[np.newaxis, :] - (m * p[np.newaxis, :]).T))))
    metrics = {'equivariance_residual': equiv, 'markov_involution_residual': invol,
               'markov_balance_residual': flow}
    passes = {'equivariance': equiv <= 1e-9, 'markov_involution': invol <= 1e-12,
              'markov_balance': flow <= 1e-12}
    return metrics, passes


def _thermal_fixture(rng, beta=1.0):
    h_sys = random_hermitian(2, rng)
    bath = BathSpec(BATH, beta)
    v = random_interaction(2, 2, rng)
    return h_sys, bath, v


def check_thermostated(rng, t=1.0):
    h_sys, bath, v = _thermal_fixture(rng)
    ch = thermostated_channel(h_sys, bath, CouplingSpec(v, 1e-1), t)
    dil = 0.0
    for _ in range(5):
        rho = random_density(2, rng)
        dil = max(dil, float(np.linalg.norm(apply(ch, rho).mat - dilate_apply(
            h_sys, bath, CouplingSpec(v, 1e-1), t, rho).mat)))
    tcp = max(check_tcp(thermostated_channel(h_sys, bath, CouplingSpec(v, eps), t)).max_violation
              for eps in (0.0, 1e-2, 1e-1))
    pi, _ = thermal_state(h_sys, bath.beta)
    devs = []
    for eps in (1e-2, 5e-3):
        ch = thermostated_channel(h_sys, bath, CouplingSpec(v, eps), t)
        devs.append(float(np.linalg.norm(ch(pi.mat) - pi.mat)))
    ratio = devs[0] / devs[1]
    metrics = {'dilation_residual': dil, 'tcp_violation': tcp, 'balance_deviation': devs[0],
               'balance_ratio': ratio}
    passes = {'dilation': dil <= 1e-10, 'trace_preserving': tcp < 1e-12,
              'balance_first_order': 1.6 <= ratio <= 2.4}
    return metrics, passes


def check_weak_coupling(rng, t=1.0):
    h_sys, bath, v = _thermal_fixture(rng)
    pi, _ = thermal_state(h_sys, bath.beta)
    res = [weak_coupling_residual(thermostated_channel(h_sys, bath, CouplingSpec(v, eps), t), pi)
           for eps in (0.0, 1e-2, 5e-3)]
    ratio = res[1] / res[2]
    metrics = {'residual_eps0': res[0], 'residual': res[1], 'residual_half': res[2],
               'residual_ratio': ratio}
    passes = {'decoupled': res[0] < 1e-10, 'first_order': 1.6 <= ratio <= 2.4}
    return metrics, passes


def _exchange_coupling():
    sp = np.array([[0, 0], [1, 0]], dtype=complex)
    v = np.kron(sp, dagger(sp))
    return v + dagger(v)


def check_microscopic_reversibility(rng, tau=3, eps=1e-2):
    h_sys, bath, v = _thermal_fixture(rng)
    hs = [h_sys] * tau

    def protocol(e, h_list=hs, coupling=v, h_bath=BATH):
        return Protocol.thermostated(h_list, h_bath, coupling, e, 1.0, 1.0)

    decoupled = mr_summary(mr_table(protocol(0.0)))['max_residual']
    h0 = np.diag([0.0, 1.0])
    conserving = mr_summary(mr_table(protocol(eps, [h0] * tau, _exchange_coupling())))
    p = protocol(eps)
    rows = mr_table(p)
    _, energies, _ = endpoint_occupations(p, 'initial')
    identity = max((abs(r['log_ratio'] + p.beta * (energies[r['e_tau']] - energies[r['e0']]))
                    for r in rows if r['status'] == 'ok' and r['weight'] > 1e-9), default=0.0)
    full = mr_summary(rows)
    half = mr_summary(mr_table(protocol(eps / 2)))
    ratio = full['mean_residual'] / half['mean_residual']
    metrics = {'residual_eps0': decoupled, 'residual_energy_conserving':
               conserving['max_residual'], 'energy_identity_residual': identity,
               'max_residual': full['max_residual'], 'mean_residual': full['mean_residual'],
               'mean_residual_ratio': ratio}
    passes = {'decoupled': decoupled <= 1e-9,
              'energy_conserving': conserving['max_residual'] <= 1e-9,
              'energy_identity': identity <= 1e-9, 'second_order_mean': 3.0 <= ratio <= 5.0}
    return metrics, passes


def check_jarzynski(rng, eps=1e-2):
    h_sys, _, v = _thermal_fixture(rng)
    h_end = random_hermitian(2, rng)
    switch = jarzynski_check(Protocol.thermostated([h_sys, h_end], BATH, v, eps, 1.0, 1.0))
    const = jarzynski_check(Protocol.thermostated([h_sys, h_sys], BATH, v, eps, 1.0, 1.0))
    metrics = {'switch_rel_err': switch.rel_err, 'switch_lhs': switch.lhs,
               'switch_rhs': switch.rhs, 'constant_rel_err': const.rel_err}
    passes = {'switch': switch.rel_err <= 1e-9, 'constant': const.rel_err <= 1e-9}
    return metrics, passes


def check_sampler(rng, n=100000, workers=2, eps=1e-1, tau=2):
    h_sys, _, v = _thermal_fixture(rng)
    p = Protocol.thermostated([h_sys] * tau, BATH, v, eps, 1.0, 1.0)
    occ = endpoint_occupations(p, 'initial')[0]
    seed = int(rng.integers(2**31))
    expected = {tr.key: pr for tr, pr in enumerate_trajectories(p, occ)}
    hist = TrajectoryHistogram()
    for tr in sample_trajectories(p, occ, n, seed, workers=0):
        hist += tr
    passed, cells = hist.band_check(expected)
    fraction = passed / cells
    # serial against at least two processes with another chunking
    nproc = max(workers, 2)
    serial = sample_trajectories(p, occ, 2000, seed, workers=0, chunk=300)
    parallel = sample_trajectories(p, occ, 2000, seed, workers=nproc, chunk=700)
    identical = serial == parallel
    metrics = {'parallel_workers': nproc, 'cells': cells, 'cells_within_3sigma': passed,
               'fraction_within_3sigma': fraction}
    passes = {'frequencies': fraction >= 0.95, 'worker_independent': identical}
    return metrics, passes


CHECKS = [
    ('reversal_algebra', check_reversal_algebra),
    ('contravariance', check_contravariance),
    ('isolated_system', check_isolated),
    ('classical_equivariance', check_classical),
    ('thermostated_construction', check_thermostated),
    ('weak_coupling', check_weak_coupling),
    ('microscopic_reversibility', check_microscopic_reversibility),
    ('jarzynski', check_jarzynski),
    ('sampler_consistency', check_sampler),
]


def run_selftest(seed=0, workers=2, n_samples=100000, only=None):
    '''
    Runs the checks in order, each with its own generator derived from `seed`.

    returns (metrics, passes), both keyed '<check>.<name>'.
    '''
    metrics, passes = {}, {}
    seeds = np.random.SeedSequence(seed).spawn(len(CHECKS))
    for (name, check), ss in zip(CHECKS, seeds):
        if only is not None and name not in only:
            continue
        rng = np.random.default_rng(ss)
        start = time.perf_counter()
        if check is check_sampler:
            m, p = check(rng, n=n_samples, workers=workers)
        else:
            m, p = check(rng)
        logger.info('%s: %s in %.2f s', name, 'pass' if all(p.values()) else 'FAIL',
                    time.perf_counter() - start)
        metrics.update({f'{name}.{k}': v for k, v in m.items()})
        passes.update({f'{name}.{k}': bool(v) for k, v in p.items()})
    return metrics, passes
