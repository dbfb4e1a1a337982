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
The `qrev` command.

Every subcommand writes one report to standard output (or `--out`):

    {"command", "inputs", "metrics", "pass", "seed", "wall_time", "error", "result"}

`inputs` maps every input file to its sha256 digest, `pass` maps check names to
booleans. The exit code is 0 if all checks pass, 2 if a check fails and 1 on
an input or usage error, in which case `error` holds the error code.
With `--format csv` the result table (or the metrics) is written as CSV instead.
'''

import argparse
import hashlib
import io
import json
import logging
import math
import os
import sys
import time
import numpy as np
from . import __version__
from . import tolerances as tols
from . import serialization as ser
from .errors import QrevError, UsageError, InvalidInput
from .channel import check_tcp, fixed_point
from .reversal import reverse_channel, is_detailed_balanced, balance_deviation
from .classical import stationary, markov_reverse
from .thermal import (BathSpec, CouplingSpec, thermostated_channel, thermal_state,
                      weak_coupling_residual)
from .driven import (enumerate_trajectories, sample_trajectories, endpoint_occupations,
                     mr_table, mr_summary, jarzynski_check, jarzynski_estimate)
from .accumulators import TrajectoryHistogram
from .selftest import CHECKS, run_selftest


__all__ = ['cmd_dispatch', 'main', 'build_parser']

logger = logging.getLogger(__name__)


class _Parser(argparse.ArgumentParser):

    def error(self, message):
        raise UsageError(f'{self.prog}: {message}\n{self.format_usage()}')


class _Run():
    '''
    Collects what goes into the report of one command.
    '''

    def __init__(self, command, seed):
        self.command = command
        self.seed = seed
        self.inputs = {}
        self.metrics = {}
        self.passes = {}
        self.result = None
        self.rows = None
        self.message = None

    def load(self, name, path):
        with open(path, 'rb') as f:
            raw = f.read()
        self.inputs[name] = hashlib.sha256(raw).hexdigest()
        try:
            return json.loads(raw.decode('utf-8'))
        except ValueError as e:
            raise InvalidInput(f'{path}: {e}') from e


def _finite(x):
    if isinstance(x, dict):
        return {k: _finite(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_finite(v) for v in x]
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return x if math.isfinite(x) else None
    return x


def _report(run, args, wall_time, error=None):
    out = {'command': run.command,
           'inputs': run.inputs,
           'metrics': run.metrics,
           'pass': run.passes,
           'seed': run.seed,
           'error': error}
    if run.message is not None:
        out['message'] = run.message
    if not args.no_meta:
        out['wall_time'] = wall_time
        out['version'] = __version__
    if run.result is not None:
        out['result'] = run.result
    return _finite(out)


def _write(text, args):
    if args.out is None:
        sys.stdout.write(text)
    else:
        with open(args.out, 'w', encoding='utf-8', newline='') as f:
            f.write(text)


def _emit_csv(run, args):
    s = io.StringIO()
    if run.rows is not None:
        ser.write_csv(run.rows, s)
    else:
        ser.write_csv([{'metric': k, 'value': v} for k, v in run.metrics.items()], s)
    _write(s.getvalue(), args)


# --- commands ---


def _channel_and_pi(run, args):
    ch = ser.decode_channel(run.load('channel', args.channel))
    run.metrics['pi_from_fixed_point'] = args.pi is None
    if args.pi is None:
        logger.info('no --pi given, using the fixed point of the channel')
        pi = fixed_point(ch, gap_tol=args.tol_gap)
        run.metrics['fixed_point_residual'] = float(np.linalg.norm(ch(pi.mat) - pi.mat))
    else:
        pi = ser.decode_density(run.load('pi', args.pi))
    return ch, pi


def cmd_reverse(run, args):
    ch, pi = _channel_and_pi(run, args)
    rev = reverse_channel(ch, pi, balance_tol=args.tol_balance, unbalanced=args.unbalanced,
                          rank_tol=args.tol_rank)
    tcp = check_tcp(rev, tol=args.tol_tcp)
    run.metrics['balance_deviation'] = balance_deviation(ch, pi)
    run.metrics['tcp_violation'] = tcp.max_violation
    run.passes['trace_preserving'] = tcp.is_tcp
    run.result = ser.encode_channel(rev)


def cmd_fixpoint(run, args):
    ch = ser.decode_channel(run.load('channel', args.channel))
    pi = fixed_point(ch, gap_tol=args.tol_gap)
    run.metrics['residual'] = float(np.linalg.norm(ch(pi.mat) - pi.mat))
    run.metrics['min_eigenvalue'] = float(np.linalg.eigvalsh(pi.mat)[0])
    run.passes['positive_definite'] = run.metrics['min_eigenvalue'] > args.tol_rank
    run.result = ser.encode_density(pi)


def cmd_check_db(run, args):
    ch, pi = _channel_and_pi(run, args)
    rep = is_detailed_balanced(ch, pi, tol=args.tol_balance)
    run.metrics['balance_deviation'] = balance_deviation(ch, pi)
    run.metrics['reversal_distance'] = rep.deviation
    run.passes['balanced'] = rep.balanced
    run.passes['detailed_balanced'] = rep.detailed_balanced


def cmd_markov_reverse(run, args):
    m = ser.decode_stochastic(run.load('matrix', args.matrix), row_stochastic=args.row_stochastic)
    run.metrics['pi_from_fixed_point'] = args.pi is None
    if args.pi is None:
        logger.info('no --pi given, using the stationary distribution')
        p = stationary(m, gap_tol=args.tol_gap)
    else:
        p = ser.decode_prob_vector(run.load('pi', args.pi))
    mr = markov_reverse(m, p, balance_tol=args.tol_balance)
    run.metrics['involution_residual'] = float(np.max(np.abs(markov_reverse(mr, p) - m)))
    flow = m * p[np.newaxis, :]
    run.metrics['flow_asymmetry'] = float(np.max(np.abs(flow - flow.T)))
    run.passes['involution'] = run.metrics['involution_residual'] <= args.tol_balance
    out = mr.T if args.row_stochastic else mr
    run.result = {'matrix': ser.encode_real(out), 'pi': ser.encode_real(p)}


def cmd_thermal_channel(run, args):
    h_sys = ser.decode_matrix(run.load('hsys', args.hsys))
    bath = BathSpec(ser.decode_matrix(run.load('hbath', args.hbath)), args.beta)
    cpl = CouplingSpec(ser.decode_matrix(run.load('hint', args.hint)), args.eps)
    ch = thermostated_channel(h_sys, bath, cpl, args.time)
    pi, _ = thermal_state(h_sys, args.beta)
    tcp = check_tcp(ch, tol=args.tol_tcp)
    run.metrics['tcp_violation'] = tcp.max_violation
    run.metrics['balance_deviation'] = balance_deviation(ch, pi)
    run.metrics['weak_coupling_residual'] = weak_coupling_residual(ch, pi)
    run.passes['trace_preserving'] = tcp.is_tcp
    run.result = ser.encode_channel(ch)


def _protocol(run, args):
    return ser.decode_protocol(run.load('protocol', args.protocol), epsilon=args.eps)


def cmd_run_protocol(run, args):
    p = _protocol(run, args)
    occ = endpoint_occupations(p, 'initial')[0]
    trajs = enumerate_trajectories(p, occ, cap=args.cap, p_floor=args.tol_pfloor)
    run.metrics['n_trajectories'] = len(trajs)
    run.metrics['total_probability'] = math.fsum(pr for _, pr in trajs)
    rows = [{'e0': tr.e0, 'alphas': list(tr.alphas), 'e_tau': tr.e_tau, 'Q': tr.q_total,
             'p': pr} for tr, pr in trajs]
    if args.n is not None:
        hist = TrajectoryHistogram()
        for tr in sample_trajectories(p, occ, args.n, run.seed, workers=args.workers):
            hist += tr
        for row in rows:
            row['frequency'] = hist.frequency((row['e0'], tuple(row['alphas']), row['e_tau']))
        passed, cells = hist.band_check({tr.key: pr for tr, pr in trajs})
        run.metrics['n_samples'] = hist.n
        run.metrics['fraction_within_3sigma'] = passed / cells
        run.passes['frequencies'] = passed / cells >= 0.95
    run.passes['normalized'] = abs(run.metrics['total_probability'] - 1) <= 1e-9
    run.rows = rows
    run.result = rows


def cmd_verify_mr(run, args):
    raw = run.load('protocol', args.protocol)
    if args.eps_sweep:
        protocols = [(e, ser.decode_protocol(raw, epsilon=e)) for e in args.eps_sweep]
    else:
        p = ser.decode_protocol(raw, epsilon=args.eps)
        protocols = [(p.epsilon, p)]
    rows, means = None, []
    for k, (eps, p) in enumerate(protocols):
        table = mr_table(p, reference=args.reference, cap=args.cap, p_floor=args.tol_pfloor)
        summary = mr_summary(table)
        for name, value in summary.items():
            run.metrics[f'eps[{k}].{name}'] = value
        run.metrics[f'eps[{k}].eps'] = eps
        means.append(summary['mean_residual'])
        if rows is None:
            rows = table
        if args.tol_mr is not None:
            run.passes[f'eps[{k}].residual'] = summary['max_residual'] <= args.tol_mr
    for k in range(1, len(means)):
        if means[k] > 0:
            run.metrics[f'mean_residual_ratio[{k}]'] = means[k - 1] / means[k]
    run.rows = rows
    run.result = rows


def cmd_jarzynski(run, args):
    p = _protocol(run, args)
    if args.n is None:
        res = jarzynski_check(p, cap=args.cap, p_floor=args.tol_pfloor)
        run.metrics.update(lhs=res.lhs, rhs=res.rhs, rel_err=res.rel_err)
        run.passes['jarzynski'] = res.rel_err <= args.tol_jarzynski
    else:
        est = jarzynski_estimate(p, args.n, run.seed, workers=args.workers)
        run.metrics.update(estimate=est.estimate, stderr=est.stderr, rhs=est.rhs, n=est.n)
        run.passes['within_3_stderr'] = abs(est.estimate - est.rhs) <= 3 * est.stderr


def cmd_selftest(run, args):
    metrics, passes = run_selftest(seed=run.seed, workers=args.workers,
                                   n_samples=args.n or 100000, only=args.only)
    run.metrics.update(metrics)
    run.passes.update(passes)


# --- parser ---


def _floats(s):
    try:
        return [float(x) for x in s.split(',') if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f'not a comma separated list of numbers: {s!r}')


def _add_tols(p, *names):
    defaults = {'balance': tols.BALANCE_TOL, 'rank': tols.RANK_TOL, 'gap': tols.GAP_TOL,
                'tcp': tols.TCP_TOL, 'pfloor': tols.P_FLOOR, 'jarzynski': 1e-9, 'mr': None}
    for name in names:
        p.add_argument(f'--tol-{name}', type=float, default=defaults[name], metavar='TOL',
                       help=f'default: {defaults[name]}')


def build_parser():
    common = _Parser(add_help=False)
    common.add_argument('--format', choices=['json', 'csv'], default='json')
    common.add_argument('--out', default=None, help='write the report here, not to stdout')
    common.add_argument('--no-meta', action='store_true',
                        help='omit wall time and version for byte identical reports')
    common.add_argument('--seed', type=int, default=None,
                        help='random seed, falls back to $QREV_SEED, then 0')
    common.add_argument('--workers', type=int, default=0, help='sampling processes')
    common.add_argument('-v', '--verbose', action='count', default=0)

    parser = _Parser(prog='qrev', description='Time reversal of quantum operations.')
    parser.add_argument('--version', action='version', version=f'qrev {__version__}')
    sub = parser.add_subparsers(dest='command', metavar='COMMAND', parser_class=_Parser)
    sub.required = True

    def command(name, func, help):
        p = sub.add_parser(name, parents=[common], help=help, description=help)
        p.set_defaults(func=func)
        return p

    p = command('reverse', cmd_reverse, 'reverse a channel with respect to pi')
    p.add_argument('--channel', required=True)
    p.add_argument('--pi', default=None, help='defaults to the fixed point of the channel '
                   '(reported as the metric pi_from_fixed_point)')
    p.add_argument('--unbalanced', choices=['raise', 'warn', 'ignore'], default='raise')
    _add_tols(p, 'balance', 'rank', 'gap', 'tcp')

    p = command('fixpoint', cmd_fixpoint, 'fixed point of a channel')
    p.add_argument('--channel', required=True)
    _add_tols(p, 'gap', 'rank')

    p = command('check-db', cmd_check_db, 'check balance and detailed balance')
    p.add_argument('--channel', required=True)
    p.add_argument('--pi', default=None, help='defaults to the fixed point of the channel '
                   '(reported as the metric pi_from_fixed_point)')
    _add_tols(p, 'balance', 'gap')

    p = command('markov-reverse', cmd_markov_reverse, 'reverse a classical Markov chain')
    p.add_argument('--matrix', required=True, help='column stochastic, M[j][i] = P(i -> j)')
    p.add_argument('--row-stochastic', action='store_true',
                   help='the matrix (and the output) use the row convention M[i][j]')
    p.add_argument('--pi', default=None, help='defaults to the stationary distribution '
                   '(reported as the metric pi_from_fixed_point)')
    _add_tols(p, 'balance', 'gap')

    p = command('thermal-channel', cmd_thermal_channel, 'build a thermostated channel')
    p.add_argument('--hsys', required=True)
    p.add_argument('--hbath', required=True)
    p.add_argument('--hint', required=True)
    p.add_argument('--eps', type=float, required=True)
    p.add_argument('--beta', type=float, required=True)
    p.add_argument('--time', type=float, required=True)
    _add_tols(p, 'tcp')

    p = command('run-protocol', cmd_run_protocol, 'enumerate (and sample) trajectories')
    _protocol_args(p, samples=True)

    p = command('verify-mr', cmd_verify_mr, 'microscopic reversibility for every trajectory')
    _protocol_args(p)
    p.add_argument('--eps-sweep', type=_floats, default=None, metavar='EPS,EPS,...',
                   help='rebuild the protocol at every coupling and compare the residuals')
    p.add_argument('--reference', choices=['thermal', 'fixed_point'], default='thermal')
    _add_tols(p, 'mr')

    p = command('jarzynski', cmd_jarzynski, 'check the Jarzynski identity')
    _protocol_args(p, samples=True)
    _add_tols(p, 'jarzynski')

    p = command('selftest', cmd_selftest, 'run the acceptance suite')
    p.add_argument('--n', type=int, default=None, help='samples of the sampler check')
    p.add_argument('--only', action='append', choices=[name for name, _ in CHECKS],
                   default=None)
    return parser


def _protocol_args(p, samples=False):
    p.add_argument('--protocol', required=True)
    p.add_argument('--eps', type=float, default=None, help='rebuild the steps at this coupling')
    p.add_argument('--cap', type=int, default=tols.ENUM_CAP,
                   help='largest number of trajectories to enumerate')
    if samples:
        p.add_argument('--n', type=int, default=None,
                       help='sample this many trajectories instead of enumerating only')
    _add_tols(p, 'pfloor')


def _seed(args):
    if args.seed is not None:
        return args.seed
    env = os.environ.get('QREV_SEED')
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise UsageError(f'QREV_SEED={env!r} is not an integer.')


def _setup_logging(verbose):
    level = {0: logging.WARNING, 1: logging.INFO}.get(verbose, logging.DEBUG)
    logging.basicConfig(level=level, stream=sys.stderr,
                        format='%(asctime)s %(name)s %(levelname)s: %(message)s')


def cmd_dispatch(argv):
    '''
    Runs the command line `argv` (without the program name) and writes the
    report.

    returns the exit code.
    '''
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        seed = _seed(args)
    except UsageError as e:
        sys.stderr.write(str(e) + '\n')
        report = {'command': argv[0] if argv else None, 'error': e.code, 'message': str(e)}
        sys.stdout.write(ser.dumps(report))
        return 1
    _setup_logging(args.verbose)
    run = _Run(args.command, seed)
    start = time.perf_counter()
    error = None
    try:
        args.func(run, args)
    except QrevError as e:
        error, run.message = e.code, str(e)
    except (KeyError, TypeError, ValueError) as e:
        error, run.message = InvalidInput.code, f'malformed input: {e!r}'
    except OSError as e:
        error, run.message = 'io_error', str(e)
    if error is not None:
        logger.error('%s: %s', error, run.message)
    wall_time = time.perf_counter() - start
    if error is None and args.format == 'csv':
        _emit_csv(run, args)
    else:
        _write(ser.dumps(_report(run, args, wall_time, error=error)), args)
    if error is not None:
        return 1
    return 0 if all(run.passes.values()) else 2


def main():
    sys.exit(cmd_dispatch(sys.argv[1:]))


if __name__ == '__main__':
    main()
