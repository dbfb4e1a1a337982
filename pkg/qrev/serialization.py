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
JSON codecs for matrices, states, channels and protocols, and a CSV writer
for trajectory tables.

Complex numbers are [re, im] pairs, matrices are
{"rows": n, "cols": m, "data": [[re, im], ...]} in row-major order. Plain
nested lists of real numbers are accepted as matrices on input. Floats are
written with their shortest round trip representation, so decoding an encoded
value reproduces it bit for bit.
'''

import csv
import json
import numpy as np
from .matcore import as_matrix
from .channel import KrausChannel, DensityMatrix
from .thermal import HeatLabeledChannel
from .driven import Protocol, ThermalSetup
from .errors import DimensionMismatch, NonFinite


__all__ = ['encode_matrix', 'decode_matrix', 'encode_density', 'decode_density',
           'encode_channel', 'decode_channel', 'encode_real', 'decode_stochastic',
           'decode_prob_vector', 'encode_protocol', 'decode_protocol', 'dumps', 'load',
           'dump', 'write_csv']


def encode_matrix(m):
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2:
        raise DimensionMismatch(f'cannot encode an array of shape {m.shape} as a matrix.')
    return {'rows': m.shape[0], 'cols': m.shape[1],
            'data': [[float(z.real), float(z.imag)] for z in m.reshape(-1)]}


def _complex(entry):
    if isinstance(entry, (list, tuple)):
        if len(entry) != 2:
            raise DimensionMismatch(f'complex entry {entry!r} is not an [re, im] pair.')
        return complex(float(entry[0]), float(entry[1]))
    return complex(float(entry), 0.0)


def decode_matrix(obj):
    if isinstance(obj, dict):
        rows, cols, data = int(obj['rows']), int(obj['cols']), obj['data']
        if len(data) != rows * cols:
            raise DimensionMismatch(f'{len(data)} entries for a {rows}x{cols} matrix.')
        m = np.array([_complex(z) for z in data], dtype=complex).reshape(rows, cols)
    else:
        m = np.array(obj, dtype=complex)
    if not np.all(np.isfinite(m)):
        raise NonFinite('matrix has NaN or Inf entries.')
    return as_matrix(m, square=False)


def encode_density(rho):
    return encode_matrix(np.asarray(rho))


def decode_density(obj):
    return DensityMatrix(decode_matrix(obj))


def encode_channel(ch):
    '''
    {"dim", "kraus", "heat"?}; heat labeled thermostated channels add
    "bath_index", "bath_energies", "beta" and "epsilon".
    '''
    out = {'dim': ch.dim, 'kraus': [encode_matrix(a) for a in ch.kraus]}
    if ch.heat is not None:
        out['heat'] = list(ch.heat)
    if isinstance(ch, HeatLabeledChannel):
        out['bath_index'] = [list(ij) for ij in ch.bath_index]
        out['bath_energies'] = list(ch.bath_energies)
        out['beta'] = ch.beta
        if ch.epsilon is not None:
            out['epsilon'] = ch.epsilon
    return out


def decode_channel(obj):
    kraus = [decode_matrix(a) for a in obj['kraus']]
    if 'dim' in obj and kraus and kraus[0].shape[0] != int(obj['dim']):
        raise DimensionMismatch(f'channel of dimension {obj["dim"]} with Kraus operators of '
                                f'shape {kraus[0].shape}.')
    if 'bath_index' in obj:
        return HeatLabeledChannel(kraus, obj['heat'], obj['bath_index'], obj['bath_energies'],
                                  obj['beta'], epsilon=obj.get('epsilon'))
    return KrausChannel(kraus, heat=obj.get('heat'))


def encode_real(x):
    return np.asarray(x, dtype=float).tolist()


def decode_stochastic(obj, row_stochastic=False):
    '''
    Real matrix M[j][i] = probability of i -> j. `row_stochastic` transposes
    input written in the row convention M[i][j].
    '''
    m = np.array(obj, dtype=float)
    return m.T.copy() if row_stochastic else m


def decode_prob_vector(obj):
    return np.array(obj, dtype=float)


def encode_protocol(p):
    out = {'beta': p.beta,
           'steps': [encode_channel(s) for s in p.steps],
           'hsys': [encode_matrix(h) for h in p.h_sys_list],
           'init_basis': encode_matrix(p.init_basis),
           'final_basis': encode_matrix(p.final_basis)}
    if p.thermal is not None:
        th = p.thermal
        out['thermal'] = {'hbath': encode_matrix(th.h_bath), 'hint': encode_matrix(th.h_int),
                          'eps': th.epsilon, 'time': th.time}
    return out


def decode_protocol(obj, epsilon=None):
    '''
    A protocol from its JSON form. With a "thermal" block and no "steps", or
    with `epsilon` given, the steps are rebuilt from the bath and coupling.
    '''
    beta = float(obj['beta'])
    hs = [decode_matrix(h) for h in obj['hsys']]
    init_basis = decode_matrix(obj['init_basis']) if 'init_basis' in obj else None
    final_basis = decode_matrix(obj['final_basis']) if 'final_basis' in obj else None
    th = obj.get('thermal')
    if th is not None and ('steps' not in obj or epsilon is not None):
        eps = float(th['eps']) if epsilon is None else float(epsilon)
        return Protocol.thermostated(hs, decode_matrix(th['hbath']), decode_matrix(th['hint']),
                                     eps, beta, float(th['time']), init_basis=init_basis,
                                     final_basis=final_basis)
    if epsilon is not None:
        raise ValueError('the protocol has no "thermal" block to rebuild its steps from.')
    steps = [decode_channel(s) for s in obj['steps']]
    return Protocol(steps, hs, beta, init_basis=init_basis, final_basis=final_basis,
                    thermal=None if th is None else _thermal_setup(th))


def _thermal_setup(th):
    return ThermalSetup(decode_matrix(th['hbath']), decode_matrix(th['hint']),
                        float(th['eps']), float(th['time']))


def dumps(obj):
    return json.dumps(obj, indent=2, allow_nan=False) + '\n'


def dump(obj, path):
    with open(path, 'w', encoding='utf-8') as f:
        f.write(dumps(obj))


def load(path):
    with open(path, encoding='utf-8') as f:
        return json.load(f)


def write_csv(rows, stream, fieldnames=None):
    '''
    One line per row dict. List valued fields are joined with '-', `None`
    becomes an empty field.
    '''
    rows = list(rows)
    if fieldnames is None:
        fieldnames = list(rows[0]) if rows else []
    w = csv.DictWriter(stream, fieldnames=fieldnames, extrasaction='ignore', lineterminator='\n')
    w.writeheader()
    for row in rows:
        w.writerow({k: _csv_value(v) for k, v in row.items()})


def _csv_value(v):
    if v is None:
        return ''
    if isinstance(v, (list, tuple)):
        return '-'.join(str(x) for x in v)
    if isinstance(v, float):
        return repr(v)
    return v
