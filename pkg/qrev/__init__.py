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
The qrev package reverses quantum operations in time: the pi-dual reversal
of Kraus channels and superoperators, its classical Markov chain limit,
thermostated channels built from a system-bath dilation, and trajectory level
checks of microscopic reversibility and the Jarzynski identity for driven
protocols.
'''

__version__ = '0.1.0'

from .channel import (DensityMatrix, KrausChannel, SuperMatrix, super_matrix, apply,  # noqa
                      fixed_point, check_tcp, compose)
from .reversal import reverse_channel, reverse_super, reverse_generator  # noqa
from .reversal import is_detailed_balanced  # noqa
from .classical import stationary, markov_reverse, extract_markov, embed_markov  # noqa
from .thermal import (BathSpec, CouplingSpec, thermal_state, thermostated_channel,  # noqa
                      weak_coupling_residual)
from .driven import (Protocol, Trajectory, reverse_protocol, mr_check, crooks_check,  # noqa
                     enumerate_trajectories, sample_trajectories, jarzynski_check)
from . import accumulators, pipeline  # noqa
from . import errors  # noqa


__all__ = ['DensityMatrix', 'KrausChannel', 'SuperMatrix', 'super_matrix', 'apply',
           'fixed_point', 'check_tcp', 'compose']
__all__ += ['reverse_channel', 'reverse_super', 'reverse_generator', 'is_detailed_balanced']
__all__ += ['stationary', 'markov_reverse', 'extract_markov', 'embed_markov']
__all__ += ['BathSpec', 'CouplingSpec', 'thermal_state', 'thermostated_channel',
            'weak_coupling_residual']
__all__ += ['Protocol', 'Trajectory', 'reverse_protocol', 'mr_check', 'crooks_check',
            'enumerate_trajectories', 'sample_trajectories', 'jarzynski_check']
