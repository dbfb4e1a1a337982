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
Default tolerances. Every function taking a tolerance accepts it as a keyword
argument; these are the values used when it is omitted.
Units: hbar = k_B = 1.
'''

# Hermiticity, relative to the norm of the input.
HERM_TOL = 1e-10
# Positive definiteness: smallest eigenvalue relative to the largest one.
RANK_TOL = 1e-12
# Density matrix invariants (hermiticity, positivity, unit trace).
STATE_TOL = 1e-10
# sum_a A_a^dagger A_a = I
TCP_TOL = 1e-9
# S pi = pi, required before reversing a channel.
BALANCE_TOL = 1e-8
# Unit eigenvalue multiplicity of channels and stochastic matrices.
GAP_TOL = 1e-8
# Orthonormal bases.
BASIS_TOL = 1e-10
# Entries of extracted Markov matrices in [-CLIP_TOL, 0) are set to 0.
CLIP_TOL = 1e-9
# Probability below which a Kraus branch or trajectory counts as unreachable.
P_FLOOR = 1e-15
# Largest number of trajectories `enumerate_trajectories` will visit.
ENUM_CAP = 10**7
# Balance tolerance of finite coupling protocols is BALANCE_EPS_FACTOR * eps.
BALANCE_EPS_FACTOR = 10.0
