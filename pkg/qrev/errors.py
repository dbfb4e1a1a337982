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
Exceptions raised by qrev. Every exception carries a stable `code`, which the
command line front end copies into its reports.
'''


__all__ = ['QrevError', 'NotHermitian', 'NotSquare', 'DimensionMismatch',
           'NonFinite', 'InvalidState', 'SingularOrIndefinite', 'NonUniqueFixedPoint',
           'NoPositiveFixedPoint', 'ZeroProbabilityBranch', 'NotBalanced',
           'NonUniqueStationary', 'NonPositiveStationary', 'ZeroProbabilityState',
           'BasisNotOrthonormal', 'NotEigenbasis', 'IndexOutOfRange',
           'EnumerationTooLarge', 'UsageError', 'NotStochastic', 'InvalidInput']


class QrevError(Exception):
    '''
    Base class of all qrev errors.
    '''
    code = 'qrev_error'


class NotHermitian(QrevError, ValueError):
    code = 'not_hermitian'


class NotSquare(QrevError, ValueError):
    code = 'not_square'


class DimensionMismatch(QrevError, ValueError):
    code = 'dimension_mismatch'


class NonFinite(QrevError, ValueError):
    code = 'non_finite'


class InvalidState(QrevError, ValueError):
    code = 'invalid_state'


class SingularOrIndefinite(QrevError, ValueError):
    '''
    A matrix that must be positive definite is singular or indefinite.
    For a reference state this means the reversal is undefined.
    '''
    code = 'singular_or_indefinite'


class NonUniqueFixedPoint(QrevError, ValueError):
    code = 'non_unique_fixed_point'


class NoPositiveFixedPoint(QrevError, ValueError):
    code = 'no_positive_fixed_point'


class ZeroProbabilityBranch(QrevError, ValueError):
    code = 'zero_probability_branch'


class NotBalanced(QrevError, ValueError):
    code = 'not_balanced'


class NonUniqueStationary(QrevError, ValueError):
    code = 'non_unique_stationary'


class NonPositiveStationary(QrevError, ValueError):
    code = 'non_positive_stationary'


class ZeroProbabilityState(QrevError, ValueError):
    code = 'zero_probability_state'


class BasisNotOrthonormal(QrevError, ValueError):
    code = 'basis_not_orthonormal'


class NotEigenbasis(QrevError, ValueError):
    code = 'not_eigenbasis'


class IndexOutOfRange(QrevError, IndexError):
    code = 'index_out_of_range'


class EnumerationTooLarge(QrevError, ValueError):
    code = 'enumeration_too_large'


class UsageError(QrevError, ValueError):
    code = 'usage_error'


class NotStochastic(QrevError, ValueError):
    '''
    Negative entries or columns not summing to 1 (column stochastic convention
    M[j, i] = probability of i -> j), or a probability vector not summing to 1.
    '''
    code = 'not_stochastic'


class InvalidInput(QrevError, ValueError):
    '''
    An input file that is not valid JSON or lacks a required field.
    '''
    code = 'invalid_input'
