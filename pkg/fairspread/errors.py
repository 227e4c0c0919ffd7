# =================================================================
# Copyright (C) 2024 by the fairspread authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
# =================================================================


class FairSpreadError(Exception):
    """base exception for all fairspread errors"""

    default_msg = 'generic error (check logs)'
    exit_code = 1

    def __init__(self, msg: str = None, *args, user_msg: str = None):
        """
        constructor

        :param msg: message for the logs
        :param user_msg: message shown on the command line, defaults to `msg`
        """
        self.message = msg or self.default_msg
        self.user_msg = user_msg or self.message
        super().__init__(self.message, *args)


class ConfigError(FairSpreadError):
    """invalid experiment or runtime configuration"""
    default_msg = 'invalid configuration'
    exit_code = 2


class UnknownAlgorithmError(ConfigError):
    """algorithm name not present in the selector registry"""
    default_msg = 'unknown algorithm'


class GraphDataError(FairSpreadError):
    """edge or attribute file cannot be turned into a SocialGraph"""
    default_msg = 'invalid graph data'
    exit_code = 3


class EmptyGroupError(GraphDataError):
    """a group is empty so outreach fractions are undefined"""
    default_msg = 'graph has an empty group'


class InvalidParameterError(FairSpreadError):
    """numeric parameter outside of its admissible range"""
    default_msg = 'invalid parameter'


class BudgetError(InvalidParameterError):
    """a per-group seed budget exceeds the size of the group"""
    default_msg = 'group budget exceeds group size'


class InvalidSeedsetError(InvalidParameterError):
    """seedset contains unknown or duplicate node ids"""
    default_msg = 'invalid seedset'


class InvalidDistributionError(InvalidParameterError):
    """weights negative, not normalized or points outside the unit square"""
    default_msg = 'invalid distribution'


class EnumerationLimitError(InvalidParameterError):
    """brute force enumeration requested above its size bound"""
    default_msg = 'graph too large for enumeration'


class SolverError(FairSpreadError):
    """linear program did not terminate with an optimal solution"""
    default_msg = 'transport solver failed'
