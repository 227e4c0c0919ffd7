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
import logging
from typing import Dict, Optional

from ..definitions import DEFAULT_REALIZATIONS, Algorithm, S3DParams, Seedset, SocialGraph

LOGGER = logging.getLogger(__name__)


class SeedSelector:
    """Base class of seed selection strategies"""

    def __init__(self, selector_def: Dict):
        """
        Initialize object

        :param selector_def: selector definition with keys `name`, `algorithm` (defaults to `name`),
                             `realizations`, `master_seed`, optional `s3d` (`S3DParams`) and `workers`
        """
        self.name = selector_def['name']
        self.algorithm = Algorithm(selector_def.get('algorithm', self.name))
        self.realizations = int(selector_def.get('realizations', DEFAULT_REALIZATIONS))
        self.master_seed = int(selector_def.get('master_seed', 0))
        self.params: S3DParams = selector_def.get('s3d') or S3DParams(realizations=self.realizations,
                                                                     evaluation_realizations=self.realizations,
                                                                     master_seed=self.master_seed)
        self.workers = int(selector_def.get('workers', 1))

    @property
    def label_aware(self) -> bool:
        """whether the strategy reads group labels"""
        return False

    def select(self, g: SocialGraph, k: int, p: float, initial: Optional[Seedset] = None) -> Seedset:
        """
        Selects a seedset

        :param g: `SocialGraph`
        :param k: number of seeds
        :param p: activation probability
        :param initial: seedset to start from, used by iterative strategies

        :returns: `Seedset` of exactly `k` distinct nodes
        """

        raise NotImplementedError()

    def __repr__(self):
        return f'<{self.__class__.__name__}> {self.name}'
