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
import importlib
import logging
from typing import Dict

from ..errors import UnknownAlgorithmError
from .base import SeedSelector
from .baselines import group_budgets, select_degree, select_fair_degree, select_fair_greedy, select_greedy
from .s3d import SeedsetScorer, evaluate_seedset, s3d_iterate, s3d_step, s3d_transition

LOGGER = logging.getLogger(__name__)

SELECTORS = {
    'bas_d': 'fairspread.seeding.baselines.DegreeSelector',
    'bas_g': 'fairspread.seeding.baselines.GreedySelector',
    'hrt_d': 'fairspread.seeding.baselines.FairDegreeSelector',
    'hrt_g': 'fairspread.seeding.baselines.FairGreedySelector',
    's3d_d': 'fairspread.seeding.s3d.S3DSelector',
    's3d_g': 'fairspread.seeding.s3d.S3DSelector',
}


def load_selector(selector_def: Dict) -> SeedSelector:
    """
    Instantiates the selector registered for `selector_def['algorithm']` (or its `name`).

    :param selector_def: selector definition, see `SeedSelector`

    :returns: `SeedSelector` instance
    """
    algorithm = selector_def.get('algorithm') or selector_def['name']
    if algorithm not in SELECTORS:
        raise UnknownAlgorithmError(f'unknown algorithm {algorithm!r}, expected one of {sorted(SELECTORS)}')
    module_name, class_name = SELECTORS[algorithm].rsplit('.', 1)
    LOGGER.debug(f'loading selector {class_name} from {module_name}')
    cls = getattr(importlib.import_module(module_name), class_name)
    return cls(selector_def)


__all__ = ['SELECTORS', 'SeedSelector', 'SeedsetScorer', 'evaluate_seedset', 'group_budgets', 'load_selector',
           's3d_iterate', 's3d_step', 's3d_transition', 'select_degree', 'select_fair_degree',
           'select_fair_greedy', 'select_greedy']
