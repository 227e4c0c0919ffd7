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
from typing import Dict, Optional

from ..definitions import Seedset, SocialGraph
from ..util import to_json
from . import ResultFormat


def metric_report(metric_name: str, value: float, realization_count: int, rng_seed: int,
                  beta: Optional[float] = None) -> Dict:
    report = {'metric_name': metric_name, 'value': value, 'realization_count': realization_count,
              'rng_seed': rng_seed}
    if beta is not None:
        report['beta'] = beta
    return report


class SeedsetJson(ResultFormat):
    """selected seedset reported in external node ids"""

    def __init__(self, g: SocialGraph):
        self.graph = g

    def encode(self, s: Seedset, algorithm: str = None, p: float = None, beta: float = None,
               score_beta_fairness: float = None, master_seed: int = None) -> str:
        return to_json({
            'algorithm': algorithm,
            'k': s.target_size,
            'p': p,
            'beta': beta,
            'seed_ids': [self.graph.labels[v] for v in s.nodes],
            'score_beta_fairness': score_beta_fairness,
            'master_seed': master_seed,
        })

    def decode(self, data: Dict) -> Seedset:
        index = {label: i for i, label in enumerate(self.graph.labels)}
        return Seedset(nodes=tuple(index[label] for label in data['seed_ids']), target_size=data['k'])
