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
import math
from itertools import combinations
from typing import Iterable, Tuple

import numpy as np

from ..definitions import GROUPS, DiversityReport, NodeId, SocialGraph
from ..diffusion import LiveEdgeSample
from ..errors import BudgetError, InvalidParameterError, InvalidSeedsetError
from ..graph import induced_subgraph
from ..util import StreamTag
from .fairness import columns
from .transport import Distribution

LOGGER = logging.getLogger(__name__)

EXHAUSTIVE_GROUP_LIMIT = 12


def expected_outreach_ratio(dist: Distribution) -> Tuple[float, float]:
    """expected fraction of each group reached"""
    x1, x2, w = columns(dist)
    return math.fsum(w * x1), math.fsum(w * x2)


def equity_gap(dist: Distribution) -> float:
    mean_g1, mean_g2 = expected_outreach_ratio(dist)
    return min(1.0, abs(mean_g1 - mean_g2))


def equity_score(dist: Distribution) -> float:
    return 1.0 - equity_gap(dist)


def maxmin_value(dist: Distribution) -> float:
    return min(expected_outreach_ratio(dist))


def equality_gap(g: SocialGraph, seedset: Iterable[NodeId]) -> float:
    """
    Difference between the fractions of each group placed in the seedset.
    """
    g.require_both_groups()
    seeds = g.check_seeds(seedset)
    if seeds.size == 0:
        raise InvalidSeedsetError('equality gap of an empty seedset')
    size_g1, size_g2 = g.group_sizes
    groups = g.group_array[seeds]
    return abs(np.count_nonzero(groups == 1) / size_g1 - np.count_nonzero(groups == 2) / size_g2)


def outreach_error_bars(dist: Distribution) -> Tuple[float, float]:
    """
    Twice the standard error of the per-realization |x1 - x2| and (x1 + x2) / 2.

    Exact distributions carry no sampling error.
    """
    if getattr(dist, 'exact', True):
        return 0.0, 0.0
    x1, x2, _ = columns(dist)
    n = len(x1)
    if n < 2:
        return 0.0, 0.0
    scale = 2.0 / math.sqrt(n)
    return (float(scale * np.std(np.abs(x1 - x2), ddof=1)),
            float(scale * np.std((x1 + x2) / 2, ddof=1)))


def diversity_budgets(g: SocialGraph, k: int) -> Tuple[int, int]:
    """k_i = ceil(k |C_i| / |V|) for both groups"""
    if k < 1:
        raise InvalidParameterError(f'seed budget must be >= 1, got {k}')
    budgets = tuple(-(-k * g.group_size(group) // g.node_count) for group in GROUPS)
    for group, budget in zip(GROUPS, budgets):
        if budget > g.group_size(group):
            raise BudgetError(f'budget {budget} exceeds the {g.group_size(group)} nodes of group {group}')
    return budgets


def internal_spread(g: SocialGraph, group: int, budget: int, p: float, R: int,
                    master_seed: int) -> Tuple[float, bool]:
    """
    Best expected outreach ratio group `group` reaches inside its own induced subgraph with `budget` seeds.

    Small groups are searched exhaustively, larger ones greedily.

    :returns: tuple of the ratio and whether it is a greedy approximation
    """
    sub, _ = induced_subgraph(g, g.members(group))
    size = sub.node_count
    worlds = LiveEdgeSample(sub, p, R, master_seed, tag=StreamTag.DIVERSITY, key=(group,))

    def ratio(seeds) -> float:
        return float(worlds.spread(seeds).sum(axis=1).mean()) / size

    if size <= EXHAUSTIVE_GROUP_LIMIT:
        best = max(ratio(seeds) for seeds in combinations(range(size), budget))
        return best, False

    from ..seeding.baselines import select_greedy
    seeds = select_greedy(sub, budget, p, R, master_seed)
    return ratio(seeds.nodes), True


def diversity_check(g: SocialGraph, dist: Distribution, k: int, p: float, R: int,
                    master_seed: int) -> DiversityReport:
    """
    Checks whether every group is reached at least as well as it reaches itself with a proportional budget.

    :param g: `SocialGraph`
    :param dist: outreach distribution of the evaluated seedset
    :param k: total seed budget
    :param p: activation probability
    :param R: realizations per internal spread estimate
    :param master_seed: experiment seed

    :returns: `DiversityReport`
    """
    g.require_both_groups()
    budgets = diversity_budgets(g, k)
    internal = [internal_spread(g, group, budget, p, R, master_seed) for group, budget in zip(GROUPS, budgets)]
    report = DiversityReport(budgets=budgets,
                             achieved=expected_outreach_ratio(dist),
                             baselines=tuple(value for value, _ in internal),
                             approximate=tuple(approx for _, approx in internal))
    LOGGER.debug(f'diversity budgets {report.budgets}, baselines {report.baselines}, achieved {report.achieved}')
    return report
