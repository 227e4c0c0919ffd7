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
from typing import Optional, Tuple

import numpy as np

from ..definitions import GROUPS, Seedset, SocialGraph
from ..diffusion import LiveEdgeSample
from ..errors import BudgetError, InvalidParameterError
from ..util import StreamTag
from .base import SeedSelector

LOGGER = logging.getLogger(__name__)


def _check_size(g: SocialGraph, k: int) -> None:
    if not 0 <= k <= g.node_count:
        raise InvalidParameterError(f'cannot select {k} seeds from {g.node_count} nodes')


def _by_degree(g: SocialGraph, candidates: np.ndarray) -> np.ndarray:
    """candidates ordered by descending degree, ties by ascending id"""
    return candidates[np.lexsort((candidates, -g.degrees[candidates]))]


def group_budgets(g: SocialGraph, k: int) -> Tuple[int, int]:
    """
    Splits k seeds proportionally to group sizes by largest remainder.

    The leftover seed goes to the group with the larger remainder; ties go to
    the larger group, then to group 1.

    :returns: tuple of budgets for group 1 and group 2, summing to k
    """
    _check_size(g, k)
    n = g.node_count
    sizes = g.group_sizes
    floors = [k * size // n for size in sizes]
    remainders = [k * size % n for size in sizes]
    budgets = list(floors)
    for _ in range(k - sum(floors)):
        order = sorted(range(len(GROUPS)), key=lambda i: (-remainders[i], -sizes[i], i))
        winner = order[0]
        budgets[winner] += 1
        remainders[winner] = -1
    for group, budget, size in zip(GROUPS, budgets, sizes):
        if budget > size:
            raise BudgetError(f'budget {budget} exceeds the {size} nodes of group {group}')
    return budgets[0], budgets[1]


def select_degree(g: SocialGraph, k: int) -> Seedset:
    _check_size(g, k)
    order = _by_degree(g, np.arange(g.node_count))
    return Seedset(nodes=tuple(order[:k]), target_size=k)


def select_fair_degree(g: SocialGraph, k: int) -> Seedset:
    """top-degree nodes of each group, with group-proportional budgets"""
    budgets = group_budgets(g, k)
    nodes = []
    for group, budget in zip(GROUPS, budgets):
        nodes.extend(_by_degree(g, g.members(group))[:budget])
    return Seedset(nodes=tuple(nodes), target_size=k)


def _greedy(g: SocialGraph, k: int, p: float, R: int, master_seed: int,
            budgets: Optional[Tuple[int, int]] = None, workers: int = 1) -> Seedset:
    _check_size(g, k)
    selected = []
    remaining = dict(zip(GROUPS, budgets)) if budgets is not None else None
    for round_ in range(k):
        # fresh worlds per round, shared by every candidate of the round
        worlds = LiveEdgeSample(g, p, R, master_seed, tag=StreamTag.GREEDY, key=(round_,), workers=workers)
        labels, sizes = worlds.components()
        covered = np.zeros(len(sizes), dtype=bool)
        if selected:
            covered[labels[:, selected].ravel()] = True
        reach = np.where(covered, 0, sizes)[labels].sum(axis=0)

        eligible = np.ones(g.node_count, dtype=bool)
        eligible[selected] = False
        if remaining is not None:
            for group, left in remaining.items():
                if left == 0:
                    eligible &= ~g.group_mask(group)
        if not eligible.any():
            raise BudgetError(f'no eligible candidate left after {len(selected)} seeds')

        v = int(np.argmax(np.where(eligible, reach, -1)))
        selected.append(v)
        if remaining is not None:
            remaining[g.group[v]] -= 1
        LOGGER.debug(f'greedy round {round_}: picked {v} with marginal reach {reach[v] / R:.3f}')
    return Seedset(nodes=tuple(selected), target_size=k)


def select_greedy(g: SocialGraph, k: int, p: float, R: int, master_seed: int, workers: int = 1) -> Seedset:
    """
    Greedy outreach maximization: adds the node with the largest estimated marginal gain in expected outreach.

    :param g: `SocialGraph`
    :param k: number of seeds
    :param p: activation probability
    :param R: live-edge worlds per round
    :param master_seed: experiment seed

    :returns: `Seedset` in selection order
    """
    return _greedy(g, k, p, R, master_seed, workers=workers)


def select_fair_greedy(g: SocialGraph, k: int, p: float, R: int, master_seed: int, workers: int = 1) -> Seedset:
    """greedy selection where a group drops out once its proportional budget is filled"""
    return _greedy(g, k, p, R, master_seed, budgets=group_budgets(g, k), workers=workers)


class DegreeSelector(SeedSelector):
    def select(self, g, k, p, initial=None):
        return select_degree(g, k)


class GreedySelector(SeedSelector):
    def select(self, g, k, p, initial=None):
        return select_greedy(g, k, p, self.realizations, self.master_seed, workers=self.workers)


class FairDegreeSelector(SeedSelector):
    @property
    def label_aware(self):
        return True

    def select(self, g, k, p, initial=None):
        return select_fair_degree(g, k)


class FairGreedySelector(SeedSelector):
    @property
    def label_aware(self):
        return True

    def select(self, g, k, p, initial=None):
        return select_fair_greedy(g, k, p, self.realizations, self.master_seed, workers=self.workers)
