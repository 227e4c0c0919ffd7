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
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from typing import Iterable, Set, Tuple

import numpy as np
from scipy import sparse
from scipy.sparse import csgraph

from .definitions import FinalConfiguration, Horizon, NodeId, OutreachDistribution, ReachFrequency, SocialGraph
from .errors import EnumerationLimitError, InvalidParameterError
from .util import REALIZATION_BLOCK, StreamTag, block_rng, realization_blocks

LOGGER = logging.getLogger(__name__)

ENUMERATION_EDGE_LIMIT = 20
_ENUMERATION_CHUNK = 1 << 14


def check_probability(p: float) -> float:
    if not 0.0 <= p <= 1.0:
        raise InvalidParameterError(f'edge probability must lie in [0, 1], got {p}')
    return float(p)


def _rounds(horizon: Horizon) -> float:
    if horizon is None:
        return math.inf
    if horizon < 0:
        raise InvalidParameterError(f'horizon must be >= 0, got {horizon}')
    return horizon


class LiveEdgeSample:
    """
    A batch of live-edge worlds: every edge is independently live with probability p.

    Reachability over live edges within h hops has the law of an independent
    cascade bounded to h rounds, so one batch answers cascades for any seedset.
    """

    def __init__(self, g: SocialGraph, p: float, realizations: int, master_seed: int,
                 tag: StreamTag = StreamTag.OUTREACH, key: Tuple[int, ...] = (),
                 block_size: int = REALIZATION_BLOCK, workers: int = 1):
        if realizations < 1:
            raise InvalidParameterError(f'realization count must be >= 1, got {realizations}')
        self.graph = g
        self.p = check_probability(p)
        self.realization_count = int(realizations)
        self.block_size = block_size
        self.workers = max(1, int(workers))
        self.live = np.empty((self.realization_count, g.edge_count), dtype=bool)

        def draw(block: Tuple[int, int, int]):
            b, start, stop = block
            rng = block_rng(master_seed, tag, *key, block=b)
            self.live[start:stop] = rng.random((stop - start, g.edge_count)) < self.p

        self._map(draw, realization_blocks(self.realization_count, block_size))

    @classmethod
    def from_live(cls, g: SocialGraph, p: float, live: np.ndarray) -> 'LiveEdgeSample':
        """wraps an explicit (worlds, edge_count) live mask"""
        worlds = cls.__new__(cls)
        worlds.graph, worlds.p = g, check_probability(p)
        worlds.realization_count = len(live)
        worlds.block_size, worlds.workers = REALIZATION_BLOCK, 1
        worlds.live = np.asarray(live, dtype=bool).reshape(len(live), g.edge_count)
        return worlds

    def _map(self, fn, blocks):
        blocks = list(blocks)
        if self.workers > 1 and len(blocks) > 1:
            with ThreadPoolExecutor(max_workers=self.workers) as executor:
                list(executor.map(fn, blocks))
        else:
            for block in blocks:
                fn(block)

    def spread(self, seeds: Iterable[NodeId], horizon: Horizon = None) -> np.ndarray:
        """
        Activated nodes of every world.

        :param seeds: seed node ids
        :param horizon: number of rounds, None for quiescence

        :returns: boolean array of shape (realizations, node_count)
        """
        g = self.graph
        seeds = g.check_seeds(seeds)
        limit = _rounds(horizon)
        active = np.zeros((self.realization_count, g.node_count), dtype=bool)
        active[:, seeds] = True
        if g.edge_count == 0 or seeds.size == 0 or limit == 0:
            return active

        tail, head, edge_index = g.arcs
        targets, starts = np.unique(head, return_index=True)

        def run(block: Tuple[int, int, int]):
            _, start, stop = block
            reached = active[start:stop]
            live = self.live[start:stop][:, edge_index]
            frontier = reached.copy()
            rounds = 0
            while rounds < limit and frontier.any():
                fired = frontier[:, tail] & live
                hit = np.zeros_like(reached)
                hit[:, targets] = np.logical_or.reduceat(fired, starts, axis=1)
                frontier = hit & ~reached
                reached |= frontier
                rounds += 1

        self._map(run, realization_blocks(self.realization_count, self.block_size))
        return active

    def components(self) -> Tuple[np.ndarray, np.ndarray]:
        """
        Connected components of every world over the live edges.

        :returns: tuple of labels with shape (realizations, node_count) and component sizes
        """
        g = self.graph
        n, r = g.node_count, self.realization_count
        world, edge = np.nonzero(self.live)
        rows = world * n + g.edges[edge, 0]
        cols = world * n + g.edges[edge, 1]
        stacked = sparse.coo_matrix((np.ones(len(rows), dtype=np.int8), (rows, cols)), shape=(r * n, r * n))
        _, labels = csgraph.connected_components(stacked.tocsr(), directed=False)
        sizes = np.bincount(labels)
        return labels.reshape(r, n), sizes


def independent_cascade(g: SocialGraph, seedset: Iterable[NodeId], p: float, horizon: Horizon,
                        rng_stream: np.random.Generator) -> Set[NodeId]:
    """
    Single independent cascade run.

    Every node activated in round t tries once, in round t+1, to activate each
    inactive neighbor with probability p.

    :param g: `SocialGraph`
    :param seedset: seed node ids
    :param p: activation probability of every edge
    :param horizon: maximum number of rounds, None or inf for quiescence
    :param rng_stream: `numpy.random.Generator`

    :returns: set of activated node ids, seeds included
    """
    p = check_probability(p)
    limit = _rounds(horizon)
    active = {int(v) for v in g.check_seeds(seedset)}
    frontier = deque(active)
    rounds = 0
    while frontier and rounds < limit:
        next_frontier = deque()
        for u in frontier:
            for v in g.adjacency[u]:
                if v not in active and rng_stream.random() < p:
                    active.add(v)
                    next_frontier.append(v)
        frontier = next_frontier
        rounds += 1
    return active


def final_configuration(g: SocialGraph, activated: Iterable[NodeId]) -> FinalConfiguration:
    g.require_both_groups()
    nodes = g.check_seeds(activated)
    size_g1, size_g2 = g.group_sizes
    groups = g.group_array[nodes]
    return FinalConfiguration(np.count_nonzero(groups == 1) / size_g1, np.count_nonzero(groups == 2) / size_g2)


def configurations(g: SocialGraph, active: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """per-world outreach fractions of a (worlds, node_count) activation array"""
    size_g1, size_g2 = g.group_sizes
    x1 = np.count_nonzero(active[:, g.group_mask(1)], axis=1) / size_g1
    x2 = np.count_nonzero(active[:, g.group_mask(2)], axis=1) / size_g2
    return x1, x2


def sample_outreach(g: SocialGraph, seedset: Iterable[NodeId], p: float, R: int, master_seed: int,
                    workers: int = 1, block_size: int = REALIZATION_BLOCK) -> OutreachDistribution:
    """
    Monte-Carlo estimate of the joint outreach distribution, cascades run to quiescence.

    :param g: `SocialGraph`
    :param seedset: seed node ids
    :param p: activation probability
    :param R: number of realizations
    :param master_seed: experiment seed
    :param workers: threads used over realization blocks, does not change the result

    :returns: `OutreachDistribution` with one sample per realization
    """
    g.require_both_groups()
    worlds = LiveEdgeSample(g, p, R, master_seed, tag=StreamTag.OUTREACH, block_size=block_size, workers=workers)
    x1, x2 = configurations(g, worlds.spread(seedset))
    return OutreachDistribution.from_samples(x1, x2)


def seedset_reach(g: SocialGraph, seedset: Iterable[NodeId], p: float, horizon: Horizon, R: int,
                  master_seed: int, workers: int = 1, block_size: int = REALIZATION_BLOCK) -> ReachFrequency:
    """
    Number of realizations in which each node is reached from `seedset` within `horizon` rounds.

    :returns: `ReachFrequency`
    """
    worlds = LiveEdgeSample(g, p, R, master_seed, tag=StreamTag.REACH, block_size=block_size, workers=workers)
    counts = worlds.spread(seedset, horizon).sum(axis=0, dtype=np.int64)
    return ReachFrequency(counts=counts, realization_count=R)


def exact_outreach(g: SocialGraph, seedset: Iterable[NodeId], p: float) -> OutreachDistribution:
    """
    Exact joint outreach distribution by enumerating every live-edge world.

    :param g: `SocialGraph` with at most 20 edges
    :param seedset: seed node ids
    :param p: activation probability

    :returns: `OutreachDistribution` with one weighted row per distinct configuration
    """
    g.require_both_groups()
    p = check_probability(p)
    seeds = g.check_seeds(seedset)
    m = g.edge_count
    if m > ENUMERATION_EDGE_LIMIT:
        raise EnumerationLimitError(f'{m} edges exceed the enumeration limit of {ENUMERATION_EDGE_LIMIT}')

    size_g1, size_g2 = g.group_sizes
    mass = np.zeros((size_g1 + 1) * (size_g2 + 1))
    world_count = 1 << m
    bits = np.arange(m, dtype=np.int64)
    for start in range(0, world_count, _ENUMERATION_CHUNK):
        ids = np.arange(start, min(start + _ENUMERATION_CHUNK, world_count), dtype=np.int64)
        worlds = LiveEdgeSample.from_live(g, p, ((ids[:, None] >> bits[None, :]) & 1).astype(bool))
        active = worlds.spread(seeds)
        c1 = np.count_nonzero(active[:, g.group_mask(1)], axis=1)
        c2 = np.count_nonzero(active[:, g.group_mask(2)], axis=1)
        live_count = worlds.live.sum(axis=1)
        weights = np.power(p, live_count) * np.power(1.0 - p, m - live_count)
        mass += np.bincount(c1 * (size_g2 + 1) + c2, weights=weights, minlength=len(mass))

    support = np.flatnonzero(mass > 0)
    weights = mass[support] / math.fsum(mass[support])
    c1, c2 = np.divmod(support, size_g2 + 1)
    return OutreachDistribution(x1=c1 / size_g1, x2=c2 / size_g2, weights=weights,
                                realization_count=world_count, exact=True)
