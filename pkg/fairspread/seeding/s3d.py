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
import threading
from functools import cached_property
from typing import Dict, FrozenSet, List, Optional, Tuple

import numpy as np

from ..definitions import OutreachDistribution, S3DParams, Seedset, SeedsetEvaluation, SocialGraph, \
    StepOutcome
from ..diffusion import LiveEdgeSample, configurations, seedset_reach
from ..errors import InvalidSeedsetError
from ..graph import diameter
from ..metrics.fairness import beta_fairness, efficiency, mutual_fairness
from ..util import StreamTag, block_rng
from .base import SeedSelector

LOGGER = logging.getLogger(__name__)


def evaluate_seedset(g: SocialGraph, s: Seedset, p: float, beta: float, R: int, master_seed: int,
                     worlds: Optional[LiveEdgeSample] = None) -> SeedsetEvaluation:
    """
    Samples the outreach of `s` once and scores it.

    The outreach equals `sample_outreach` with the same arguments.

    :param worlds: live-edge worlds drawn for (g, p, R, master_seed), drawn here when omitted

    :returns: `SeedsetEvaluation` (beta_fairness, mutual_fairness, efficiency)
    """
    g.require_both_groups()
    if worlds is None:
        worlds = LiveEdgeSample(g, p, R, master_seed, tag=StreamTag.OUTREACH)
    dist = OutreachDistribution.from_samples(*configurations(g, worlds.spread(s.nodes)))
    return SeedsetEvaluation(beta_fairness(dist, beta), mutual_fairness(dist), efficiency(dist))


class SeedsetScorer:
    """
    Memo of beta-fairness scores for one S3D run.

    Every seedset is scored on the same live-edge worlds, drawn once per scorer.
    Reads are lock-free; inserts are serialized.
    """

    def __init__(self, g: SocialGraph, p: float, params: S3DParams):
        self.graph = g
        self.p = p
        self.params = params
        self._memo: Dict[FrozenSet[int], SeedsetEvaluation] = {}
        self._lock = threading.Lock()

    @cached_property
    def worlds(self) -> LiveEdgeSample:
        return LiveEdgeSample(self.graph, self.p, self.params.evaluation_realizations, self.params.master_seed,
                              tag=StreamTag.OUTREACH)

    def evaluate(self, s: Seedset) -> SeedsetEvaluation:
        key = s.key
        evaluation = self._memo.get(key)
        if evaluation is None:
            evaluation = evaluate_seedset(self.graph, s, self.p, self.params.beta,
                                          self.params.evaluation_realizations, self.params.master_seed,
                                          worlds=self.worlds)
            with self._lock:
                evaluation = self._memo.setdefault(key, evaluation)
        return evaluation

    def score(self, s: Seedset) -> float:
        return self.evaluate(s).beta_fairness

    @property
    def visited(self) -> Dict[FrozenSet[int], SeedsetEvaluation]:
        return dict(self._memo)


def _fit_to_size(g: SocialGraph, nodes: List[int], size: int, rng: np.random.Generator) -> List[int]:
    """drops duplicates and tops up with uniformly random unused nodes"""
    nodes = list(dict.fromkeys(int(v) for v in nodes))[:size]
    if len(nodes) < size:
        unused = np.setdiff1d(np.arange(g.node_count), nodes)
        nodes.extend(int(v) for v in rng.choice(unused, size=size - len(nodes), replace=False))
    return nodes


def _stream_seed(rng: np.random.Generator) -> int:
    return int(rng.integers(0, 2 ** 63 - 1))


def _candidates(g: SocialGraph, seeds: List[int], p: float, params: S3DParams, horizon: int,
                rng: np.random.Generator) -> List[int]:
    """
    Draws len(seeds) distinct nodes, each with probability proportional to how often it is reached.

    After every draw the shallow reach of the drawn node is removed from the pool.
    """
    size = len(seeds)
    reach = seedset_reach(g, seeds, p, horizon, params.realizations, _stream_seed(rng)).counts.copy()
    chosen: List[int] = []
    while len(chosen) < size:
        pool = reach.astype(np.float64)
        pool[chosen] = 0
        total = pool.sum()
        if total > 0:
            v = int(rng.choice(g.node_count, p=pool / total))
        else:
            unused = np.setdiff1d(np.arange(g.node_count), chosen)
            v = int(rng.choice(unused))
            LOGGER.warning(f'reach pool exhausted after {len(chosen)} of {size} candidates, drew node {v} uniformly')
        chosen.append(v)
        if len(chosen) < size:
            shallow = seedset_reach(g, [v], p, params.shallow_horizon, params.realizations, _stream_seed(rng))
            reach = np.maximum(reach - shallow.counts, 0)
    return chosen


def s3d_transition(g: SocialGraph, s: Seedset, p: float, params: S3DParams, rng: np.random.Generator,
                   scorer: Optional[SeedsetScorer] = None,
                   max_horizon: Optional[int] = None) -> Tuple[Seedset, StepOutcome]:
    """
    One Metropolis step of the stochastic seedset descent.

    The current seedset is scored before the candidate.

    :param g: `SocialGraph`
    :param s: current seedset
    :param p: activation probability
    :param params: `S3DParams`
    :param rng: `numpy.random.Generator` driving the step
    :param scorer: memoized scorer, a fresh one when omitted
    :param max_horizon: reach horizon, the graph diameter when omitted

    :returns: tuple of the next seedset and the branch taken
    """
    size = s.target_size
    if size > g.node_count:
        raise InvalidSeedsetError(f'seedset of size {size} on a graph of {g.node_count} nodes')
    scorer = scorer or SeedsetScorer(g, p, params)
    horizon = diameter(g) if max_horizon is None else max_horizon

    current = Seedset(nodes=tuple(_fit_to_size(g, list(s.nodes), size, rng)), target_size=size)
    candidate = Seedset(nodes=tuple(_candidates(g, list(current.nodes), p, params, horizon, rng)),
                        target_size=size)

    energy = -scorer.score(current)
    candidate_energy = -scorer.score(candidate)
    accept_prob = min(1.0, max(0.0, math.exp(params.exploit_to_explore * (energy - candidate_energy))))

    if rng.random() < accept_prob:
        outcome, result = StepOutcome.ACCEPTED, candidate
    elif rng.random() < params.retention_prob:
        outcome, result = StepOutcome.RETAINED, current
    else:
        restart = rng.choice(g.node_count, size=size, replace=False)
        outcome, result = StepOutcome.RESTARTED, Seedset(nodes=tuple(restart), target_size=size)
    LOGGER.debug(f'S3D step {outcome.name}: energy {energy:.4f} -> {candidate_energy:.4f}, '
                 f'acceptance {accept_prob:.3f}')
    return result, outcome


def s3d_step(g: SocialGraph, s: Seedset, p: float, params: S3DParams, rng: np.random.Generator,
             scorer: Optional[SeedsetScorer] = None, max_horizon: Optional[int] = None) -> Seedset:
    return s3d_transition(g, s, p, params, rng, scorer=scorer, max_horizon=max_horizon)[0]


def s3d_iterate(g: SocialGraph, s0: Seedset, p: float, params: S3DParams,
                scorer: Optional[SeedsetScorer] = None) -> Seedset:
    """
    Runs `params.iterations` descent steps from `s0` and returns the best visited seedset.

    The best seedset only changes on a strictly higher memoized score, so the
    result never scores below `s0`.

    :param g: `SocialGraph`
    :param s0: initial seedset
    :param p: activation probability
    :param params: `S3DParams`
    :param scorer: memoized scorer, shared with the caller to read the visited seedsets

    :returns: `Seedset`
    """
    g.check_seeds(s0.nodes)
    scorer = scorer or SeedsetScorer(g, p, params)
    rng = block_rng(params.master_seed, StreamTag.S3D)
    horizon = diameter(g)

    best, best_score = s0, scorer.score(s0)
    current = s0
    outcomes = dict.fromkeys(StepOutcome, 0)
    for _ in range(params.iterations):
        current, outcome = s3d_transition(g, current, p, params, rng, scorer=scorer, max_horizon=horizon)
        outcomes[outcome] += 1
        score = scorer.score(current)
        if score > best_score:
            best, best_score = current, score
    LOGGER.info(f'S3D finished {params.iterations} steps: '
                f'{", ".join(f"{o.name.lower()} {c}" for o, c in outcomes.items())}; '
                f'{len(scorer.visited)} seedsets visited, best beta-fairness {best_score:.4f}')
    return best


class S3DSelector(SeedSelector):
    """S3D started from the seedset of the baseline named by the algorithm"""

    @property
    def label_aware(self):
        return True

    def select(self, g, k, p, initial=None):
        if initial is None:
            from . import load_selector
            baseline = self.algorithm.initializer
            initial = load_selector({'name': baseline.value, 'realizations': self.realizations,
                                     'master_seed': self.master_seed, 'workers': self.workers}).select(g, k, p)
        return s3d_iterate(g, initial, p, self.params)
