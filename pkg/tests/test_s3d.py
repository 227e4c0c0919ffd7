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
import gc
import logging
import math
import weakref
from itertools import combinations, cycle

import numpy as np
import pytest

from fairspread.definitions import Algorithm, S3DParams, Seedset, SocialGraph, StepOutcome
from fairspread.diffusion import exact_outreach, sample_outreach
from fairspread.errors import InvalidParameterError
from fairspread.metrics import beta_fairness, efficiency, mutual_fairness
from fairspread.seeding import SeedsetScorer, evaluate_seedset, load_selector, s3d_iterate, s3d_step, \
    s3d_transition
from fairspread.seeding.s3d import _fit_to_size
from strategies import random_graph


@pytest.fixture
def barbell(two_cliques) -> SocialGraph:
    """the two cliques joined by the edge 3 - 4"""
    return SocialGraph.from_edges(8, two_cliques.edges.tolist() + [(3, 4)], two_cliques.group)


class AlternatingScorer:
    """scores the current seedset `current` and every candidate `candidate`"""

    def __init__(self, current: float, candidate: float):
        self._scores = cycle([current, candidate])

    def score(self, s):
        return next(self._scores)


def test_default_params():
    params = S3DParams()
    assert (params.exploit_to_explore, params.retention_prob, params.shallow_horizon) == (1.3, 0.95, 4)
    assert params.epsilon == pytest.approx(0.05)


@pytest.mark.parametrize('kwargs', [{'beta': 1.2}, {'retention_prob': -0.1}, {'iterations': 0},
                                    {'realizations': 0}, {'shallow_horizon': -1}])
def test_invalid_params(kwargs):
    with pytest.raises(InvalidParameterError):
        S3DParams(**kwargs)


def test_fit_to_size():
    g = SocialGraph.from_edges(6, [], [1, 2] * 3)
    rng = np.random.default_rng(0)
    nodes = _fit_to_size(g, [3, 3, 1], 3, rng)
    assert nodes[:2] == [3, 1]
    assert len(set(nodes)) == 3 and nodes[2] not in (1, 3)


def test_step_without_spread_keeps_seeds(two_cliques):
    params = S3DParams(realizations=20, evaluation_realizations=20)
    rng = np.random.default_rng(1)
    s = Seedset.of([0, 5])
    for _ in range(20):
        result, outcome = s3d_transition(two_cliques, s, 0.0, params, rng)
        assert outcome is StepOutcome.ACCEPTED
        assert result.key == s.key


def test_improving_candidate_is_always_accepted(two_cliques):
    params = S3DParams(realizations=20)
    rng = np.random.default_rng(2)
    for _ in range(50):
        _, outcome = s3d_transition(two_cliques, Seedset.of([0, 5]), 0.3, params, rng,
                                    scorer=AlternatingScorer(0.5, 0.9))
        assert outcome is StepOutcome.ACCEPTED


def test_restart_frequency(two_cliques):
    params = S3DParams(realizations=10)
    rng = np.random.default_rng(3)
    steps = 4000
    outcomes = [s3d_transition(two_cliques, Seedset.of([0, 5]), 0.0, params, rng,
                               scorer=AlternatingScorer(1.0, 0.5), max_horizon=1)[1] for _ in range(steps)]
    expected = params.epsilon * (1 - math.exp(-params.exploit_to_explore * 0.5))
    observed = outcomes.count(StepOutcome.RESTARTED) / steps
    assert abs(observed - expected) <= 4 * math.sqrt(expected * (1 - expected) / steps)
    assert outcomes.count(StepOutcome.ACCEPTED) / steps == pytest.approx(math.exp(-0.65), abs=0.04)


def test_restart_draws_fresh_seedset(two_cliques):
    params = S3DParams(realizations=10, retention_prob=0.0)
    rng = np.random.default_rng(4)
    for _ in range(20):
        result, outcome = s3d_transition(two_cliques, Seedset.of([0, 5]), 0.5, params, rng,
                                         scorer=AlternatingScorer(1.0, 0.0))
        if outcome is StepOutcome.RESTARTED:
            assert len(result.key) == 2 and result.target_size == 2


def test_reach_pool_exhausted(caplog):
    g = SocialGraph.from_edges(3, [(0, 1)], [1, 2, 2])
    params = S3DParams(realizations=10)
    with caplog.at_level(logging.WARNING, logger='fairspread.seeding.s3d'):
        result = s3d_step(g, Seedset.of([0, 1]), 1.0, params, np.random.default_rng(0))
    assert 'reach pool exhausted' in caplog.text
    assert len(result) == 2


def test_evaluate_matches_sampled_outreach(two_cliques):
    s = Seedset.of([1, 6])
    evaluation = evaluate_seedset(two_cliques, s, 0.3, 0.7, 400, master_seed=5)
    dist = sample_outreach(two_cliques, [1, 6], 0.3, 400, master_seed=5)
    assert evaluation == (beta_fairness(dist, 0.7), mutual_fairness(dist), efficiency(dist))


def test_scorer_memo(two_cliques):
    scorer = SeedsetScorer(two_cliques, 0.3, S3DParams(evaluation_realizations=100))
    first = scorer.evaluate(Seedset.of([0, 4]))
    assert scorer.evaluate(Seedset.of([4, 0])) is first
    assert scorer.score(Seedset.of([0, 4])) == first.beta_fairness
    assert len(scorer.visited) == 1


def test_scorer_draws_worlds_once(two_cliques):
    scorer = SeedsetScorer(two_cliques, 0.3, S3DParams(beta=0.6, evaluation_realizations=100, master_seed=2))
    assert scorer.worlds is scorer.worlds
    s = Seedset.of([0, 4])
    assert scorer.evaluate(s) == evaluate_seedset(two_cliques, s, 0.3, 0.6, 100, master_seed=2)


def test_finished_run_releases_graph():
    g = random_graph(np.random.default_rng(1), 12, 20)
    ref = weakref.ref(g)
    params = S3DParams(iterations=5, realizations=20, evaluation_realizations=50)
    s3d_iterate(g, Seedset.of([0, 1]), 0.3, params)
    evaluate_seedset(g, Seedset.of([2, 3]), 0.3, 0.5, 50, master_seed=0)
    del g
    gc.collect()
    assert ref() is None


@pytest.mark.parametrize('seed', range(5))
def test_iterate_never_degrades(seed):
    g = random_graph(np.random.default_rng(seed), 20, 30)
    params = S3DParams(iterations=30, realizations=50, evaluation_realizations=200, master_seed=seed)
    s0 = Seedset.of([0, 2, 3])
    scorer = SeedsetScorer(g, 0.2, params)
    best = s3d_iterate(g, s0, 0.2, params, scorer=scorer)
    assert len(best) == 3
    assert scorer.score(best) >= scorer.score(s0)
    assert best.key in scorer.visited


def test_iterate_deterministic(two_cliques):
    params = S3DParams(iterations=20, realizations=30, evaluation_realizations=100, master_seed=7)
    first = s3d_iterate(two_cliques, Seedset.of([0, 1]), 0.4, params)
    assert s3d_iterate(two_cliques, Seedset.of([0, 1]), 0.4, params) == first


def test_selector_starts_from_initializer(two_cliques):
    params = S3DParams(iterations=40, realizations=50, evaluation_realizations=200)
    selector = load_selector({'name': 's3d_d', 'realizations': 200, 's3d': params})
    initial = load_selector({'name': Algorithm.S3D_D.initializer.value}).select(two_cliques, 2, 0.4)
    chosen = selector.select(two_cliques, 2, 0.4)
    scorer = SeedsetScorer(two_cliques, 0.4, params)
    assert scorer.score(chosen) >= scorer.score(initial)
    assert chosen == selector.select(two_cliques, 2, 0.4, initial=initial)


def test_iterate_finds_cross_group_pair(barbell):
    params = S3DParams(iterations=100, realizations=100, evaluation_realizations=300, master_seed=1)
    best = s3d_iterate(barbell, Seedset.of([0, 1]), 0.5, params)
    assert sorted(barbell.group[v] for v in best) == [1, 2]


@pytest.mark.slow
def test_iterate_reaches_exhaustive_optimum(barbell):
    p = 0.5

    def exact_score(pair):
        return mutual_fairness(exact_outreach(barbell, pair, p))

    optimum = max(exact_score(pair) for pair in combinations(range(8), 2))
    hits = 0
    for seed in range(100):
        params = S3DParams(iterations=500, realizations=200, evaluation_realizations=500, master_seed=seed)
        best = s3d_iterate(barbell, Seedset.of([0, 1]), p, params)
        hits += exact_score(best.nodes) >= optimum - 0.02
    assert hits >= 95
