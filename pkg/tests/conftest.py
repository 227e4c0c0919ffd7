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
import itertools
from pathlib import Path

import pytest

from fairspread.definitions import DiscreteDistribution2D, SocialGraph


def clique_edges(nodes):
    return list(itertools.combinations(nodes, 2))


def write_dataset(directory: Path, edges: str, attributes: str):
    edge_file, attribute_file = directory / 'graph.edges', directory / 'graph.attrs'
    edge_file.write_text(edges, encoding='utf-8')
    attribute_file.write_text(attributes, encoding='utf-8')
    return edge_file, attribute_file


@pytest.fixture
def path3() -> SocialGraph:
    """0 - 1 - 2 with nodes 0, 1 in group 1 and node 2 in group 2"""
    return SocialGraph.from_edges(3, [(0, 1), (1, 2)], [1, 1, 2])


@pytest.fixture
def triangle() -> SocialGraph:
    return SocialGraph.from_edges(3, [(0, 1), (0, 2), (1, 2)], [1, 1, 2])


@pytest.fixture
def two_cliques() -> SocialGraph:
    """disjoint 4-cliques, the first in group 1 and the second in group 2"""
    edges = clique_edges(range(4)) + clique_edges(range(4, 8))
    return SocialGraph.from_edges(8, edges, [1] * 4 + [2] * 4)


@pytest.fixture
def gamma_a() -> DiscreteDistribution2D:
    return DiscreteDistribution2D(points=[[0, 0], [1, 1]], weights=[0.5, 0.5])


@pytest.fixture
def gamma_b() -> DiscreteDistribution2D:
    return DiscreteDistribution2D(points=[[0, 0], [1, 1], [0, 1], [1, 0]], weights=[0.25] * 4)
