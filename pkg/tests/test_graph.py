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
import math

import networkx as nx
import numpy as np
import pytest

from conftest import write_dataset
from fairspread.definitions import SocialGraph
from fairspread.errors import GraphDataError, InvalidParameterError
from fairspread.graph import census, diameter, generate_sbm, induced_subgraph, load_graph, save_graph, to_networkx
from strategies import random_graph


def test_load_triangle(tmp_path):
    g = load_graph(*write_dataset(tmp_path, 'a b\nb c\na c\n', 'a,1\nb,1\nc,2\n'))
    summary = census(g)
    assert g.node_count == 3
    assert g.edge_count == 3
    assert summary.cross_edge_fraction == pytest.approx(2 / 3)
    assert g.labels == ('a', 'b', 'c')


def test_load_drops_self_loops_and_duplicates(tmp_path, caplog):
    g = load_graph(*write_dataset(tmp_path, 'a a\na b\nb a\n# comment\n\nb c\n', 'node,group\na,1\nb,2\nc,2\n'))
    assert g.node_count == 3
    assert g.edge_count == 2
    assert 'dropped 1 self-loops and 1 duplicate edges' in caplog.text


def test_load_header_after_comments(tmp_path):
    g = load_graph(*write_dataset(tmp_path, 'a b\n', '# groups\n\nnode,group\na,1\nb,2\n'))
    assert g.group == (1, 2)


def test_load_rejects_header_after_data(tmp_path):
    with pytest.raises(GraphDataError, match='non-binary'):
        load_graph(*write_dataset(tmp_path, 'a b\n', 'a,1\nnode,group\nb,2\n'))


def test_load_accepts_comma_delimited_edges(tmp_path):
    g = load_graph(*write_dataset(tmp_path, 'a,b\n', 'a,1\nb,2\n'))
    assert g.edge_count == 1


def test_load_missing_attribute(tmp_path):
    with pytest.raises(GraphDataError, match='node zz'):
        load_graph(*write_dataset(tmp_path, 'a zz\n', 'a,1\n'))


def test_load_non_binary_group(tmp_path):
    with pytest.raises(GraphDataError, match='non-binary'):
        load_graph(*write_dataset(tmp_path, 'a b\n', 'a,1\nb,3\n'))


def test_load_malformed_edge_line(tmp_path):
    with pytest.raises(GraphDataError, match='two node tokens'):
        load_graph(*write_dataset(tmp_path, 'a b c\n', 'a,1\nb,2\nc,1\n'))


def test_graph_rejects_asymmetric_adjacency():
    with pytest.raises(GraphDataError):
        SocialGraph(adjacency=((1,), ()), group=(1, 2), labels=('a', 'b'))


def test_census_single_cross_edge():
    g = SocialGraph.from_edges(2, [(0, 1)], [1, 2])
    assert census(g).cross_edge_fraction == 1.0


def test_census_path_single_group():
    g = SocialGraph.from_edges(3, [(0, 1), (1, 2)], [1, 1, 1])
    summary = census(g)
    assert summary.diameter == 2
    assert summary.size_g1 == 3
    assert summary.size_g2 == 0
    assert summary.avg_degree == pytest.approx(4 / 3)


def test_census_disconnected_conventions():
    # path of 4 nodes (diameter 3) next to a star of 5 nodes (diameter 2)
    edges = [(0, 1), (1, 2), (2, 3)] + [(4, v) for v in range(5, 9)]
    g = SocialGraph.from_edges(9, edges, [1, 2] * 4 + [1])
    summary = census(g)
    assert summary.diameter == 3
    assert summary.largest_component_diameter == 2
    assert summary.component_count == 2
    assert summary.size_g1 + summary.size_g2 == summary.node_count


@pytest.mark.parametrize('seed', range(10))
def test_census_diameter_matches_all_pairs_bfs(seed):
    rng = np.random.default_rng(seed)
    g = random_graph(rng, 12, 14)
    lengths = dict(nx.all_pairs_shortest_path_length(to_networkx(g)))
    expected = max(d for row in lengths.values() for d in row.values())
    assert census(g).diameter == expected
    assert diameter(g) == expected


def test_cross_edge_fraction_invariant_under_relabeling():
    rng = np.random.default_rng(5)
    g = random_graph(rng, 15, 30)
    perm = rng.permutation(g.node_count)
    relabeled = SocialGraph.from_edges(g.node_count, [(perm[u], perm[v]) for u, v in g.edges],
                                       [g.group[int(np.flatnonzero(perm == i)[0])] for i in range(g.node_count)])
    assert census(relabeled).cross_edge_fraction == census(g).cross_edge_fraction
    assert census(relabeled).diameter == census(g).diameter


def test_save_load_round_trip(tmp_path):
    rng = np.random.default_rng(11)
    g = random_graph(rng, 20, 35)
    edge_file, attribute_file = tmp_path / 'g.edges', tmp_path / 'g.attrs'
    save_graph(g, edge_file, attribute_file)
    loaded = load_graph(edge_file, attribute_file)
    assert census(loaded) == census(g)
    assert nx.is_isomorphic(to_networkx(loaded), to_networkx(g))
    assert loaded.group == g.group


def test_sbm_cliques():
    g = generate_sbm(5, 4, 1.0, 0.0, rng_seed=1)
    assert g.edge_count == math.comb(5, 2) + math.comb(4, 2)
    assert census(g).cross_edge_fraction == 0.0
    assert g.group_sizes == (5, 4)


def test_sbm_group_densities():
    g = generate_sbm(5, 4, 1.0, 0.0, rng_seed=1, p_in2=0.0)
    assert g.edge_count == math.comb(5, 2)
    assert np.all(g.degrees[5:] == 0)
    with pytest.raises(InvalidParameterError):
        generate_sbm(3, 3, 0.5, 0.0, rng_seed=0, p_in2=-0.1)


def test_sbm_complete_bipartite():
    g = generate_sbm(3, 4, 0.0, 1.0, rng_seed=1)
    assert g.edge_count == 12
    assert census(g).cross_edge_fraction == 1.0


def test_sbm_deterministic():
    a = generate_sbm(30, 30, 0.2, 0.05, rng_seed=42)
    b = generate_sbm(30, 30, 0.2, 0.05, rng_seed=42)
    assert np.array_equal(a.edges, b.edges)
    assert a.group == b.group


def test_sbm_cross_edges_binomial_mean():
    counts = []
    for seed in range(100):
        g = generate_sbm(50, 50, 0.1, 0.02, rng_seed=seed)
        groups = g.group_array[g.edges]
        counts.append(np.count_nonzero(groups[:, 0] != groups[:, 1]))
    sigma = math.sqrt(2500 * 0.02 * 0.98 / 100)
    assert abs(np.mean(counts) - 50) <= 3 * sigma


def test_sbm_rejects_bad_probability():
    with pytest.raises(InvalidParameterError):
        generate_sbm(3, 3, 1.5, 0.0, rng_seed=0)


def test_induced_subgraph(two_cliques):
    sub, original = induced_subgraph(two_cliques, [4, 5, 6, 7])
    assert sub.node_count == 4
    assert sub.edge_count == 6
    assert list(original) == [4, 5, 6, 7]
    assert set(sub.group) == {2}
