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
import re
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Tuple

import networkx as nx
import numpy as np

from .definitions import GROUPS, GroupCensus, NodeId, SocialGraph
from .errors import GraphDataError, InvalidParameterError

LOGGER = logging.getLogger(__name__)

_DELIMITER = re.compile(r'[\s,]+')


def _read_attributes(attribute_file: Path) -> Dict[str, int]:
    groups: Dict[str, int] = {}
    first_row = True
    with open(attribute_file, encoding='utf-8') as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith('#'):
                continue
            header_allowed, first_row = first_row, False
            parts = [t.strip() for t in line.split(',')]
            if len(parts) != 2:
                raise GraphDataError(f'{attribute_file}:{lineno}: expected "node,group", got {line!r}')
            node, value = parts
            try:
                group = int(value)
            except ValueError:
                if header_allowed:
                    continue
                raise GraphDataError(f'{attribute_file}:{lineno}: non-binary group value {value!r} '
                                     f'for node {node}')
            if group not in GROUPS:
                raise GraphDataError(f'{attribute_file}:{lineno}: non-binary group value {value!r} '
                                     f'for node {node}')
            if node in groups and groups[node] != group:
                raise GraphDataError(f'{attribute_file}:{lineno}: conflicting groups for node {node}')
            groups[node] = group
    return groups


def _read_edges(edge_file: Path) -> List[Tuple[str, str]]:
    edges = []
    with open(edge_file, encoding='utf-8') as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith('#'):
                continue
            tokens = [t for t in _DELIMITER.split(line) if t]
            if len(tokens) != 2:
                raise GraphDataError(f'{edge_file}:{lineno}: expected two node tokens, got {line!r}')
            edges.append((tokens[0], tokens[1]))
    return edges


def load_graph(edge_file, attribute_file) -> SocialGraph:
    """
    Reads a group-labeled graph from an edge list and an attribute file.

    Dense node ids follow the order of the attribute file. Self-loops and
    duplicate edges are dropped.

    :param edge_file: path of the edge list, one "u v" pair per line
    :param attribute_file: path of the "node,group" rows

    :returns: `SocialGraph`
    """
    edge_file, attribute_file = Path(edge_file), Path(attribute_file)
    groups = _read_attributes(attribute_file)
    index = {node: i for i, node in enumerate(groups)}

    pairs = set()
    self_loops = duplicates = 0
    for u, v in _read_edges(edge_file):
        for node in (u, v):
            if node not in index:
                raise GraphDataError(f'node {node} of {edge_file} has no attribute row in {attribute_file}')
        if u == v:
            self_loops += 1
            continue
        pair = tuple(sorted((index[u], index[v])))
        if pair in pairs:
            duplicates += 1
            continue
        pairs.add(pair)

    if self_loops or duplicates:
        LOGGER.warning(f'{edge_file}: dropped {self_loops} self-loops and {duplicates} duplicate edges')
    if not groups:
        raise GraphDataError(f'{attribute_file} lists no nodes')

    g = SocialGraph.from_edges(len(groups), sorted(pairs), list(groups.values()), labels=list(groups))
    LOGGER.info(f'loaded graph with {g.node_count} nodes and {g.edge_count} edges from {edge_file}')
    return g


def save_graph(g: SocialGraph, edge_file, attribute_file) -> None:
    """
    Writes `g` in the format read by `load_graph`, using the external labels.
    """
    with open(edge_file, 'w', encoding='utf-8') as fh:
        for u, v in g.edges:
            fh.write(f'{g.labels[u]} {g.labels[v]}\n')
    with open(attribute_file, 'w', encoding='utf-8') as fh:
        fh.write('node,group\n')
        for label, group in zip(g.labels, g.group):
            fh.write(f'{label},{group}\n')


def to_networkx(g: SocialGraph) -> nx.Graph:
    graph = nx.Graph()
    for v in range(g.node_count):
        graph.add_node(v, group=g.group[v], label=g.labels[v])
    graph.add_edges_from((int(u), int(v)) for u, v in g.edges)
    return graph


def component_diameters(g: SocialGraph) -> List[Tuple[int, int]]:
    """
    Diameter of every connected component, computed by BFS from each node.

    :returns: list of (component size, diameter) ordered by smallest member id
    """
    graph = to_networkx(g)
    components = sorted((sorted(c) for c in nx.connected_components(graph)), key=lambda c: c[0])
    result = []
    for nodes in components:
        if len(nodes) == 1:
            result.append((1, 0))
            continue
        sub = graph.subgraph(nodes)
        eccentricity = max(max(lengths.values()) for _, lengths in nx.all_pairs_shortest_path_length(sub))
        result.append((len(nodes), eccentricity))
    return result


def diameter(g: SocialGraph) -> int:
    """largest diameter over all connected components"""
    return max(d for _, d in component_diameters(g))


def census(g: SocialGraph) -> GroupCensus:
    """
    Summary statistics of a graph.

    :param g: `SocialGraph`

    :returns: `GroupCensus`
    """
    if g.node_count == 0:
        raise GraphDataError('census of an empty graph')
    m = g.edge_count
    if m:
        endpoints = g.group_array[g.edges]
        cross = int(np.count_nonzero(endpoints[:, 0] != endpoints[:, 1]))
        cross_fraction = cross / m
    else:
        cross_fraction = 0.0
    diameters = component_diameters(g)
    largest = max(diameters, key=lambda c: c[0])  # max() keeps the first of equal-sized components
    size_g1, size_g2 = g.group_sizes
    return GroupCensus(node_count=g.node_count,
                       edge_count=m,
                       size_g1=size_g1,
                       size_g2=size_g2,
                       cross_edge_fraction=cross_fraction,
                       avg_degree=2 * m / g.node_count,
                       diameter=max(d for _, d in diameters),
                       largest_component_diameter=largest[1],
                       component_count=len(diameters))


def generate_sbm(n1: int, n2: int, p_in: float, p_out: float, rng_seed: int,
                 p_in2: Optional[float] = None) -> SocialGraph:
    """
    Two-block stochastic block model. Nodes 0..n1-1 form group 1, the rest group 2.

    :param n1: size of group 1
    :param n2: size of group 2
    :param p_in: within-group edge probability
    :param p_out: cross-group edge probability
    :param rng_seed: seed of the generator
    :param p_in2: within-group edge probability of group 2, `p_in` when omitted

    :returns: `SocialGraph`
    """
    p_in2 = p_in if p_in2 is None else p_in2
    for name, value in (('p_in', p_in), ('p_out', p_out), ('p_in2', p_in2)):
        if not 0.0 <= value <= 1.0:
            raise InvalidParameterError(f'{name} must lie in [0, 1], got {value}')
    if n1 < 0 or n2 < 0 or n1 + n2 < 1:
        raise InvalidParameterError(f'invalid block sizes ({n1}, {n2})')

    sbm = nx.stochastic_block_model([n1, n2], [[p_in, p_out], [p_out, p_in2]], seed=rng_seed, sparse=True)
    edges = sorted(tuple(sorted(e)) for e in sbm.edges())
    return SocialGraph.from_edges(n1 + n2, edges, [1] * n1 + [2] * n2)


def induced_subgraph(g: SocialGraph, nodes: Iterable[NodeId]) -> Tuple[SocialGraph, np.ndarray]:
    """
    Subgraph on `nodes` with dense ids.

    :returns: tuple of the subgraph and the array mapping its ids back to ids of `g`
    """
    original = np.array(sorted({int(v) for v in nodes}), dtype=np.int64)
    local = {int(v): i for i, v in enumerate(original)}
    edges = [(local[u], local[v]) for u, v in g.edges if u in local and v in local]
    sub = SocialGraph.from_edges(len(original), edges, [g.group[v] for v in original],
                                 labels=[g.labels[v] for v in original])
    return sub, original
