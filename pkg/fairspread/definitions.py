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
from dataclasses import dataclass
from enum import Enum, auto
from functools import cached_property
from typing import Callable, Dict, FrozenSet, Iterable, List, NamedTuple, Optional, Sequence, Tuple, TypeAlias

import numpy as np

from .errors import EmptyGroupError, GraphDataError, InvalidDistributionError, InvalidParameterError, \
    InvalidSeedsetError

NodeId: TypeAlias = int
GroupLabel: TypeAlias = int
Point: TypeAlias = Tuple[float, float]
Horizon: TypeAlias = Optional[float]  # None (or inf) runs the cascade to quiescence
CostFunction: TypeAlias = Callable[[np.ndarray, np.ndarray], np.ndarray]

GROUPS: Tuple[GroupLabel, GroupLabel] = (1, 2)
HISTOGRAM_BINS = 100
DEFAULT_REALIZATIONS = 1000
WEIGHT_TOLERANCE = 1e-12
MARGIN_TOLERANCE = 1e-9


class Algorithm(Enum):
    BAS_D = 'bas_d'
    BAS_G = 'bas_g'
    HRT_D = 'hrt_d'
    HRT_G = 'hrt_g'
    S3D_D = 's3d_d'
    S3D_G = 's3d_g'

    @property
    def initializer(self) -> Optional['Algorithm']:
        """baseline whose seedset starts the S3D descent"""
        match self:
            case Algorithm.S3D_D:
                return Algorithm.BAS_D
            case Algorithm.S3D_G:
                return Algorithm.BAS_G
            case _:
                return None

    @classmethod
    def values(cls) -> List[str]:
        return [a.value for a in cls]


class StepOutcome(Enum):
    ACCEPTED = auto()
    RETAINED = auto()
    RESTARTED = auto()


@dataclass(frozen=True, eq=False)
class SocialGraph:
    """
    Undirected, unweighted graph whose nodes carry a group label in {1, 2}.

    Node ids are dense integers; `labels` keeps the external id of every node.
    Instances are immutable and safe to share between workers.
    """
    adjacency: Tuple[Tuple[NodeId, ...], ...]
    group: Tuple[GroupLabel, ...]
    labels: Tuple[str, ...]

    def __post_init__(self):
        n = len(self.adjacency)
        if len(self.group) != n or len(self.labels) != n:
            raise GraphDataError(f'adjacency, group and labels differ in length '
                                 f'({n}, {len(self.group)}, {len(self.labels)})')
        for u, neighbors in enumerate(self.adjacency):
            if len(set(neighbors)) != len(neighbors):
                raise GraphDataError(f'parallel edge at node {self.labels[u]}')
            for v in neighbors:
                if v == u:
                    raise GraphDataError(f'self-loop at node {self.labels[u]}')
                if not 0 <= v < n or u not in self.adjacency[v]:
                    raise GraphDataError(f'adjacency not symmetric between {u} and {v}')
        for u, g in enumerate(self.group):
            if g not in GROUPS:
                raise GraphDataError(f'non-binary group value {g!r} for node {self.labels[u]}')

    @classmethod
    def from_edges(cls,
                   node_count: int,
                   edges: Iterable[Tuple[NodeId, NodeId]],
                   group: Sequence[GroupLabel],
                   labels: Optional[Sequence[str]] = None) -> 'SocialGraph':
        """
        Builds a graph from an edge list over dense ids. Self-loops and parallel edges are skipped.

        :param node_count: number of nodes
        :param edges: iterable of (u, v) pairs
        :param group: group label per node
        :param labels: external ids, defaults to the dense ids as strings

        :returns: `SocialGraph` instance
        """
        neighbors = [set() for _ in range(node_count)]
        for u, v in edges:
            if u == v:
                continue
            neighbors[u].add(v)
            neighbors[v].add(u)
        return cls(adjacency=tuple(tuple(sorted(s)) for s in neighbors),
                   group=tuple(int(g) for g in group),
                   labels=tuple(labels) if labels is not None else tuple(str(i) for i in range(node_count)))

    @property
    def node_count(self) -> int:
        return len(self.adjacency)

    @cached_property
    def edges(self) -> np.ndarray:
        """(m, 2) array of edges with u < v, lexicographically sorted"""
        pairs = [(u, v) for u, neighbors in enumerate(self.adjacency) for v in neighbors if u < v]
        return np.array(pairs, dtype=np.int64).reshape(-1, 2)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @cached_property
    def degrees(self) -> np.ndarray:
        return np.array([len(a) for a in self.adjacency], dtype=np.int64)

    @cached_property
    def group_array(self) -> np.ndarray:
        return np.array(self.group, dtype=np.int8)

    def group_mask(self, group: GroupLabel) -> np.ndarray:
        return self.group_array == group

    def members(self, group: GroupLabel) -> np.ndarray:
        return np.flatnonzero(self.group_mask(group))

    def group_size(self, group: GroupLabel) -> int:
        return int(np.count_nonzero(self.group_mask(group)))

    @property
    def group_sizes(self) -> Tuple[int, int]:
        return self.group_size(1), self.group_size(2)

    def require_both_groups(self) -> None:
        size_g1, size_g2 = self.group_sizes
        if size_g1 == 0 or size_g2 == 0:
            raise EmptyGroupError(f'group sizes are ({size_g1}, {size_g2}); outreach fractions undefined')

    @cached_property
    def arcs(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """
        Both orientations of every edge, sorted by head node.

        :returns: tuple of (tail, head, edge index) arrays of length 2m
        """
        m = self.edge_count
        tail = np.concatenate([self.edges[:, 0], self.edges[:, 1]])
        head = np.concatenate([self.edges[:, 1], self.edges[:, 0]])
        index = np.concatenate([np.arange(m), np.arange(m)])
        order = np.argsort(head, kind='stable')
        return tail[order], head[order], index[order]

    def check_seeds(self, seedset: Iterable[NodeId]) -> np.ndarray:
        """
        Validates node ids of a seedset.

        :returns: sorted array of the distinct ids
        """
        seeds = np.unique(np.fromiter((int(v) for v in seedset), dtype=np.int64))
        if seeds.size and (seeds[0] < 0 or seeds[-1] >= self.node_count):
            bad = [int(v) for v in seeds if not 0 <= v < self.node_count]
            raise InvalidSeedsetError(f'seed ids out of range [0, {self.node_count}): {bad}')
        return seeds


@dataclass(frozen=True)
class GroupCensus:
    node_count: int
    edge_count: int
    size_g1: int
    size_g2: int
    cross_edge_fraction: float
    avg_degree: float
    diameter: int
    largest_component_diameter: int
    component_count: int

    @property
    def minority_fraction(self) -> float:
        return min(self.size_g1, self.size_g2) / self.node_count


@dataclass(frozen=True)
class FinalConfiguration:
    x1: float
    x2: float

    def __post_init__(self):
        if not (0.0 <= self.x1 <= 1.0 and 0.0 <= self.x2 <= 1.0):
            raise InvalidDistributionError(f'configuration ({self.x1}, {self.x2}) outside the unit square')

    def as_point(self) -> Point:
        return self.x1, self.x2


def _readonly(values, dtype=np.float64) -> np.ndarray:
    array = np.array(values, dtype=dtype)
    array.flags.writeable = False
    return array


@dataclass(frozen=True, eq=False)
class DiscreteDistribution2D:
    """Weighted point set on the unit square"""
    points: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        points = _readonly(self.points).reshape(-1, 2)
        weights = _readonly(self.weights).reshape(-1)
        object.__setattr__(self, 'points', points)
        object.__setattr__(self, 'weights', weights)
        if len(points) != len(weights) or len(points) == 0:
            raise InvalidDistributionError(f'{len(points)} points but {len(weights)} weights')
        if not np.all(np.isfinite(points)) or np.any(points < -WEIGHT_TOLERANCE) \
                or np.any(points > 1 + WEIGHT_TOLERANCE):
            raise InvalidDistributionError('points outside the unit square')
        if np.any(weights < 0):
            raise InvalidDistributionError('negative weights')
        total = math.fsum(weights)
        if abs(total - 1.0) > WEIGHT_TOLERANCE:
            raise InvalidDistributionError(f'weights sum to {total!r}, expected 1')

    @classmethod
    def dirac(cls, x1: float, x2: float) -> 'DiscreteDistribution2D':
        return cls(points=[[x1, x2]], weights=[1.0])

    @classmethod
    def from_pairs(cls, pairs: Iterable[Tuple[Point, float]]) -> 'DiscreteDistribution2D':
        pairs = list(pairs)
        return cls(points=[p for p, _ in pairs], weights=[w for _, w in pairs])

    @property
    def support_size(self) -> int:
        return len(self.weights)


@dataclass(frozen=True, eq=False)
class TransportPlan:
    source: DiscreteDistribution2D
    target: DiscreteDistribution2D
    mass: np.ndarray

    def __post_init__(self):
        mass = _readonly(self.mass).reshape(self.source.support_size, self.target.support_size)
        object.__setattr__(self, 'mass', mass)

    def is_feasible(self, tolerance: float = MARGIN_TOLERANCE) -> bool:
        return (np.all(self.mass >= -tolerance)
                and np.allclose(self.mass.sum(axis=1), self.source.weights, rtol=0, atol=tolerance)
                and np.allclose(self.mass.sum(axis=0), self.target.weights, rtol=0, atol=tolerance))


@dataclass(frozen=True, eq=False)
class OutreachDistribution:
    """
    Empirical (or exact) joint distribution over final configurations.

    Sampled distributions hold one row per realization with weight 1/N;
    exact ones hold one row per distinct configuration.
    """
    x1: np.ndarray
    x2: np.ndarray
    weights: np.ndarray
    realization_count: int
    exact: bool = False

    def __post_init__(self):
        object.__setattr__(self, 'x1', _readonly(self.x1).reshape(-1))
        object.__setattr__(self, 'x2', _readonly(self.x2).reshape(-1))
        object.__setattr__(self, 'weights', _readonly(self.weights).reshape(-1))
        if not len(self.x1) == len(self.x2) == len(self.weights):
            raise InvalidDistributionError('x1, x2 and weights differ in length')

    @classmethod
    def from_samples(cls, x1: np.ndarray, x2: np.ndarray) -> 'OutreachDistribution':
        n = len(x1)
        return cls(x1=x1, x2=x2, weights=np.full(n, 1.0 / n), realization_count=n)

    @property
    def samples(self) -> List[FinalConfiguration]:
        return [FinalConfiguration(float(a), float(b)) for a, b in zip(self.x1, self.x2)]

    @property
    def total_mass(self) -> float:
        return math.fsum(self.weights)

    def means(self) -> Tuple[float, float]:
        """expected outreach ratio per group"""
        return float(np.dot(self.weights, self.x1)), float(np.dot(self.weights, self.x2))

    def histogram(self, bins: int = HISTOGRAM_BINS) -> np.ndarray:
        """
        Bin masses on a bins x bins grid over [0,1]^2.

        Bins are left-closed and right-open; the value 1.0 joins the last bin.

        :returns: array of shape (bins, bins) indexed by (x1 bin, x2 bin)
        """
        edges = np.arange(bins + 1) / bins
        masses, _, _ = np.histogram2d(self.x1, self.x2, bins=[edges, edges], weights=self.weights)
        return masses

    def as_discrete(self) -> DiscreteDistribution2D:
        weights = np.asarray(self.weights)
        return DiscreteDistribution2D(points=np.column_stack([self.x1, self.x2]),
                                      weights=weights / math.fsum(weights))


@dataclass(frozen=True, eq=False)
class ReachFrequency:
    counts: np.ndarray
    realization_count: int

    def __post_init__(self):
        object.__setattr__(self, 'counts', _readonly(self.counts, dtype=np.int64))

    def as_dict(self) -> Dict[NodeId, int]:
        return {int(v): int(c) for v, c in enumerate(self.counts)}

    def frequency(self, node: NodeId) -> float:
        return self.counts[node] / self.realization_count


@dataclass(frozen=True)
class Seedset:
    nodes: Tuple[NodeId, ...]
    target_size: int

    def __post_init__(self):
        object.__setattr__(self, 'nodes', tuple(int(v) for v in self.nodes))
        if len(set(self.nodes)) != len(self.nodes):
            raise InvalidSeedsetError(f'duplicate seeds in {self.nodes}')
        if len(self.nodes) != self.target_size:
            raise InvalidSeedsetError(f'{len(self.nodes)} seeds but target size {self.target_size}')

    @classmethod
    def of(cls, nodes: Iterable[NodeId]) -> 'Seedset':
        nodes = tuple(nodes)
        return cls(nodes=nodes, target_size=len(nodes))

    @property
    def key(self) -> FrozenSet[NodeId]:
        return frozenset(self.nodes)

    def __len__(self):
        return len(self.nodes)

    def __iter__(self):
        return iter(self.nodes)


@dataclass(frozen=True)
class S3DParams:
    beta: float = 1.0
    iterations: int = 500
    realizations: int = DEFAULT_REALIZATIONS
    exploit_to_explore: float = 1.3
    retention_prob: float = 0.95
    shallow_horizon: int = 4
    evaluation_realizations: int = DEFAULT_REALIZATIONS
    master_seed: int = 0

    def __post_init__(self):
        if not 0.0 <= self.beta <= 1.0:
            raise InvalidParameterError(f'beta must lie in [0, 1], got {self.beta}')
        if not 0.0 <= self.retention_prob <= 1.0:
            raise InvalidParameterError(f'retention_prob must lie in [0, 1], got {self.retention_prob}')
        if self.iterations < 1:
            raise InvalidParameterError(f'iterations must be >= 1, got {self.iterations}')
        if self.realizations < 1 or self.evaluation_realizations < 1:
            raise InvalidParameterError('realization counts must be >= 1')
        if self.shallow_horizon < 0:
            raise InvalidParameterError(f'shallow_horizon must be >= 0, got {self.shallow_horizon}')

    @property
    def epsilon(self) -> float:
        """probability of a random restart after a rejected proposal"""
        return 1.0 - self.retention_prob


class SeedsetEvaluation(NamedTuple):
    beta_fairness: float
    mutual_fairness: float
    efficiency: float


@dataclass(frozen=True)
class DiversityReport:
    """per-group outreach against the spread the group reaches on its own with a proportional budget"""
    budgets: Tuple[int, int]
    achieved: Tuple[float, float]
    baselines: Tuple[float, float]
    approximate: Tuple[bool, bool]

    @property
    def satisfied(self) -> Tuple[bool, bool]:
        return tuple(a >= b for a, b in zip(self.achieved, self.baselines))
