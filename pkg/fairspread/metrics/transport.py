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
from typing import Tuple, Union

import numpy as np
from scipy import sparse
from scipy.optimize import linprog

from ..definitions import CostFunction, DiscreteDistribution2D, OutreachDistribution, TransportPlan
from ..errors import InvalidParameterError, SolverError

LOGGER = logging.getLogger(__name__)

MAX_SUPPORT = 10_000
SOLVER_TOLERANCE = 1e-10

Distribution = Union[OutreachDistribution, DiscreteDistribution2D]


def _coordinates(a, b) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    a, b = np.asarray(a, dtype=np.float64), np.asarray(b, dtype=np.float64)
    return a[..., 0], a[..., 1], b[..., 0], b[..., 1]


def fairness_cost(a, b) -> np.ndarray:
    """
    Cost of moving mass from configuration a to b across the diagonal.

    Displacements along the diagonal are free: c(a, b) = |(a2 - a1) - (b2 - b1)|.
    Broadcasts over leading axes of (..., 2) arrays.
    """
    x1, x2, y1, y2 = _coordinates(a, b)
    return np.abs((x2 - x1) - (y2 - y1))


def projection_cost(a, b) -> np.ndarray:
    """Euclidean length of the displacement orthogonal to the diagonal"""
    return (math.sqrt(2) / 2) * fairness_cost(a, b)


def beta_cost(a, b, beta: float) -> np.ndarray:
    """
    Blend of the cross-diagonal cost (weight beta) and the along-diagonal cost (weight 1 - beta).
    """
    if not 0.0 <= beta <= 1.0:
        raise InvalidParameterError(f'beta must lie in [0, 1], got {beta}')
    x1, x2, y1, y2 = _coordinates(a, b)
    return beta * np.abs((x2 - x1) - (y2 - y1)) + (1 - beta) * np.abs((x1 + x2) - (y1 + y2))


def euclidean_cost(a, b) -> np.ndarray:
    x1, x2, y1, y2 = _coordinates(a, b)
    return np.hypot(x1 - y1, x2 - y2)


def as_discrete(dist: Distribution) -> DiscreteDistribution2D:
    if isinstance(dist, OutreachDistribution):
        return dist.as_discrete()
    return dist


def merge_points(dist: DiscreteDistribution2D) -> Tuple[DiscreteDistribution2D, np.ndarray]:
    """
    Collapses repeated support points, summing their weights.

    :returns: tuple of the merged distribution and, per original point, the index of its merged point
    """
    points, inverse = np.unique(dist.points, axis=0, return_inverse=True)
    inverse = inverse.reshape(-1)
    weights = np.bincount(inverse, weights=dist.weights, minlength=len(points))
    return DiscreteDistribution2D(points=points, weights=weights / math.fsum(weights)), inverse


def _shares(dist: DiscreteDistribution2D, merged: DiscreteDistribution2D, inverse: np.ndarray) -> np.ndarray:
    """weight of every original point relative to its merged point"""
    pooled = merged.weights[inverse]
    return np.divide(dist.weights, pooled, out=np.zeros_like(pooled), where=pooled > 0)


def ot_exact(src: Distribution, dst: Distribution, cost: CostFunction) -> Tuple[float, TransportPlan]:
    """
    Exact optimal transport between two discrete distributions.

    Repeated points are merged before solving, so sampled distributions cost
    as much as their distinct configurations. The plan is split back over the
    original points in proportion to their weights.

    :param src: source distribution
    :param dst: target distribution
    :param cost: cost function over (..., 2) point arrays

    :returns: tuple of the minimal expected cost and an optimal `TransportPlan`
    """
    src, dst = as_discrete(src), as_discrete(dst)
    if src.support_size + dst.support_size > MAX_SUPPORT:
        raise InvalidParameterError(f'combined support size {src.support_size + dst.support_size} '
                                    f'exceeds {MAX_SUPPORT}')
    merged_src, src_index = merge_points(src)
    merged_dst, dst_index = merge_points(dst)
    value, mass = _solve(merged_src, merged_dst, cost)
    mass = (mass[src_index][:, dst_index]
            * _shares(src, merged_src, src_index)[:, None] * _shares(dst, merged_dst, dst_index)[None, :])
    return value, TransportPlan(source=src, target=dst, mass=mass)


def _solve(src: DiscreteDistribution2D, dst: DiscreteDistribution2D, cost: CostFunction) -> Tuple[float, np.ndarray]:
    n, m = src.support_size, dst.support_size
    costs = np.asarray(cost(src.points[:, None, :], dst.points[None, :, :]), dtype=np.float64)
    if costs.shape != (n, m):
        raise InvalidParameterError(f'cost function returned shape {costs.shape}, expected {(n, m)}')

    if n == 1 or m == 1:
        # the coupling is the product measure
        mass = np.outer(src.weights, dst.weights)
    else:
        rows = sparse.kron(sparse.identity(n), np.ones((1, m)), format='csr')
        # the last column constraint is implied by the others
        cols = sparse.kron(np.ones((1, n)), sparse.identity(m), format='csr')[:-1]
        constraints = sparse.vstack([rows, cols]).tocsc()
        bounds = np.concatenate([src.weights, dst.weights[:-1]])
        result = linprog(costs.ravel(), A_eq=constraints, b_eq=bounds, bounds=(0, None), method='highs-ds',
                         options={'primal_feasibility_tolerance': SOLVER_TOLERANCE,
                                  'dual_feasibility_tolerance': SOLVER_TOLERANCE})
        if result.status != 0:
            LOGGER.error(f'transport solver failed on a {n}x{m} problem: {result.message}')
            raise SolverError(f'transport solver failed: {result.message}')
        mass = np.clip(result.x, 0.0, None).reshape(n, m)

    value = math.fsum((costs * mass).ravel())
    return value, mass
