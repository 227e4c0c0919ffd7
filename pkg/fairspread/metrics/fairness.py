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
from typing import Tuple

import numpy as np

from ..definitions import DiscreteDistribution2D, OutreachDistribution
from ..errors import InvalidParameterError
from .transport import Distribution


def columns(dist: Distribution) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(x1, x2, weight) columns of a distribution"""
    match dist:
        case OutreachDistribution():
            return dist.x1, dist.x2, dist.weights
        case DiscreteDistribution2D():
            return dist.points[:, 0], dist.points[:, 1], dist.weights
        case _:
            raise TypeError(f'unsupported distribution type {type(dist).__name__}')


def _unit(value: float) -> float:
    return min(1.0, max(0.0, value))


def mutual_fairness(dist: Distribution) -> float:
    """1 - E|x1 - x2|, the transport distance to the diagonal subtracted from one"""
    x1, x2, w = columns(dist)
    return _unit(1.0 - math.fsum(w * np.abs(x1 - x2)))


def beta_fairness(dist: Distribution, beta: float) -> float:
    """
    Fairness-efficiency blend 1 - E[beta |x1 - x2| + (1 - beta) |x1 + x2 - 2|] / (2 - beta).

    beta = 1 gives `mutual_fairness`, beta = 0 gives `efficiency`.
    """
    if not 0.0 <= beta <= 1.0:
        raise InvalidParameterError(f'beta must lie in [0, 1], got {beta}')
    x1, x2, w = columns(dist)
    return _unit(1.0 - math.fsum(w * (beta * np.abs(x1 - x2) + (1 - beta) * np.abs(x1 + x2 - 2))) / (2 - beta))


def efficiency(dist: Distribution) -> float:
    x1, x2, w = columns(dist)
    return _unit(math.fsum(w * (x1 + x2)) / 2)
