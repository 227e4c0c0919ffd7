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
from .classical import (diversity_check, equality_gap, equity_gap, equity_score, expected_outreach_ratio,
                        maxmin_value, outreach_error_bars)
from .fairness import beta_fairness, efficiency, mutual_fairness
from .transport import beta_cost, euclidean_cost, fairness_cost, merge_points, ot_exact, projection_cost

__all__ = ['beta_cost', 'beta_fairness', 'diversity_check', 'efficiency', 'equality_gap', 'equity_gap',
           'equity_score', 'euclidean_cost', 'expected_outreach_ratio', 'fairness_cost', 'maxmin_value',
           'merge_points', 'mutual_fairness', 'ot_exact', 'outreach_error_bars', 'projection_cost']
