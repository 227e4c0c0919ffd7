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
import csv
import io
import logging
from typing import Any, Dict, Iterable, List, Sequence

import numpy as np

from ..definitions import HISTOGRAM_BINS, OutreachDistribution, ReachFrequency
from ..errors import InvalidDistributionError
from . import ResultFormat

LOGGER = logging.getLogger(__name__)


def write_rows(fieldnames: Sequence[str], rows: Iterable[Dict[str, Any]]) -> str:
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=list(fieldnames), lineterminator='\n')
    writer.writeheader()
    for row in rows:
        writer.writerow({k: _cell(v) for k, v in row.items()})
    return buffer.getvalue()


def read_rows(text: str) -> List[Dict[str, str]]:
    return list(csv.DictReader(io.StringIO(text)))


def _cell(value: Any) -> Any:
    match value:
        case bool() | np.bool_():
            return str(bool(value)).lower()
        case np.integer():
            return int(value)
        case float() | np.floating():
            return repr(float(value))
        case _:
            return value


class OutreachCsv(ResultFormat):
    """one `x1,x2,weight` row per sample (or per distinct configuration of an exact distribution)"""
    fieldnames = ('x1', 'x2', 'weight')

    def encode(self, dist: OutreachDistribution) -> str:
        return write_rows(self.fieldnames, ({'x1': a, 'x2': b, 'weight': w}
                                            for a, b, w in zip(dist.x1, dist.x2, dist.weights)))

    def decode(self, text: str) -> OutreachDistribution:
        rows = read_rows(text)
        if not rows:
            raise InvalidDistributionError('outreach table has no rows')
        columns = {name: np.array([float(r[name]) for r in rows]) for name in self.fieldnames}
        return OutreachDistribution(x1=columns['x1'], x2=columns['x2'], weights=columns['weight'],
                                    realization_count=len(rows))


class HistogramCsv(ResultFormat):
    """nonzero bins of the joint histogram as `i,j,mass`, i indexing x1 and j indexing x2"""
    fieldnames = ('i', 'j', 'mass')

    def __init__(self, bins: int = HISTOGRAM_BINS):
        self.bins = bins

    def encode(self, dist: OutreachDistribution) -> str:
        masses = dist.histogram(self.bins)
        i, j = np.nonzero(masses)
        return write_rows(self.fieldnames, ({'i': a, 'j': b, 'mass': masses[a, b]} for a, b in zip(i, j)))

    def decode(self, text: str) -> np.ndarray:
        masses = np.zeros((self.bins, self.bins))
        for row in read_rows(text):
            masses[int(row['i']), int(row['j'])] = float(row['mass'])
        return masses


class ReachCsv(ResultFormat):
    fieldnames = ('node', 'count', 'R')

    def encode(self, reach: ReachFrequency) -> str:
        return write_rows(self.fieldnames, ({'node': v, 'count': c, 'R': reach.realization_count}
                                            for v, c in enumerate(reach.counts)))

    def decode(self, text: str) -> ReachFrequency:
        rows = read_rows(text)
        realizations = int(rows[0]['R']) if rows else 0
        return ReachFrequency(counts=[int(r['count']) for r in rows], realization_count=realizations)
