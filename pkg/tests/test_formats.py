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
import json

import numpy as np
import pytest

from fairspread.definitions import OutreachDistribution, ReachFrequency, Seedset, SocialGraph
from fairspread.errors import InvalidDistributionError
from fairspread.formats.records import SeedsetJson, metric_report
from fairspread.formats.tables import HistogramCsv, OutreachCsv, ReachCsv, read_rows, write_rows


def test_write_rows_cells():
    text = write_rows(['a', 'b', 'c'], [{'a': 0.1, 'b': True, 'c': np.int64(3)}])
    assert text == 'a,b,c\n0.1,true,3\n'
    assert read_rows(text) == [{'a': '0.1', 'b': 'true', 'c': '3'}]


def test_outreach_csv():
    dist = OutreachDistribution.from_samples(np.array([0.25, 1.0]), np.array([0.5, 1 / 3]))
    text = OutreachCsv().encode(dist)
    assert text.splitlines()[0] == 'x1,x2,weight'
    decoded = OutreachCsv().decode(text)
    assert np.array_equal(decoded.x2, dist.x2)
    with pytest.raises(InvalidDistributionError):
        OutreachCsv().decode('x1,x2,weight\n')


def test_histogram_csv_lists_nonzero_bins():
    dist = OutreachDistribution.from_samples(np.array([0.0, 0.0, 1.0, 0.505]), np.array([0.0, 0.0, 1.0, 0.2]))
    text = HistogramCsv().encode(dist)
    assert read_rows(text) == [{'i': '0', 'j': '0', 'mass': '0.5'}, {'i': '50', 'j': '20', 'mass': '0.25'},
                               {'i': '99', 'j': '99', 'mass': '0.25'}]
    assert np.array_equal(HistogramCsv().decode(text), dist.histogram())


def test_reach_csv():
    reach = ReachFrequency(counts=[5, 0, 2], realization_count=5)
    text = ReachCsv().encode(reach)
    assert text == 'node,count,R\n0,5,5\n1,0,5\n2,2,5\n'
    assert ReachCsv().decode(text).as_dict() == reach.as_dict()


def test_seedset_json_uses_labels():
    g = SocialGraph.from_edges(3, [(0, 1)], [1, 2, 2], labels=['ana', 'bo', 'cy'])
    codec = SeedsetJson(g)
    document = json.loads(codec.encode(Seedset.of([2, 0]), algorithm='bas_d', p=0.1, beta=1.0,
                                       score_beta_fairness=0.5, master_seed=4))
    assert document['seed_ids'] == ['cy', 'ana']
    assert document['k'] == 2
    assert codec.decode(document) == Seedset.of([2, 0])


def test_metric_report():
    assert metric_report('efficiency', 0.2, 100, 7) == {'metric_name': 'efficiency', 'value': 0.2,
                                                        'realization_count': 100, 'rng_seed': 7}
    assert metric_report('beta_fairness', 0.9, 100, 7, beta=0.5)['beta'] == 0.5
