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
import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from functools import cached_property
from pathlib import Path
from typing import Any, Dict, List, NamedTuple, Optional, Sequence, Tuple

import jsonschema
import networkx
import numpy
import scipy
import yaml
from filelock import FileLock
from jsonschema import validate

from . import __version__
from .definitions import DEFAULT_REALIZATIONS, Algorithm, OutreachDistribution, S3DParams, Seedset, SocialGraph
from .diffusion import sample_outreach, seedset_reach
from .errors import ConfigError, GraphDataError, UnknownAlgorithmError
from .formats.records import SeedsetJson, metric_report
from .formats.tables import HistogramCsv, OutreachCsv, ReachCsv, write_rows
from .graph import census, generate_sbm, load_graph
from .metrics import (beta_fairness, diversity_check, efficiency, equality_gap, equity_gap, equity_score,
                      maxmin_value, mutual_fairness, outreach_error_bars)
from .seeding import load_selector
from .util import RuntimeConfig, to_json

LOGGER = logging.getLogger(__name__)

package_dir = os.path.dirname(os.path.realpath(__file__))
SCHEMA_PATH = os.path.join(package_dir, 'schemas', 'experiment.schema')
LOCK_NAME = '.fairspread.lock'
DEFAULT_GRID = tuple(i / 10 for i in range(11))
ERROR_BAR_ESTIMATOR = ('2 * sample standard deviation (ddof=1) / sqrt(R) of the per-realization '
                       '|x1 - x2| (mutual fairness) and (x1 + x2) / 2 (efficiency)')


class AlgorithmSpec(NamedTuple):
    label: str
    algorithm: str


@dataclass(frozen=True)
class ExperimentConfig:
    k: int
    dataset: Optional[Dict[str, str]] = None
    sbm: Optional[Dict[str, Any]] = None
    algorithms: Tuple[AlgorithmSpec, ...] = tuple(AlgorithmSpec(a, a) for a in Algorithm.values())
    p_values: Tuple[float, ...] = (0.1,)
    beta: float = 1.0
    R: int = DEFAULT_REALIZATIONS
    iterations: int = 500
    master_seed: int = 0
    out: str = 'results'
    workers: Optional[int] = None
    grid: Tuple[float, ...] = DEFAULT_GRID
    diversity: bool = False
    exploit_to_explore: float = 1.3
    retention_prob: float = 0.95
    shallow_horizon: int = 4

    @property
    def dataset_name(self) -> str:
        if self.dataset:
            return self.dataset.get('name') or Path(self.dataset['edges']).stem
        return 'sbm'

    def s3d_params(self) -> S3DParams:
        return S3DParams(beta=self.beta, iterations=self.iterations, realizations=self.R,
                         exploit_to_explore=self.exploit_to_explore, retention_prob=self.retention_prob,
                         shallow_horizon=self.shallow_horizon, evaluation_realizations=self.R,
                         master_seed=self.master_seed)

    def echo(self) -> Dict:
        document = asdict(self)
        document['algorithms'] = [{'label': a.label, 'algorithm': a.algorithm} for a in self.algorithms]
        return document


@dataclass(frozen=True)
class ResultRow:
    dataset: str
    algorithm: str
    p: float
    k: int
    beta: float
    mutual_fairness: float
    beta_fairness: float
    efficiency: float
    equity_gap: float
    equality_gap: float
    maxmin_value: float
    mutual_fairness_2sigma: float
    efficiency_2sigma: float
    diversity_g1: Optional[bool] = None
    diversity_g2: Optional[bool] = None


@dataclass(frozen=True)
class CellResult:
    spec: AlgorithmSpec
    p: float
    seedset: Seedset
    distribution: OutreachDistribution = field(compare=False)
    row: ResultRow


def _load_schema() -> Dict:
    with open(SCHEMA_PATH, 'r') as definition:
        return json.load(definition)


def _algorithm_spec(entry) -> AlgorithmSpec:
    match entry:
        case str():
            return AlgorithmSpec(entry, entry)
        case {'algorithm': algorithm, **rest}:
            return AlgorithmSpec(rest.get('label', algorithm), algorithm)
        case _:
            raise ConfigError(f'invalid algorithm entry {entry!r}')


def _split(value: str) -> List[str]:
    return [v.strip() for v in str(value).split(',') if v.strip()]


def apply_overrides(document: Dict, overrides: Dict[str, Any]) -> Dict:
    """
    Applies command line flags to a parsed experiment document. `None` values are ignored.

    :param document: experiment document
    :param overrides: flag values keyed by `dataset`, `attrs`, `algo`, `k`, `p`, `beta`,
                      `R`, `iters`, `seed`, `out`, `workers`

    :returns: new document
    """
    document = dict(document)
    overrides = {k: v for k, v in overrides.items() if v is not None}
    if 'dataset' in overrides or 'attrs' in overrides:
        dataset = dict(document.get('dataset') or {})
        if 'dataset' in overrides:
            dataset['edges'] = overrides['dataset']
        if 'attrs' in overrides:
            dataset['attributes'] = overrides['attrs']
        document['dataset'] = dataset
        document.pop('sbm', None)
    if 'algo' in overrides:
        document['algorithms'] = _split(overrides['algo'])
    if 'p' in overrides:
        document['p_values'] = [float(v) for v in _split(overrides['p'])]
    if 'grid' in overrides:
        document['grid'] = [float(v) for v in _split(overrides['grid'])]
    for flag, key, cast in (('k', 'k', int), ('beta', 'beta', float), ('R', 'R', int),
                            ('iters', 'iterations', int), ('seed', 'master_seed', int), ('out', 'out', str),
                            ('workers', 'workers', int)):
        if flag in overrides:
            document[key] = cast(overrides[flag])
    return document


def build_config(document: Dict) -> ExperimentConfig:
    """
    Validates an experiment document and converts it to `ExperimentConfig`.
    """
    try:
        validate(instance=document, schema=_load_schema())
    except jsonschema.exceptions.ValidationError as ex:
        path = '/'.join(str(p) for p in ex.absolute_path) or '<root>'
        raise ConfigError(f'invalid experiment configuration at {path}: {ex.message}')

    algorithms = tuple(_algorithm_spec(a) for a in document.get('algorithms', Algorithm.values()))
    for spec in algorithms:
        if spec.algorithm not in Algorithm.values():
            raise UnknownAlgorithmError(f'unknown algorithm {spec.algorithm!r}, '
                                        f'expected one of {Algorithm.values()}')
    labels = [a.label for a in algorithms]
    if len(set(labels)) != len(labels):
        raise ConfigError(f'duplicate algorithm labels in {labels}')

    values = {f.name: document[f.name] for f in fields(ExperimentConfig)
              if f.name in document and f.name not in ('algorithms', 'p_values', 'grid')}
    cfg = ExperimentConfig(algorithms=algorithms,
                           p_values=tuple(document.get('p_values', ExperimentConfig.p_values)),
                           grid=tuple(document.get('grid', DEFAULT_GRID)),
                           **values)
    cfg.s3d_params()
    return cfg


def load_experiment_config(path: Optional[str], overrides: Optional[Dict[str, Any]] = None) -> ExperimentConfig:
    """
    Reads an experiment configuration file (JSON, or YAML) and applies command line overrides.

    :param path: configuration file, may be None when the overrides describe the whole experiment
    :param overrides: see `apply_overrides`

    :returns: `ExperimentConfig`
    """
    document = {}
    if path is not None:
        try:
            with open(path, encoding='utf-8') as fh:
                document = yaml.safe_load(fh) or {}
        except FileNotFoundError:
            raise ConfigError(f'configuration file {path} not found')
        except yaml.YAMLError as err:
            raise ConfigError(f'cannot parse {path}: {err}')
        if not isinstance(document, dict):
            raise ConfigError(f'{path} does not hold a configuration object')
    return build_config(apply_overrides(document, overrides or {}))


def load_dataset(cfg: ExperimentConfig) -> SocialGraph:
    if cfg.dataset:
        try:
            return load_graph(cfg.dataset['edges'], cfg.dataset['attributes'])
        except FileNotFoundError as err:
            raise GraphDataError(f'dataset file not found: {err.filename}')
    sbm = cfg.sbm
    return generate_sbm(sbm['n1'], sbm['n2'], sbm['p_in'], sbm['p_out'], sbm.get('seed', cfg.master_seed),
                        p_in2=sbm.get('p_in2'))


def run_cell(g: SocialGraph, cfg: ExperimentConfig, spec: AlgorithmSpec, p: float) -> CellResult:
    """
    Selects seeds for one (algorithm, p) cell and evaluates them on R fresh realizations.

    S3D cells select their initializer first; evaluation shares (R, master_seed)
    with the S3D scorer, so an S3D row never scores below its initializer row.
    """
    selector_def = {'name': spec.label, 'algorithm': spec.algorithm, 'realizations': cfg.R,
                    'master_seed': cfg.master_seed, 's3d': cfg.s3d_params()}
    selector = load_selector(selector_def)
    initial = None
    if (baseline := selector.algorithm.initializer) is not None:
        initial = load_selector({**selector_def, 'name': baseline.value,
                                 'algorithm': baseline.value}).select(g, cfg.k, p)
    LOGGER.info(f'cell {spec.label} p={p:g}: selecting {cfg.k} seeds')
    seedset = selector.select(g, cfg.k, p, initial=initial)

    dist = sample_outreach(g, seedset.nodes, p, cfg.R, cfg.master_seed)
    fairness_bar, efficiency_bar = outreach_error_bars(dist)
    diversity = (None, None)
    if cfg.diversity:
        diversity = diversity_check(g, dist, cfg.k, p, cfg.R, cfg.master_seed).satisfied
    row = ResultRow(dataset=cfg.dataset_name, algorithm=spec.label, p=p, k=cfg.k, beta=cfg.beta,
                    mutual_fairness=mutual_fairness(dist), beta_fairness=beta_fairness(dist, cfg.beta),
                    efficiency=efficiency(dist), equity_gap=equity_gap(dist),
                    equality_gap=equality_gap(g, seedset.nodes), maxmin_value=maxmin_value(dist),
                    mutual_fairness_2sigma=fairness_bar, efficiency_2sigma=efficiency_bar,
                    diversity_g1=diversity[0], diversity_g2=diversity[1])
    LOGGER.info(f'cell {spec.label} p={p:g}: mutual fairness {row.mutual_fairness:.4f}, '
                f'efficiency {row.efficiency:.4f}')
    return CellResult(spec=spec, p=p, seedset=seedset, distribution=dist, row=row)


def _run_cell_args(args):
    return run_cell(*args)


class ExperimentRunner:
    """Runs the (algorithm, p) cells of an experiment and writes their outputs"""

    def __init__(self, cfg: ExperimentConfig, runtime: Optional[RuntimeConfig] = None):
        self.cfg = cfg
        self.workers = cfg.workers or (runtime.workers if runtime is not None else 1)

    @cached_property
    def graph(self) -> SocialGraph:
        g = load_dataset(self.cfg)
        g.require_both_groups()
        return g

    @property
    def out(self) -> Path:
        return Path(self.cfg.out)

    def cells(self, p_values: Sequence[float]) -> List[CellResult]:
        """cells in configuration order, algorithms varying slowest"""
        tasks = [(self.graph, self.cfg, spec, float(p)) for spec in self.cfg.algorithms for p in p_values]
        if self.workers > 1 and len(tasks) > 1:
            with ProcessPoolExecutor(max_workers=self.workers) as executor:
                return list(executor.map(_run_cell_args, tasks))
        return [run_cell(*task) for task in tasks]

    def _write(self, name: str, content: str) -> Path:
        path = self.out / name
        path.write_text(content, encoding='utf-8')
        LOGGER.debug(f'wrote {path}')
        return path

    def _lock(self) -> FileLock:
        self.out.mkdir(parents=True, exist_ok=True)
        return FileLock(str(self.out / LOCK_NAME))

    def _meta(self) -> Dict:
        return {
            'config': self.cfg.echo(),
            'census': asdict(census(self.graph)),
            'versions': {'fairspread': __version__, 'numpy': numpy.__version__, 'scipy': scipy.__version__,
                         'networkx': networkx.__version__},
            'error_bars': ERROR_BAR_ESTIMATOR,
        }

    def _metric_reports(self, cell: CellResult) -> List[Dict]:
        row, R, seed = cell.row, self.cfg.R, self.cfg.master_seed
        return [metric_report('mutual_fairness', row.mutual_fairness, R, seed),
                metric_report('beta_fairness', row.beta_fairness, R, seed, beta=row.beta),
                metric_report('efficiency', row.efficiency, R, seed),
                metric_report('equity_gap', row.equity_gap, R, seed),
                metric_report('maxmin_value', row.maxmin_value, R, seed)]

    def run(self) -> List[ResultRow]:
        results = self.cells(self.cfg.p_values)
        outreach, histogram, seeds = OutreachCsv(), HistogramCsv(), SeedsetJson(self.graph)
        reach = ReachCsv()
        with self._lock():
            for cell in results:
                suffix = f'{cell.spec.label}_{cell.p:g}'
                self._write(f'outreach_{suffix}.csv', outreach.encode(cell.distribution))
                self._write(f'hist_{suffix}.csv', histogram.encode(cell.distribution))
                self._write(f'seeds_{suffix}.json',
                            seeds.encode(cell.seedset, algorithm=cell.spec.label, p=cell.p, beta=self.cfg.beta,
                                         score_beta_fairness=cell.row.beta_fairness,
                                         master_seed=self.cfg.master_seed))
                self._write(f'metrics_{suffix}.json', to_json(self._metric_reports(cell)))
                frequencies = seedset_reach(self.graph, cell.seedset.nodes, cell.p, None, self.cfg.R,
                                            self.cfg.master_seed)
                self._write(f'reach_{suffix}.csv', reach.encode(frequencies))
            rows = [cell.row for cell in results]
            self._write('summary.csv', write_rows([f.name for f in fields(ResultRow)], (asdict(r) for r in rows)))
            self._write('meta.json', to_json(self._meta()))
        LOGGER.info(f'experiment finished: {len(rows)} cells written to {self.out}')
        return rows

    def sweep(self, grid: Sequence[float]) -> Dict[str, List[Dict]]:
        for p in grid:
            if not 0.0 <= p <= 1.0:
                raise ConfigError(f'grid value {p} outside [0, 1]')
        tables: Dict[str, List[Dict]] = {}
        for cell in self.cells(grid):
            tables.setdefault(cell.spec.label, []).append({
                'p': cell.p,
                'mutual_fairness': cell.row.mutual_fairness,
                'equity_score': equity_score(cell.distribution),
                'equity_gap': cell.row.equity_gap,
                'efficiency': cell.row.efficiency,
            })
        with self._lock():
            for label, table in tables.items():
                self._write(f'sweep_{label}.csv', write_rows(list(table[0]), table))
        return tables

    def compare(self) -> List[Dict]:
        if len(self.cfg.algorithms) < 2:
            raise ConfigError('comparison needs at least two algorithms')
        points = [{
            'algorithm': cell.spec.label,
            'p': cell.p,
            'efficiency': cell.row.efficiency,
            'efficiency_2sigma': cell.row.efficiency_2sigma,
            'mutual_fairness': cell.row.mutual_fairness,
            'mutual_fairness_2sigma': cell.row.mutual_fairness_2sigma,
            'beta_fairness': cell.row.beta_fairness,
        } for cell in self.cells(self.cfg.p_values)]
        with self._lock():
            self._write('comparison.csv', write_rows(list(points[0]), points))
            self._write('comparison.json', to_json(points))
        return points


def run_experiment(cfg: ExperimentConfig, runtime: Optional[RuntimeConfig] = None) -> List[ResultRow]:
    """
    Runs every configured (algorithm, p) cell and writes summary, outreach, histogram, seed, metric, reach
    and meta files.

    :param cfg: `ExperimentConfig`
    :param runtime: `RuntimeConfig`, supplies the worker count

    :returns: list of `ResultRow` in configuration order
    """
    return ExperimentRunner(cfg, runtime).run()


def sweep_p(cfg: ExperimentConfig, grid: Optional[Sequence[float]] = None,
            runtime: Optional[RuntimeConfig] = None) -> Dict[str, List[Dict]]:
    """
    Mutual fairness and equity of every configured algorithm over a grid of p values.

    :returns: per algorithm label, one row per grid point
    """
    return ExperimentRunner(cfg, runtime).sweep(cfg.grid if grid is None else grid)


def compare_algorithms(cfg: ExperimentConfig, runtime: Optional[RuntimeConfig] = None) -> List[Dict]:
    """
    Efficiency and mutual fairness with 2-sigma bars for every (algorithm, p) cell.
    """
    return ExperimentRunner(cfg, runtime).compare()
