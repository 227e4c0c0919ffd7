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
from dataclasses import dataclass
from enum import IntEnum
from typing import Any, Dict, Iterator, Optional, Tuple

import numpy as np
import yaml

from .errors import ConfigError

LOGGER = logging.getLogger(__name__)

REALIZATION_BLOCK = 1024
DEFAULT_CONFIG_PATH = 'fairspread-config.yml'


class StreamTag(IntEnum):
    """first spawn key component, separates the random streams of unrelated consumers"""
    OUTREACH = 1
    REACH = 2
    GREEDY = 3
    S3D = 4
    DIVERSITY = 5
    SBM = 6


def block_rng(master_seed: int, tag: StreamTag, *key: int, block: int = 0) -> np.random.Generator:
    """
    Generator for one block of realizations.

    The stream depends only on (master_seed, tag, key, block), never on the
    order in which blocks are consumed.

    :param master_seed: experiment seed
    :param tag: consumer of the stream
    :param key: additional integer keys, e.g. the greedy round
    :param block: block index

    :returns: `numpy.random.Generator`
    """
    spawn_key = (int(tag), *(int(k) for k in key), int(block))
    return np.random.default_rng(np.random.SeedSequence(int(master_seed), spawn_key=spawn_key))


def realization_blocks(realizations: int, block_size: int = REALIZATION_BLOCK) -> Iterator[Tuple[int, int, int]]:
    """
    Splits realization indices into fixed-size blocks.

    :returns: iterator of (block, start, stop)
    """
    for block, start in enumerate(range(0, realizations, block_size)):
        yield block, start, min(start + block_size, realizations)


@dataclass(frozen=True)
class RuntimeConfig:
    log_level: str = 'WARNING'
    logfile: Optional[str] = None
    workers: int = 1

    def logging_section(self) -> Dict:
        return {'level': self.log_level, 'logfile': self.logfile}


def load_runtime_config(path: Optional[str] = None) -> RuntimeConfig:
    """
    Reads the runtime configuration file. Environment variables take precedence over file values.

    :param path: config file, defaults to $FAIRSPREAD_CONFIG or ./fairspread-config.yml

    :returns: `RuntimeConfig`
    """
    path = path or os.getenv('FAIRSPREAD_CONFIG', DEFAULT_CONFIG_PATH)
    config: Dict[str, Any] = {}
    if os.path.exists(path):
        with open(path, encoding='utf-8') as fh:
            try:
                config = yaml.safe_load(fh) or {}
            except yaml.YAMLError as err:
                raise ConfigError(f'cannot parse {path}: {err}')
    else:
        LOGGER.debug(f'no runtime config at {path}, using defaults')

    logging_cfg = config.get('logging') or {}
    runtime_cfg = config.get('runtime') or {}
    try:
        runtime = RuntimeConfig(
            log_level=os.getenv('FAIRSPREAD_LOG_LEVEL', logging_cfg.get('level', 'WARNING')),
            logfile=os.getenv('FAIRSPREAD_LOGFILE', logging_cfg.get('logfile')),
            workers=int(os.getenv('FAIRSPREAD_WORKERS', runtime_cfg.get('workers', 1))))
    except ValueError as err:
        raise ConfigError(f'invalid runtime configuration in {path}: {err}')
    if runtime.workers < 1:
        raise ConfigError(f'workers must be positive, got {runtime.workers}')
    return runtime


def _default(obj):
    match obj:
        case np.integer():
            return int(obj)
        case np.floating():
            return float(obj)
        case np.ndarray():
            return obj.tolist()
        case frozenset() | set():
            return sorted(obj)
        case _:
            raise TypeError(f'{type(obj).__name__} is not JSON serializable')


def to_json(obj: Any) -> str:
    """deterministic JSON encoding: sorted keys, numpy scalars unwrapped"""
    return json.dumps(obj, default=_default, sort_keys=True, indent=2) + '\n'
