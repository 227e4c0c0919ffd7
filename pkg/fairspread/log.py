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
import sys
from typing import Dict

LOGGER = logging.getLogger(__name__)

LOG_FORMAT = '[%(asctime)s] {%(pathname)s:%(lineno)d} %(levelname)s - %(message)s'
DATE_FORMAT = '%Y-%m-%dT%H:%M:%SZ'


def setup_logger(logging_config: Dict) -> None:
    """
    Setup logging configuration

    :param logging_config: `logging:` section of the runtime configuration

    :returns: None
    """
    level = str(logging_config.get('level', 'WARNING')).upper()
    loglevel = getattr(logging, level, None)
    if not isinstance(loglevel, int):
        raise ValueError(f'invalid log level: {level}')

    root = logging.getLogger()
    for handler in list(root.handlers):
        root.removeHandler(handler)

    if logging_config.get('logfile'):
        handler = logging.FileHandler(logging_config['logfile'], encoding='utf-8')
    else:
        handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter(fmt=LOG_FORMAT, datefmt=DATE_FORMAT))
    root.addHandler(handler)
    root.setLevel(loglevel)

    LOGGER.debug('Logging initialized')
