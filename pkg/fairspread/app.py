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
import argparse
import logging
import sys
from dataclasses import asdict
from typing import List, Optional

from . import __version__
from .errors import ConfigError, FairSpreadError, GraphDataError
from .experiment import compare_algorithms, load_dataset, load_experiment_config, run_experiment, sweep_p
from .graph import census
from .log import setup_logger
from .util import load_runtime_config, to_json

LOGGER = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1


def get_exit_code(err: Exception) -> int:
    """
    Exception handler

    :param err: exception raised by a command

    :returns: process exit code
    """
    match err:
        case FairSpreadError():
            return err.exit_code
        case FileNotFoundError():
            return GraphDataError.exit_code
        case _:
            return EXIT_FAILURE


def _experiment_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument('--config', help='experiment configuration (JSON or YAML)')
    parser.add_argument('--dataset', help='edge list file')
    parser.add_argument('--attrs', help='node attribute file ("node,group" rows)')
    parser.add_argument('--algo', help='comma separated algorithms, e.g. bas_g,s3d_g')
    parser.add_argument('--k', type=int, help='number of seeds')
    parser.add_argument('--p', help='comma separated activation probabilities')
    parser.add_argument('--beta', type=float, help='fairness weight of beta-fairness')
    parser.add_argument('--R', type=int, help='Monte-Carlo realizations')
    parser.add_argument('--iters', type=int, help='S3D iterations')
    parser.add_argument('--seed', type=int, help='master seed')
    parser.add_argument('--out', help='output directory')
    parser.add_argument('--workers', type=int, help='parallel experiment cells')


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog='fairspread',
                                     description='fairness-aware influence maximization experiments')
    parser.add_argument('--version', action='version', version=f'%(prog)s {__version__}')
    parser.add_argument('--log-level', help='overrides the configured log level')
    parser.add_argument('--runtime-config', help='runtime configuration, defaults to $FAIRSPREAD_CONFIG')
    commands = parser.add_subparsers(dest='command', required=True)

    run = commands.add_parser('run', help='select seeds and evaluate every (algorithm, p) cell')
    _experiment_flags(run)

    sweep = commands.add_parser('sweep', help='mutual fairness and equity over a grid of p values')
    _experiment_flags(sweep)
    sweep.add_argument('--grid', help='comma separated p values')

    compare = commands.add_parser('compare', help='fairness-efficiency points per algorithm')
    _experiment_flags(compare)

    census_ = commands.add_parser('census', help='summary statistics of a dataset')
    census_.add_argument('--config', help='experiment configuration naming the dataset')
    census_.add_argument('--dataset', help='edge list file')
    census_.add_argument('--attrs', help='node attribute file')
    return parser


def _overrides(args: argparse.Namespace) -> dict:
    names = ('dataset', 'attrs', 'algo', 'k', 'p', 'beta', 'R', 'iters', 'seed', 'out', 'workers', 'grid')
    return {name: getattr(args, name, None) for name in names}


def _census(args: argparse.Namespace) -> None:
    overrides = {'dataset': args.dataset, 'attrs': args.attrs}
    if args.config is None:
        if args.dataset is None or args.attrs is None:
            raise ConfigError('census needs --config or both --dataset and --attrs')
        overrides['k'] = 1
    g = load_dataset(load_experiment_config(args.config, overrides))
    summary = census(g)
    sys.stdout.write(to_json({**asdict(summary), 'minority_fraction': summary.minority_fraction}))


def main(argv: Optional[List[str]] = None) -> int:
    """
    Command line entry point

    :param argv: arguments without the program name, defaults to `sys.argv[1:]`

    :returns: exit code, 0 on success, 2 on configuration errors, 3 on data errors
    """
    args = build_parser().parse_args(argv)
    try:
        runtime = load_runtime_config(args.runtime_config)
        logging_section = runtime.logging_section()
        if args.log_level:
            logging_section['level'] = args.log_level
        try:
            setup_logger(logging_section)
        except ValueError as err:
            raise ConfigError(str(err))

        match args.command:
            case 'census':
                _census(args)
            case 'run':
                rows = run_experiment(load_experiment_config(args.config, _overrides(args)), runtime)
                LOGGER.info(f'{len(rows)} result rows written')
            case 'sweep':
                cfg = load_experiment_config(args.config, _overrides(args))
                sweep_p(cfg, runtime=runtime)
            case 'compare':
                compare_algorithms(load_experiment_config(args.config, _overrides(args)), runtime)
    except Exception as err:
        code = get_exit_code(err)
        if code == EXIT_FAILURE:
            LOGGER.critical(f'{args.command} failed', exc_info=err)
        else:
            LOGGER.error(f'{args.command} failed: {err}')
        message = err.user_msg if isinstance(err, FairSpreadError) else str(err)
        sys.stderr.write(f'fairspread: error: {message}\n')
        return code
    return EXIT_OK
