# Copyright (c) 2026, the PSpinOpt Authors
# Licensed under the BSD 3-clause license (see LICENSE.txt)

import argparse
import copy
import logging
import sys

from ..core.errors import (InvalidConfigError, InvalidVariableNameError, CapacityError, DomainError,
                           NonConvergenceError, SingularPathError, StabilityError)
from .config_parser import parser, default_config, validate_config
from .driver import PSpinDriver, COMMANDS, FAIL
from .output import OutputEng

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_CONFIG, EXIT_NUMERICAL, EXIT_CLAIM = 0, 1, 2, 3

CONFIG_ERRORS = (InvalidConfigError, InvalidVariableNameError, CapacityError, DomainError)
NUMERICAL_ERRORS = (NonConvergenceError, SingularPathError, StabilityError)


class _ArgumentParser(argparse.ArgumentParser):

    def error(self, message):
        raise InvalidConfigError(message)


def build_parser():
    arg_parser = _ArgumentParser(prog='pspinopt', description='Spherical mixed p-spin glass toolkit.')
    subparsers = arg_parser.add_subparsers(dest='command', parser_class=_ArgumentParser)
    for command in COMMANDS:
        sub = subparsers.add_parser(command)
        sub.add_argument('--config', default=None, help='JSON or TOML configuration file.')
        sub.add_argument('--out', default=None, help='output directory (default: current directory).')
        sub.add_argument('--seed', type=int, default=None, help='overrides the configured seed.')
        sub.add_argument('--strict', action='store_true', help='exit with code 3 when a report claim fails.')
        sub.add_argument('--verbose', action='store_true', help='log progress at INFO level.')
    return arg_parser


def _configure_logging(verbose):
    root = logging.getLogger('PSpinOpt')
    root.setLevel(logging.INFO if verbose else logging.WARNING)
    if not root.handlers:
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(logging.Formatter('%(asctime)s %(name)s %(levelname)s: %(message)s'))
        root.addHandler(handler)


def main(argv=None):
    """
    Command line entry point; returns the process exit code: 0 success, 1 configuration or domain error,
    2 numerical failure, 3 failed claim in `report --strict`.
    """
    try:
        args = build_parser().parse_args(argv)
        if args.command is None:
            raise InvalidConfigError('A command is required: ' + ', '.join(COMMANDS) + '.')
        if args.config is None:
            config = validate_config(copy.deepcopy(default_config))
        else:
            config = parser(args.config)
        if args.seed is not None:
            if args.seed < 0:
                raise InvalidConfigError('seed: must be a nonnegative integer.')
            config['seed'] = args.seed
        _configure_logging(args.verbose or config['output']['verbosity'])

        driver = PSpinDriver(config, OutputEng(config, args.out))
        result = driver.run(args.command)
    except CONFIG_ERRORS as e:
        logger.error('%s: %s', type(e).__name__, e)
        sys.stderr.write('error: ' + str(e) + '\n')
        return EXIT_CONFIG
    except NUMERICAL_ERRORS as e:
        logger.error('%s: %s', type(e).__name__, e)
        sys.stderr.write('numerical failure: ' + str(e) + '\n')
        return EXIT_NUMERICAL

    if args.command == 'report' and args.strict:
        failed = sorted(k for k, v in result['verdicts'].items() if v == FAIL)
        if failed:
            sys.stderr.write('failed claims: ' + ', '.join(failed) + '\n')
            return EXIT_CLAIM
    return EXIT_OK


if __name__ == '__main__':
    sys.exit(main())
