# Copyright (c) 2026, the PSpinOpt Authors
# Licensed under the BSD 3-clause license (see LICENSE.txt)

import copy
import json
import numbers

from ..core.errors import InvalidConfigError

default_config = {
    "experiment-name" : "no-named-experiment",
    "seed": 0,

    "mixture": {
        "coeffs": {"2": 1.0},
        },

    "solver": {
        "grid-size": 1000,
        "tolerance": 1e-9,
        "maximum-iterations": 20000,
        "method": "lbfgs",
        "tol-rsb": 1e-3,
        },

    "positive-temperature": {
        "betas": [],
        "grid-size": 300,
        "tolerance": 1e-10,
        "maximum-iterations": 3000,
        "method": "trust-constr",
        },

    "landscape": {
        "N": 100,
        "instances": 10,
        "restarts": 50,
        "tol-grad": 1e-7,
        "max-steps": 5000,
        "k-frac": 0.02,
        "delta": None,
        "budget": 2e8,
        "cluster-threshold": 0.25,
        "deep-fraction": 0.1,
        "pair-eps": [],
        "search-restarts": 5,
        "dump-tensors": False,
        },

    "replica-bound": {
        "eps-ladder": [1e-2, 5e-3, 2.5e-3],
        "substeps": 2,
        },

    "langevin": {
        "N": 100,
        "beta": 20.0,
        "horizon": 50.0,
        "dt": None,
        "paths": 20,
        "records": 40,
        "record-times": None,
        "start": "ascent",
        "start-restarts": 10,
        },

    "report": {
        "include": ["landscape", "replica-bound", "langevin"],
        "stationarity-tol": 1e-3,
        "threshold-tol": 1e-3,
        "envelope-tol": 1e-3,
        "radial-tol": 0.15,
        "edge-tol": 0.3,
        "slope-rtol": 0.02,
        "slope-atol": 1e-3,
        "plateau": 0.8,
        "bound-tol": 0.05,
        },

    "output": {
        "verbosity": False,
        "plots": False,
        },
}


def update_config(config_new, config_default):

    '''
    Updates the loaded method configuration with default values.
    '''
    if any([isinstance(v, dict) for v in list(config_new.values())]):
        for k,v in list(config_new.items()):
            if isinstance(v,dict) and k in config_default and isinstance(config_default[k], dict) and k != 'coeffs':
                update_config(config_new[k],config_default[k])
            else:
                config_default[k] = v
    else:
        config_default.update(config_new)
    return config_default


def _is_number(value):
    return isinstance(value, numbers.Real) and not isinstance(value, bool)


def _check_value(path, value, default):
    if default is None:
        if value is not None and not (_is_number(value) or isinstance(value, list)):
            raise InvalidConfigError(path + ': expected a number, a list or null.')
    elif isinstance(default, bool):
        if not isinstance(value, bool):
            raise InvalidConfigError(path + ': expected a boolean.')
    elif isinstance(default, numbers.Integral):
        if not (_is_number(value) and float(value) == int(value)):
            raise InvalidConfigError(path + ': expected an integer.')
    elif _is_number(default):
        if not _is_number(value):
            raise InvalidConfigError(path + ': expected a number.')
    elif isinstance(default, str):
        if not isinstance(value, str):
            raise InvalidConfigError(path + ': expected a string.')
    elif isinstance(default, list):
        if not isinstance(value, list):
            raise InvalidConfigError(path + ': expected a list.')
        if default and all(_is_number(d) for d in default) and not all(_is_number(v) for v in value):
            raise InvalidConfigError(path + ': expected a list of numbers.')


# fractions of the dimension N
_OPEN_UNIT_INTERVAL = ('landscape.delta', 'landscape.k-frac')


def _check_coeffs(coeffs):
    if not isinstance(coeffs, dict):
        raise InvalidConfigError('mixture.coeffs: expected a table of degree -> coefficient.')
    for key, value in coeffs.items():
        if not isinstance(key, str) or not key.isdigit():
            raise InvalidConfigError('mixture.coeffs.' + str(key) + ': degrees are decimal strings.')
        if not _is_number(value):
            raise InvalidConfigError('mixture.coeffs.' + key + ': expected a number.')


def _walk(config, schema, prefix):
    for key, value in config.items():
        path = key if not prefix else prefix + '.' + key
        if key not in schema:
            raise InvalidConfigError(path + ': unknown key.')
        if path == 'mixture.coeffs':
            _check_coeffs(value)
        elif isinstance(schema[key], dict):
            if not isinstance(value, dict):
                raise InvalidConfigError(path + ': expected a table.')
            _walk(value, schema[key], path)
        else:
            _check_value(path, value, schema[key])
            if path in _OPEN_UNIT_INTERVAL and value is not None and not (_is_number(value) and 0 < value < 1):
                raise InvalidConfigError(path + ': expected a number in (0, 1).')


def validate_config(config):
    '''
    Checks a configuration against the schema of *default_config*: unknown keys, mistyped values and
    malformed mixture degrees raise InvalidConfigError with the dotted path of the offending entry.
    '''
    if not isinstance(config, dict):
        raise InvalidConfigError('The configuration must be a table.')
    _walk(config, default_config, '')
    return config


def _load(input_file_path):
    if input_file_path.endswith('.toml'):
        try:
            import tomllib
        except ImportError:
            raise InvalidConfigError('TOML configs need Python >= 3.11, use JSON instead.')
        with open(input_file_path, 'rb') as config_file:
            return tomllib.load(config_file)
    with open(input_file_path, 'r') as config_file:
        return json.load(config_file)


def parser(input_file_path='config.json'):
    '''
    Parser for the .json (or .toml) file containing the configuration of the experiment.
    '''

    try:
        config_new = _load(input_file_path)
    except InvalidConfigError:
        raise
    except Exception as e:
        raise InvalidConfigError('Config file "'+input_file_path+'" not loaded properly ('+str(e)+'). Please check it and try again.')

    validate_config(config_new)
    options = update_config(config_new, copy.deepcopy(default_config))
    return validate_config(options)
