import copy
import json
import os
import shutil
import tempfile
import unittest

from PSpinOpt.core.errors import InvalidConfigError
from PSpinOpt.interface.config_parser import default_config, update_config, validate_config, parser


class TestConfigParser(unittest.TestCase):

    def setUp(self):
        self.tmpdir = tempfile.mkdtemp()

    def tearDown(self):
        shutil.rmtree(self.tmpdir)

    def _write(self, content, name='config.json'):
        path = os.path.join(self.tmpdir, name)
        with open(path, 'w') as f:
            f.write(content if isinstance(content, str) else json.dumps(content))
        return path

    def test_default_config_is_valid(self):
        validate_config(copy.deepcopy(default_config))

    def test_unknown_key(self):
        with self.assertRaises(InvalidConfigError) as context:
            validate_config({'landscape': {'restartz': 5}})
        self.assertIn('landscape.restartz', str(context.exception))

    def test_bad_degree(self):
        with self.assertRaises(InvalidConfigError) as context:
            validate_config({'mixture': {'coeffs': {'two': 1.0}}})
        self.assertIn('mixture.coeffs.two', str(context.exception))

    def test_mistyped_values(self):
        with self.assertRaises(InvalidConfigError):
            validate_config({'solver': {'grid-size': 'large'}})
        with self.assertRaises(InvalidConfigError):
            validate_config({'solver': {'grid-size': 10.5}})
        with self.assertRaises(InvalidConfigError):
            validate_config({'output': {'plots': 1}})
        with self.assertRaises(InvalidConfigError):
            validate_config({'replica-bound': {'eps-ladder': ['a']}})

    def test_fractions_of_the_dimension(self):
        for value in (0., 1., 1.5, -0.1):
            with self.assertRaises(InvalidConfigError) as context:
                validate_config({'landscape': {'delta': value}})
            self.assertIn('landscape.delta', str(context.exception))
        with self.assertRaises(InvalidConfigError):
            validate_config({'landscape': {'k-frac': 1.}})
        validate_config({'landscape': {'delta': 0.05, 'k-frac': 0.02}})
        validate_config({'landscape': {'delta': None}})

    def test_update_replaces_coefficients(self):
        config = update_config({'mixture': {'coeffs': {'4': 1.0}}, 'landscape': {'N': 20}},
                               copy.deepcopy(default_config))
        self.assertEqual(config['mixture']['coeffs'], {'4': 1.0})
        self.assertEqual(config['landscape']['N'], 20)
        self.assertEqual(config['landscape']['restarts'], default_config['landscape']['restarts'])

    def test_parser(self):
        path = self._write({'experiment-name': 'q4', 'seed': 7, 'mixture': {'coeffs': {'4': 1.0}}})
        config = parser(path)
        self.assertEqual(config['experiment-name'], 'q4')
        self.assertEqual(config['seed'], 7)
        self.assertEqual(config['solver']['grid-size'], 1000)

    def test_parser_errors(self):
        with self.assertRaises(InvalidConfigError):
            parser(self._write('{not json'))
        with self.assertRaises(InvalidConfigError):
            parser(os.path.join(self.tmpdir, 'missing.json'))
        with self.assertRaises(InvalidConfigError):
            parser(self._write({'landscape': {'restartz': 5}}))
