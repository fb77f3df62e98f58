import numpy as np
import unittest
from mock import patch
from numpy.testing import assert_allclose

from PSpinOpt.core.errors import InvalidConfigError
from PSpinOpt.util.general import get_workers, parallel_map, log_spaced_times, mean_and_stderr, WORKERS_ENV
from PSpinOpt.util.io import format_value, version_header


def _square(x):
    return x * x


class TestGeneralUtils(unittest.TestCase):

    def test_get_workers(self):
        self.assertEqual(get_workers({}), 1)
        self.assertEqual(get_workers({WORKERS_ENV: '4'}), 4)
        with self.assertRaises(InvalidConfigError):
            get_workers({WORKERS_ENV: 'many'})
        with self.assertRaises(InvalidConfigError):
            get_workers({WORKERS_ENV: '0'})

    @patch.dict('os.environ', {WORKERS_ENV: '3'})
    def test_get_workers_from_environment(self):
        self.assertEqual(get_workers(), 3)

    def test_parallel_map_keeps_job_order(self):
        jobs = list(range(7))
        self.assertEqual(parallel_map(_square, jobs, 1), [j * j for j in jobs])
        self.assertEqual(parallel_map(_square, jobs, 2), [j * j for j in jobs])

    def test_parallel_map_falls_back_to_a_single_process(self):
        with patch('multiprocessing.Pool', side_effect=OSError('no processes')):
            self.assertEqual(parallel_map(_square, [1, 2, 3], 4), [1, 4, 9])

    def test_log_spaced_times(self):
        times = log_spaced_times(10., 20, 0.01)
        self.assertEqual(times[0], 0.)
        assert_allclose(times[-1], 10.)
        self.assertTrue(np.all(np.diff(times) > 0))
        assert_allclose(log_spaced_times(1., 0, 0.1), [0.])

    def test_mean_and_stderr(self):
        mean, err = mean_and_stderr(np.array([[1., 2.], [3., 2.]]))
        assert_allclose(mean, [2., 2.])
        assert_allclose(err, [1., 0.])
        mean, err = mean_and_stderr(np.array([[1., 2.]]))
        assert_allclose(err, [0., 0.])


class TestIO(unittest.TestCase):

    def test_format_value(self):
        self.assertEqual(format_value(0.1), '0.1')
        self.assertEqual(format_value(np.float64(1.) / 3.), repr(1. / 3.))
        self.assertEqual(format_value(True), '1')
        self.assertEqual(format_value(np.int64(5)), '5')
        self.assertEqual(format_value(None), '')
        self.assertEqual(format_value('ok'), 'ok')

    def test_version_header(self):
        self.assertEqual(version_header('solve'), '# PSpinOpt 0.1.0 solve')
