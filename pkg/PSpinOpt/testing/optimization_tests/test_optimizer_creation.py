import numpy as np
import unittest
from mock import patch
from numpy.testing import assert_allclose

from PSpinOpt.core.errors import InvalidVariableNameError
from PSpinOpt.optimization.optimizer import (choose_optimizer, OptLbfgs, OptProjectedGradient, OptTrustConstr,
                                             OptProjectedNewton)
from PSpinOpt.optimization.projection import BoxProjection


class TestOptimizerCreation(unittest.TestCase):

    def test_invalid_optimizer_name_raises_error(self):
        with self.assertRaises(InvalidVariableNameError):
            choose_optimizer('asd', None)

    def test_create_lbfgs_optimizer(self):
        optimizer = choose_optimizer('lbfgs', [(0, 1)])
        self.assertIsInstance(optimizer, OptLbfgs)

    def test_create_projected_gradient_optimizer(self):
        optimizer = choose_optimizer('projected_gradient', projection=BoxProjection(slice(None), 0., 1.))
        self.assertIsInstance(optimizer, OptProjectedGradient)

    def test_create_trust_constr_optimizer(self):
        from scipy.optimize import Bounds
        optimizer = choose_optimizer('trust-constr', Bounds([0.], [1.]))
        self.assertIsInstance(optimizer, OptTrustConstr)


class TestOptimizers(unittest.TestCase):
    '''
    A box constrained quadratic whose minimizer sits on the boundary in one coordinate.
    '''

    def setUp(self):
        self.center = np.array([0.3, 1.5])
        self.f_df = lambda x: (float(np.sum((x - self.center) ** 2)), 2. * (x - self.center))
        self.solution = np.array([0.3, 1.])

    def test_lbfgs(self):
        optimizer = choose_optimizer('lbfgs', [(0., 1.), (0., 1.)])
        x, fx = optimizer.optimize(np.array([0.5, 0.5]), f_df=self.f_df)
        assert_allclose(x, self.solution, atol=1e-8)
        assert_allclose(fx, 0.25, atol=1e-12)
        self.assertTrue(optimizer.status['converged'])

    def test_lbfgs_with_separate_function_and_gradient(self):
        optimizer = choose_optimizer('lbfgs', [(0., 1.), (0., 1.)])
        x, _ = optimizer.optimize(np.array([0.5, 0.5]), f=lambda x: self.f_df(x)[0], df=lambda x: self.f_df(x)[1])
        assert_allclose(x, self.solution, atol=1e-8)

    def test_projected_gradient(self):
        optimizer = choose_optimizer('projected_gradient', projection=BoxProjection(slice(None), 0., 1.),
                                     tol=1e-10)
        x, fx = optimizer.optimize(np.array([0.5, 0.5]), f_df=self.f_df)
        assert_allclose(x, self.solution, atol=1e-8)
        self.assertTrue(optimizer.status['converged'])

    def test_trust_constr(self):
        from scipy.optimize import Bounds
        optimizer = choose_optimizer('trust-constr', Bounds([0., 0.], [1., 1.]), tol=1e-10)
        x, fx = optimizer.optimize(np.array([0.5, 0.5]), f_df=self.f_df, hess=lambda x: 2. * np.eye(2))
        assert_allclose(x, self.solution, atol=1e-5)

    def test_projected_newton(self):
        optimizer = choose_optimizer('projected_newton', [(0., 1.), (0., 1.)])
        self.assertIsInstance(optimizer, OptProjectedNewton)
        x, fx = optimizer.optimize(np.array([0.5, 0.5]), f_df=self.f_df, hess=lambda x: 2. * np.eye(2))
        assert_allclose(x, self.solution, atol=1e-12)
        assert_allclose(fx, 0.25, atol=1e-12)
        self.assertTrue(optimizer.status['converged'])
        with self.assertRaises(ValueError):
            optimizer.optimize(np.array([0.5, 0.5]), f_df=self.f_df)

    def test_projected_newton_ill_conditioned(self):
        scales = 10. ** np.arange(0, 13, 3)
        center = np.array([0.5, -1., 0.25, 2., -0.5])
        f_df = lambda x: (0.5 * float(np.sum(scales * (x - center) ** 2)), scales * (x - center))
        bounds = [(0., 1.)] * 5
        optimizer = choose_optimizer('projected_newton', bounds, tol=1e-9)
        x, _ = optimizer.optimize(np.full(5, 0.9), f_df=f_df, hess=lambda x: np.diag(scales))
        assert_allclose(x, np.clip(center, 0., 1.), atol=1e-12)
        self.assertTrue(optimizer.status['converged'])
        self.assertLessEqual(optimizer.status['projected_gradient'], 1e-9)


class TestLbfgsConvergenceStatus(unittest.TestCase):

    def setUp(self):
        self.center = np.array([0.3, 1.5])
        self.f_df = lambda x: (float(np.sum((x - self.center) ** 2)), 2. * (x - self.center))

    def test_abnormal_stop_is_not_converged(self):
        x_stop = np.array([0.8, 0.6])
        fake = (x_stop, self.f_df(x_stop)[0],
                {'task': b'ABNORMAL_TERMINATION_IN_LNSRCH', 'warnflag': 2, 'nit': 3,
                 'grad': self.f_df(x_stop)[1]})
        optimizer = choose_optimizer('lbfgs', [(0., 1.), (0., 1.)], restarts=0)
        with patch('scipy.optimize.fmin_l_bfgs_b', return_value=fake):
            x, _ = optimizer.optimize(np.array([0.9, 0.5]), f_df=self.f_df)
        assert_allclose(x, x_stop)
        self.assertFalse(optimizer.status['converged'])
        self.assertEqual(optimizer.status['message'], 'ABNORMAL_TERMINATION_IN_LNSRCH')
        assert_allclose(optimizer.status['projected_gradient'], 0.8)

    def test_relative_reduction_stop_is_restarted(self):
        x_stop = np.array([0.8, 0.6])
        first = (x_stop, self.f_df(x_stop)[0],
                 {'task': 'CONVERGENCE: REL_REDUCTION_OF_F_<=_FACTR*EPSMCH', 'warnflag': 0, 'nit': 4,
                  'grad': self.f_df(x_stop)[1]})
        x_opt = np.array([0.3, 1.])
        second = (x_opt, self.f_df(x_opt)[0],
                  {'task': 'CONVERGENCE: NORM_OF_PROJECTED_GRADIENT_<=_PGTOL', 'warnflag': 0, 'nit': 2,
                   'grad': self.f_df(x_opt)[1]})
        optimizer = choose_optimizer('lbfgs', [(0., 1.), (0., 1.)])
        with patch('scipy.optimize.fmin_l_bfgs_b', side_effect=[first, second]) as mocked:
            optimizer.optimize(np.array([0.9, 0.5]), f_df=self.f_df)
        self.assertEqual(mocked.call_count, 2)
        self.assertEqual(mocked.call_args[1]['factr'], 0.)
        self.assertTrue(optimizer.status['converged'])
        self.assertEqual(optimizer.status['iterations'], 6)
