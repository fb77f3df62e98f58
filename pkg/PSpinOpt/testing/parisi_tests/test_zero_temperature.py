import numpy as np
import unittest
from numpy.testing import assert_allclose

from PSpinOpt.core.errors import InvalidVariableNameError, DomainError, NonConvergenceError
from PSpinOpt.core.mixture import Mixture
from PSpinOpt.core.order_parameter import OrderParameter, random_order_parameter
from PSpinOpt.parisi.zero_temperature import (evaluate_Q, box_constant, stationarity_report, t_interval_at_one,
                                              spectral_prediction, gs_derivative, minimize_Q, envelope_check,
                                              grid_refinement, full_rsb_density_profile)


class TestEvaluateQ(unittest.TestCase):

    def setUp(self):
        self.sk = Mixture({2: 1.0})
        self.mixed = Mixture({2: 1.0, 3: 0.5, 4: 0.7})

    def test_replica_symmetric_values(self):
        op = OrderParameter.replica_symmetric(1. / np.sqrt(2.), 16)
        assert_allclose(evaluate_Q(op, self.sk), (np.sqrt(2.), np.sqrt(2.)), rtol=1e-12)
        op = OrderParameter.replica_symmetric(1., 16)
        assert_allclose(evaluate_Q(op, self.sk)[0], 1.5, rtol=1e-12)

    def test_both_forms_agree(self):
        rng = np.random.default_rng(11)
        for _ in range(100):
            op = random_order_parameter(2000, rng)
            form_a, form_b = evaluate_Q(op, self.mixed)
            assert_allclose(form_a, form_b, rtol=0., atol=1e-9)

    def test_convexity(self):
        rng = np.random.default_rng(5)
        for _ in range(100):
            op1 = random_order_parameter(60, rng)
            op2 = random_order_parameter(60, rng)
            middle = OrderParameter(0.5 * (op1.zhat + op2.zhat))
            q_mid = evaluate_Q(middle, self.mixed)[0]
            q_avg = 0.5 * (evaluate_Q(op1, self.mixed)[0] + evaluate_Q(op2, self.mixed)[0])
            self.assertLessEqual(q_mid, q_avg + 1e-12)

    def test_stationarity_residuals(self):
        report = stationarity_report(OrderParameter.replica_symmetric(1., 16), self.sk)
        assert_allclose(report.residual_G1, 1., rtol=1e-12)
        report = stationarity_report(OrderParameter.replica_symmetric(1. / np.sqrt(2.), 16), self.sk)
        self.assertLess(report.max_residual, 1e-12)
        assert_allclose(report.g, np.zeros(17), atol=1e-12)
        full, width = t_interval_at_one(report)
        self.assertTrue(full)
        self.assertEqual(width, 1.)

    def test_box_constant(self):
        c_l, c_box = box_constant(self.sk)
        assert_allclose(c_l, 2. * np.sqrt(2.))
        assert_allclose(c_box, 4. * np.sqrt(2.))

    def test_spectral_prediction_replica_symmetric(self):
        op = OrderParameter.replica_symmetric(1. / np.sqrt(2.), 16)
        pred = spectral_prediction(op, self.sk)
        assert_allclose(pred.r, 2. * np.sqrt(2.), rtol=1e-12)
        assert_allclose(pred.lambda_plus, 0., atol=1e-12)
        assert_allclose(pred.lambda_minus, -4. * np.sqrt(2.), rtol=1e-12)
        assert_allclose(pred.lambda_plus_alt, pred.lambda_plus, atol=1e-12)
        self.assertTrue(pred.full_rsb_endpoint)

    def test_gs_derivative(self):
        op = OrderParameter.replica_symmetric(1. / np.sqrt(2.), 16)
        assert_allclose(gs_derivative(self.sk, op), 2. * np.sqrt(2.), rtol=1e-12)


class TestMinimizeQ(unittest.TestCase):

    def test_sherrington_kirkpatrick(self):
        op, pred = minimize_Q(Mixture({2: 1.0}), M=200)
        assert_allclose(pred.gs, np.sqrt(2.), atol=1e-6)
        assert_allclose(op.L, 1. / np.sqrt(2.), atol=1e-6)
        self.assertLessEqual(np.max(op.zeta), 1e-6)
        assert_allclose(pred.r, 2. * np.sqrt(2.), atol=1e-5)
        assert_allclose(pred.lambda_minus, -4. * np.sqrt(2.), atol=1e-5)
        self.assertTrue(pred.full_rsb_endpoint)

    def test_pure_three_spin(self):
        m = Mixture({3: 1.0})
        op, pred = minimize_Q(m, M=400)
        assert_allclose(pred.gs, 1.65700, atol=1e-4)
        # one-step profile: zeta constant on [0, 1), zhat linear
        assert_allclose(op.L, 0.968994, atol=5e-3)
        assert_allclose(op.zeta[op.M // 2], 0.625, atol=5e-3)
        self.assertGreaterEqual(pred.gs, pred.e_inf_minus)
        self.assertLess(pred.lambda_plus, 0.)
        self.assertFalse(pred.full_rsb_endpoint)
        self.assertLessEqual(op.L, box_constant(m)[0] + 1e-9)
        report = stationarity_report(op, m)
        self.assertLess(report.residual_G1, 1e-5)
        self.assertLess(report.residual_min_g, 1e-5)
        self.assertLess(report.support_violation, 2. / op.M)

    def test_residuals_at_default_grid(self):
        for coeffs in ({3: 1.0}, {4: 1.0}, {2: 1.0, 4: 1.0}, {3: 0.5, 5: 1.0}):
            m = Mixture(coeffs)
            op, _ = minimize_Q(m)
            self.assertEqual(op.M, 1000)
            report = stationarity_report(op, m)
            self.assertLessEqual(report.residual_G1, 1e-3, msg=repr(m))
            self.assertLessEqual(report.residual_min_g, 1e-3, msg=repr(m))
            self.assertLessEqual(report.support_violation, 1e-3, msg=repr(m))

    def test_iteration_budget_exhausted(self):
        with self.assertRaises(NonConvergenceError) as context:
            minimize_Q(Mixture({3: 1.0}), M=200, max_iter=1)
        self.assertIsInstance(context.exception.best, OrderParameter)
        self.assertIn("residual_G1", context.exception.residuals)

    def test_mixed_even_mixture(self):
        m = Mixture({2: 1.0, 4: 1.0})
        op, pred = minimize_Q(m, M=200)
        self.assertLessEqual(pred.lambda_plus, 1e-12)
        assert_allclose(pred.lambda_plus_alt, pred.lambda_plus, atol=1e-10)
        report = stationarity_report(op, m)
        density = full_rsb_density_profile(op, m, report)
        self.assertTrue(np.all(np.isfinite(density[report.T_indices])))

    def test_projected_gradient_matches_lbfgs(self):
        m = Mixture({2: 1.0, 4: 1.0})
        _, pred_lbfgs = minimize_Q(m, M=50)
        _, pred_pg = minimize_Q(m, M=50, method='projected_gradient', tol=1e-6)
        assert_allclose(pred_pg.gs, pred_lbfgs.gs, atol=1e-6)

    def test_invalid_arguments(self):
        with self.assertRaises(InvalidVariableNameError):
            minimize_Q(Mixture({2: 1.0}), M=10, method='newton')
        with self.assertRaises(DomainError):
            minimize_Q(Mixture({2: 1.0}), M=1)

    def test_envelope_identity(self):
        check = envelope_check(Mixture({2: 1.0}), M=32)
        assert_allclose(check['finite_difference'], 2. * np.sqrt(2.), rtol=1e-6)
        assert_allclose(check['gs_derivative'], check['r'], rtol=1e-6)
        check = envelope_check(Mixture({3: 1.0}), M=200)
        assert_allclose(check['finite_difference'], check['gs_derivative'], rtol=1e-4)
        assert_allclose(check['gs_derivative'], check['r'], rtol=1e-2)

    def test_grid_refinement(self):
        self.assertLess(grid_refinement(Mixture({3: 1.0}), 100), 1e-3)
