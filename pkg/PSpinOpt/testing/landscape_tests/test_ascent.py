import numpy as np
import unittest
from numpy.testing import assert_allclose

from PSpinOpt.core.errors import DomainError
from PSpinOpt.core.mixture import Mixture
from PSpinOpt.landscape.ascent import ascend, run_restarts, LandscapeRecord
from PSpinOpt.landscape.checks import best_records
from PSpinOpt.landscape.hamiltonian import sample, random_point


class TestAscent(unittest.TestCase):

    def setUp(self):
        self.N = 30
        self.h = sample(self.N, Mixture({2: 1.0}), 11)
        G = self.h.tensors[2]
        self.top = np.linalg.eigvalsh(0.5 * (G + G.T))[-1]

    def test_reaches_top_eigenvector(self):
        # H(s) = s^T G s / sqrt(N) is maximized by the top eigenvector of the symmetric part of G
        rec = ascend(self.h, random_point(self.N, np.random.default_rng(0)))
        self.assertTrue(rec.converged)
        assert_allclose(rec.energy_per_N, self.top / np.sqrt(self.N), rtol=1e-8)
        self.assertLessEqual(rec.grad_sp_norm_per_sqrtN, 1e-7)
        assert_allclose(rec.radial, 2. * rec.energy_per_N, rtol=1e-8)
        self.assertLess(rec.lambda_1, 0.)
        self.assertEqual(rec.eigs.size, self.N - 1)
        self.assertTrue(np.all(np.diff(rec.eigs) <= 0))

    def test_without_newton(self):
        rec = ascend(self.h, random_point(self.N, np.random.default_rng(1)), newton=False, tol_grad=1e-6)
        assert_allclose(rec.energy_per_N, self.top / np.sqrt(self.N), rtol=1e-6)

    def test_budget_exhausted(self):
        rec = ascend(self.h, random_point(self.N, np.random.default_rng(2)), max_steps=1)
        self.assertFalse(rec.converged)
        self.assertEqual(rec.ascent_steps, 1)

    def test_start_must_be_on_sphere(self):
        with self.assertRaises(DomainError):
            ascend(self.h, 2. * np.ones(self.N))

    def test_restarts_are_deterministic(self):
        h = sample(12, Mixture({2: 1.0, 4: 0.5}), 3)
        first = run_restarts(h, n_restarts=3, max_steps=500)
        second = run_restarts(h, n_restarts=3, max_steps=500)
        self.assertEqual([r.restart for r in first], [0, 1, 2])
        self.assertEqual([r.seed for r in first], [3, 3, 3])
        for a, b in zip(first, second):
            assert_allclose(a.sigma, b.sigma)


class TestSpectraAtMaxima(unittest.TestCase):

    def test_quadratic_model_is_marginal(self):
        N = 300
        h = sample(N, Mixture({2: 1.0}), 2)
        rec = ascend(h, random_point(N, np.random.default_rng(4)))
        self.assertTrue(rec.converged)
        assert_allclose(rec.radial, 2. * np.sqrt(2.), atol=0.15)
        self.assertLessEqual(rec.lambda_1, 0.)
        self.assertGreaterEqual(rec.lambda_1, -0.15)

    def test_quartic_model_is_uniformly_concave(self):
        h = sample(40, Mixture({4: 1.0}), 6)
        records = run_restarts(h, n_restarts=10)
        deep = best_records(records, 0.1)
        self.assertTrue(all(r.converged for r in deep))
        self.assertLessEqual(max(r.lambda_1 for r in deep), -0.1)


class TestLandscapeRecord(unittest.TestCase):

    def test_row_and_eigenvalue_access(self):
        rec = LandscapeRecord(np.ones(4), 1.5, 0., 3., [-3., -1., -2.], 10, True, seed=1, restart=2)
        self.assertEqual(rec.N, 4)
        self.assertEqual(rec.lambda_1, -1.)
        self.assertEqual(rec.lambda_min, -3.)
        self.assertEqual(rec.eig(2), -2.)
        self.assertEqual(rec.to_row(), [1, 2, 1.5, 3., -1., -1., -3., 1])
        self.assertEqual(rec.to_dict()['ascent_steps'], 10)
