import numpy as np
import unittest
from numpy.testing import assert_allclose

from PSpinOpt.core.errors import DomainError, InvalidMixtureError, InvalidConfigError
from PSpinOpt.core.mixture import (Mixture, eval_derivatives, dilate, scale, predicates, e_infinity_pure,
                                   e_infinity_pm, full_rsb_density, replica_symmetric_value)


class TestMixture(unittest.TestCase):

    def setUp(self):
        self.sk = Mixture({2: 1.0})
        self.mixed = Mixture({2: 1.0, 4: 1.0})

    def test_construction_drops_zero_coefficients(self):
        m = Mixture({2: 1.0, 3: 0.0})
        self.assertEqual(m.degrees, [2])
        self.assertEqual(m, self.sk)

    def test_invalid_mixtures(self):
        with self.assertRaises(InvalidMixtureError):
            Mixture({2: -1.0})
        with self.assertRaises(InvalidMixtureError):
            Mixture({1: 1.0})
        with self.assertRaises(InvalidMixtureError):
            Mixture({0: 1.0, 2: 1.0})
        with self.assertRaises(InvalidMixtureError):
            Mixture({2: np.nan})
        with self.assertRaises(InvalidMixtureError):
            Mixture({2: 0.0})
        # domain errors are ValueErrors
        self.assertTrue(issubclass(InvalidMixtureError, ValueError))

    def test_from_config(self):
        m = Mixture.fromConfig({'coeffs': {'2': 1.0, '4': 0.5}})
        self.assertEqual(m.coeffs, {2: 1.0, 4: 0.5})
        self.assertEqual(Mixture.fromConfig(m.to_config()), m)
        with self.assertRaises(InvalidConfigError):
            Mixture.fromConfig({'coeffs': {'two': 1.0}})
        with self.assertRaises(InvalidConfigError):
            Mixture.fromConfig({'coeffs': {'2': -1.0}})
        with self.assertRaises(InvalidConfigError):
            Mixture.fromConfig({})

    def test_values(self):
        self.assertAlmostEqual(eval_derivatives(self.sk, 0.5, 0), 0.25)
        self.assertAlmostEqual(eval_derivatives(self.sk, 0.5, 1), 1.0)
        self.assertAlmostEqual(eval_derivatives(self.sk, 0.5, 2), 2.0)
        self.assertAlmostEqual(eval_derivatives(self.mixed, 1.0, 2), 14.0)
        self.assertAlmostEqual(eval_derivatives(Mixture({3: 1.0}), 1.0, 3), 6.0)
        assert_allclose(self.mixed(np.array([0., 0.5, 1.])), [0., 0.3125, 2.])

    def test_derivatives_match_finite_differences(self):
        m = Mixture({2: 0.7, 3: 0.4, 5: 0.3})
        h = 1e-6
        for q in [0.1, 0.5, 0.9]:
            for order in range(3):
                fd = (m(q + h, order) - m(q - h, order)) / (2 * h)
                assert_allclose(m(q, order + 1), fd, rtol=1e-6)

    def test_domain_errors(self):
        with self.assertRaises(DomainError):
            eval_derivatives(self.sk, 1.5)
        with self.assertRaises(DomainError):
            eval_derivatives(self.sk, -0.1)
        with self.assertRaises(DomainError):
            eval_derivatives(self.sk, 0.5, order=4)

    def test_dilate(self):
        m = dilate(self.sk, 0.9)
        self.assertAlmostEqual(m(1.0), 0.6561)
        assert_allclose(dilate(self.mixed, 0.8)(0.7), self.mixed(0.64 * 0.7))
        self.assertEqual(dilate(self.mixed, 1.0), self.mixed)
        with self.assertRaises(DomainError):
            dilate(self.sk, 0.)

    def test_scale(self):
        m = scale(self.mixed, 2.0)
        assert_allclose(m(0.3), 4. * self.mixed(0.3))
        with self.assertRaises(DomainError):
            scale(self.sk, -1.)

    def test_predicates(self):
        self.assertTrue(predicates(self.mixed)['is_even'])
        self.assertFalse(predicates(Mixture({2: 1., 3: 1.}))['is_even'])
        self.assertFalse(predicates(self.mixed)['is_generic'])
        self.assertFalse(predicates(self.mixed)['is_even_generic'])

    def test_e_infinity_pure(self):
        assert_allclose(e_infinity_pure(3), 1.6329931, atol=1e-7)
        assert_allclose(e_infinity_pure(4), 1.7320508, atol=1e-7)
        with self.assertRaises(DomainError):
            e_infinity_pure(2)

    def test_e_infinity_pm(self):
        assert_allclose(e_infinity_pm(self.sk), (np.sqrt(2.), np.sqrt(2.)), rtol=1e-12)
        for p in (3, 4, 6):
            low, high = e_infinity_pm(Mixture({p: 1.0}))
            assert_allclose(low, e_infinity_pure(p), rtol=1e-10)
            assert_allclose(high, e_infinity_pure(p), rtol=1e-10)
        low, high = e_infinity_pm(self.mixed)
        self.assertLessEqual(low, high)

    def test_full_rsb_density(self):
        # xi'' constant: zero density
        assert_allclose(full_rsb_density(self.sk, np.array([0.2, 0.8])), [0., 0.], atol=1e-14)
        m = Mixture({2: 1.0, 4: 1.0})
        q, h = 0.6, 1e-4
        f = lambda x: m(x, 2) ** -0.5
        fd = (f(q + h) - 2 * f(q) + f(q - h)) / h ** 2
        assert_allclose(full_rsb_density(m, q), fd, rtol=1e-5)

    def test_replica_symmetric_value(self):
        self.assertAlmostEqual(replica_symmetric_value(self.sk), np.sqrt(2.))
