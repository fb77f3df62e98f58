import numpy as np
import unittest
from numpy.testing import assert_allclose
from numpy.polynomial import Polynomial

from PSpinOpt.parisi.quadrature import hat_weights, inverse_integrals, inverse_square_integrals


class TestQuadrature(unittest.TestCase):

    def test_hat_weights_exact_on_linear_functions(self):
        poly = Polynomial([0., 0., 12.])
        M = 5
        q = np.linspace(0., 1., M + 1)
        c = hat_weights(poly, M)
        # int 12 q^2 dq = 4, int 12 q^3 dq = 3
        assert_allclose(np.dot(c, np.ones(M + 1)), 4.)
        assert_allclose(np.dot(c, q), 3.)

    def test_inverse_integrals(self):
        a = np.array([1., 2.])
        b = np.array([0.5, 2.])
        delta = 0.1
        value = inverse_integrals(a, b, delta)
        assert_allclose(value, [delta * np.log(2.) / 0.5, delta / 2.], rtol=1e-12)

    def test_inverse_integral_derivatives(self):
        a, b, delta, h = np.array([0.8]), np.array([0.3]), 0.2, 1e-6
        _, (da, db), (daa, dab, dbb) = inverse_integrals(a, b, delta, derivatives=2)
        fd_a = (inverse_integrals(a + h, b, delta) - inverse_integrals(a - h, b, delta)) / (2 * h)
        fd_b = (inverse_integrals(a, b + h, delta) - inverse_integrals(a, b - h, delta)) / (2 * h)
        assert_allclose(da, fd_a, rtol=1e-6)
        assert_allclose(db, fd_b, rtol=1e-6)
        _, (da_h, _) = inverse_integrals(a + h, b, delta, derivatives=1)
        _, (da_l, _) = inverse_integrals(a - h, b, delta, derivatives=1)
        assert_allclose(daa, (da_h - da_l) / (2 * h), rtol=1e-5)
        _, (_, db_h) = inverse_integrals(a, b + h, delta, derivatives=1)
        _, (_, db_l) = inverse_integrals(a, b - h, delta, derivatives=1)
        assert_allclose(dbb, (db_h - db_l) / (2 * h), rtol=1e-5)
        _, (da_bh, _) = inverse_integrals(a, b + h, delta, derivatives=1)
        _, (da_bl, _) = inverse_integrals(a, b - h, delta, derivatives=1)
        assert_allclose(dab, (da_bh - da_bl) / (2 * h), rtol=1e-5)

    def test_inverse_square_integrals_constant_profile(self):
        left = np.array([0., 0.5])
        A, B = inverse_square_integrals(np.array([2., 2.]), np.array([2., 2.]), 0.5, left)
        assert_allclose(A, [0.125, 0.125])
        # int (1-u)/4 over [0, 0.5] and [0.5, 1]
        assert_allclose(B, [0.375 / 4., 0.125 / 4.])
