# Copyright (c) 2026, the PSpinOpt Authors
# Licensed under the BSD 3-clause license (see LICENSE.txt)

import numpy as np
from numpy.polynomial import Polynomial
from numpy.polynomial.legendre import leggauss

_x, _w = leggauss(12)
GL_NODES = 0.5 * (_x + 1.)
GL_WEIGHTS = 0.5 * _w


def hat_weights(poly, M):
    '''
    Weights c with int_0^1 poly(q) f(q) dq = c.f for every f piecewise linear on the uniform grid.

    :param poly: numpy Polynomial.
    :param M: number of cells.
    '''
    q = np.linspace(0., 1., M + 1)
    P0 = poly.integ()(q)
    P1 = (poly * Polynomial([0., 1.])).integ()(q)
    I0 = np.diff(P0)
    I1 = np.diff(P1)
    c = np.zeros(M + 1)
    c[:-1] += (q[1:] * I0 - I1) * M
    c[1:] += (I1 - q[:-1] * I0) * M
    return c


def inverse_integrals(a, b, delta, derivatives=0):
    '''
    Cellwise integrals of 1/y for y linear from a to b over cells of length delta (Gauss-Legendre).

    :param a: values at the left ends.
    :param b: values at the right ends.
    :param derivatives: 0, 1 or 2, number of derivative levels returned with respect to (a, b).
    '''
    a = np.asarray(a, dtype=float)[:, None]
    b = np.asarray(b, dtype=float)[:, None]
    s = GL_NODES[None, :]
    y = a * (1. - s) + b * s
    inv = 1. / y
    value = delta * inv.dot(GL_WEIGHTS)
    if derivatives == 0:
        return value
    inv2 = inv * inv
    grad = (-delta * (inv2 * (1. - s)).dot(GL_WEIGHTS), -delta * (inv2 * s).dot(GL_WEIGHTS))
    if derivatives == 1:
        return value, grad
    inv3 = inv2 * inv
    hess = (2. * delta * (inv3 * (1. - s) ** 2).dot(GL_WEIGHTS),
            2. * delta * (inv3 * s * (1. - s)).dot(GL_WEIGHTS),
            2. * delta * (inv3 * s ** 2).dot(GL_WEIGHTS))
    return value, grad, hess


def inverse_square_integrals(a, b, delta, left):
    '''
    Cellwise integrals of w(u)/y(u)^2 with y linear from a to b and weight w(u) = 1 - u.

    :param left: left ends of the cells (the weight is evaluated at the actual abscissae).
    Returns the pair (int 1/y^2, int (1-u)/y^2) per cell.
    '''
    a = np.asarray(a, dtype=float)[:, None]
    b = np.asarray(b, dtype=float)[:, None]
    s = GL_NODES[None, :]
    y = a * (1. - s) + b * s
    inv2 = 1. / (y * y)
    u = np.asarray(left, dtype=float)[:, None] + delta * s
    return delta * inv2.dot(GL_WEIGHTS), delta * (inv2 * (1. - u)).dot(GL_WEIGHTS)
