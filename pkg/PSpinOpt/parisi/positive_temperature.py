# Copyright (c) 2026, the PSpinOpt Authors
# Licensed under the BSD 3-clause license (see LICENSE.txt)

import logging
import numpy as np
from scipy.optimize import Bounds, LinearConstraint

from ..core.errors import NonConvergenceError, OutsideConeError, DomainError, InvalidVariableNameError
from ..core.mixture import scale
from ..core.order_parameter import PositiveTempOrderParameter, ramp_apply, ramp_adjoint, ramp_matrix
from ..optimization.optimizer import choose_optimizer
from ..optimization.projection import DykstraProjection, MonotoneProjection, BoxProjection
from .quadrature import hat_weights, inverse_integrals

logger = logging.getLogger(__name__)


def evaluate_cs_positive_temp(x_op, m):
    """
    Positive-temperature functional with effective mixture beta^2 xi:

        1/2 { xi_b'(0) xhat(0) + int xi_b'' xhat + int_0^qhat dq/xhat + log(1 - qhat) },  xhat(q) = int_q^1 x

    with qhat the first grid node from which x = 1.

    :param x_op: PositiveTempOrderParameter.
    :param m: Mixture (unscaled).
    """
    x_op.validate()
    mb = scale(m, x_op.beta)
    xhat = x_op.xhat
    k = x_op.q_hat_index
    if k >= x_op.M:
        raise OutsideConeError('No qhat < 1 with x(qhat) = 1.')
    weights = hat_weights(mb.polynomial(2), x_op.M)
    inv = np.sum(inverse_integrals(xhat[:k], xhat[1:k + 1], 1. / x_op.M)) if k > 0 else 0.
    value = 0.5 * (mb.polynomial(1)(0.) * xhat[0] + np.dot(weights, xhat) + inv + np.log(1. - x_op.q_hat))
    return float(value)


class _JumpObjective(object):
    '''
    The functional in the jump coordinates v (x = cumsum(v), sum(v) = 1), the last cell contributing zero.
    '''
    def __init__(self, m, beta, M):
        mb = scale(m, beta)
        self.M = M
        self.delta = 1. / M
        self.xi1_0 = mb.polynomial(1)(0.)
        self.weights = hat_weights(mb.polynomial(2), M)
        q = np.linspace(0., 1., M + 1)
        self.reference = np.sum(inverse_integrals(1. - q[:-2], 1. - q[1:-1], self.delta))
        self._R = None

    def _cells(self, v, derivatives):
        xhat = ramp_apply(v, self.M)
        return xhat, inverse_integrals(xhat[:-2], xhat[1:-1], self.delta, derivatives=derivatives)

    def f_df(self, v):
        xhat, (inv, (da, db)) = self._cells(v, 1)
        if np.any(xhat[:-1] <= 0):
            return np.inf, np.zeros_like(v)
        value = 0.5 * (self.xi1_0 * xhat[0] + np.dot(self.weights, xhat) + np.sum(inv) - self.reference)
        grad = 0.5 * self.weights.copy()
        grad[0] += 0.5 * self.xi1_0
        grad[:-2] += 0.5 * da
        grad[1:-1] += 0.5 * db
        return value, ramp_adjoint(grad, self.M)

    def f(self, v):
        return self.f_df(v)[0]

    def hess(self, v):
        if self._R is None:
            self._R = ramp_matrix(self.M)
        R = self._R
        _, (_, _, (daa, dab, dbb)) = self._cells(v, 2)
        diag = np.zeros(self.M + 1)
        diag[:-2] += 0.5 * daa
        diag[1:-1] += 0.5 * dbb
        off = 0.5 * dab
        HR = diag[:, None] * R
        HR[:-2] += off[:, None] * R[1:-1]
        HR[1:-1] += off[:, None] * R[:-2]
        return R.T.dot(HR)


def _to_order_parameter(v, beta):
    x = np.cumsum(np.maximum(v, 0.))
    x = np.minimum(x / x[-1], 1.)
    x = np.maximum.accumulate(x)
    x[x >= 1. - 1e-9] = 1.
    return PositiveTempOrderParameter(x, beta)


def minimize_cs_positive_temp(m, beta, M=300, tol=1e-10, max_iter=3000, method='trust-constr'):
    """
    Minimizes the positive-temperature functional over nondecreasing x with values in [0, 1]
    equal to 1 on the last cell.

    :param m: Mixture.
    :param beta: inverse temperature.
    :param M: number of grid cells.
    :param tol: optimality tolerance.
    :param max_iter: iteration budget.
    :param method: 'trust-constr' (jump coordinates, exact Hessian) or 'projected_gradient'.
    Returns the minimizer and F(beta).
    """
    if not np.isfinite(beta) or beta <= 0:
        raise DomainError('Inverse temperature must be positive.')
    M = int(M)
    objective = _JumpObjective(m, beta, M)

    if method == 'trust-constr':
        optimizer = choose_optimizer('trust-constr', Bounds(np.zeros(M), np.ones(M)),
                                     constraints=[LinearConstraint(np.ones((1, M)), 1., 1.)],
                                     maxiter=max_iter, tol=tol)
        v, _ = optimizer.optimize(np.full(M, 1. / M), f_df=objective.f_df, hess=objective.hess)
    elif method == 'projected_gradient':
        # x-space: nondecreasing, in [0, 1], last cell pinned to 1
        last = np.zeros(M, dtype=bool)
        last[-1] = True
        projection = DykstraProjection([MonotoneProjection(slice(None)), BoxProjection(slice(None), 0., 1.),
                                        BoxProjection(last, 1., 1.)])

        def f_df_x(x):
            value, grad_v = objective.f_df(np.concatenate([[x[0]], np.diff(x)]))
            # v = D x, so the gradient in x is D^T grad_v
            return value, grad_v - np.concatenate([grad_v[1:], [0.]])

        optimizer = choose_optimizer('projected_gradient', projection=projection, maxiter=max_iter, tol=tol)
        x, _ = optimizer.optimize(np.linspace(1. / M, 1., M), f_df=f_df_x)
        v = np.concatenate([[x[0]], np.diff(x)])
    else:
        raise InvalidVariableNameError('Invalid solver method selected: ' + str(method) + '.')

    x_op = _to_order_parameter(v, beta)
    value = evaluate_cs_positive_temp(x_op, m)
    if not optimizer.status['converged']:
        raise NonConvergenceError('Positive-temperature solver did not converge (' + str(optimizer.status['message']) + ').',
                                  best=x_op, residuals={'F': value})
    logger.info('minimize_cs_positive_temp: beta=%g M=%d F=%.10f qhat=%.4f iterations=%s',
                beta, M, value, x_op.q_hat, optimizer.status['iterations'])
    return x_op, value


def zero_temperature_distance(x_op, op, q_cut=0.9):
    """
    Distances of the rescaled positive-temperature order parameter to the zero-temperature one:
    L1 distance of beta*x to zeta on [0, q_cut] and sup distance of beta*xhat to zhat.

    :param x_op: PositiveTempOrderParameter.
    :param op: zero-temperature OrderParameter.
    """
    grid = x_op.grid
    mids = 0.5 * (grid[:-1] + grid[1:])
    cells = np.minimum((mids * op.M).astype(int), op.M - 1)
    zeta = op.zeta[cells]
    keep = mids < q_cut
    l1 = np.sum(np.abs(x_op.beta * x_op.x[keep] - zeta[keep])) / x_op.M
    sup = np.max(np.abs(x_op.beta * x_op.xhat - np.interp(grid, op.grid, op.zhat)))
    return {'beta': x_op.beta, 'l1_zeta': float(l1), 'sup_zhat': float(sup)}
