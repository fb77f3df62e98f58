# Copyright (c) 2026, the PSpinOpt Authors
# Licensed under the BSD 3-clause license (see LICENSE.txt)

import logging
import numpy as np
from numpy.polynomial import Polynomial

from ..core.errors import NonConvergenceError, OutsideConeError, DomainError, InvalidVariableNameError
from ..core.mixture import e_infinity_pm, dilate, full_rsb_density
from ..core.order_parameter import OrderParameter, ramp_apply, ramp_adjoint, ramp_matrix
from ..optimization.optimizer import choose_optimizer
from ..optimization.projection import DykstraProjection, MonotoneProjection, BoxProjection, HalfspaceProjection
from .quadrature import hat_weights, inverse_integrals, inverse_square_integrals

logger = logging.getLogger(__name__)

ZHAT_FLOOR = 1e-8
NEWTON_ITERATIONS = 200


class StationarityReport(object):
    """
    First-order optimality data of an order parameter: G, g, the set T where g vanishes and the residuals
    G(1) = 0, min g = 0 and supp(zeta) in T.
    """

    def __init__(self, grid, G, g, T_indices, support_indices, tol_g):
        self.grid = grid
        self.G = G
        self.g = g
        self.T_indices = T_indices
        self.support_indices = support_indices
        self.tol_g = tol_g
        self.residual_G1 = float(abs(G[-1]))
        self.min_g = float(np.min(g))
        self.residual_min_g = float(abs(self.min_g))
        if len(support_indices) == 0:
            self.support_violation = 0.
        else:
            t_points = grid[T_indices]
            s_points = grid[support_indices]
            self.support_violation = float(np.max(np.min(np.abs(s_points[:, None] - t_points[None, :]), axis=1)))

    @property
    def max_residual(self):
        return max(self.residual_G1, self.residual_min_g, self.support_violation)

    def to_dict(self):
        return {'residual_G1': self.residual_G1, 'residual_min_g': self.residual_min_g,
                'min_g': self.min_g, 'support_violation': self.support_violation, 'tol_g': self.tol_g,
                'T_size': int(len(self.T_indices)), 'support_size': int(len(self.support_indices))}


class SpectralPrediction(object):
    """
    Predictions derived from the zero-temperature minimizer: ground state energy, radial derivative r,
    bulk edges lambda_+ / lambda_-, the full-RSB endpoint predicate and the thresholds E_inf^-/+.
    """

    def __init__(self, gs, zhat1, xi2, tol_rsb=1e-3, e_inf=None):
        self.gs = float(gs)
        self.zhat1 = float(zhat1)
        self.r = self.zhat1 * xi2 + 1. / self.zhat1
        self.lambda_plus = 2. * np.sqrt(xi2) - self.r
        self.lambda_minus = -2. * np.sqrt(xi2) - self.r
        self.lambda_plus_alt = -self.zhat1 * (np.sqrt(xi2) - 1. / self.zhat1) ** 2
        self.rsb_gap = abs(self.zhat1 - xi2 ** -0.5)
        self.full_rsb_endpoint = bool(self.rsb_gap <= tol_rsb * xi2 ** -0.5)
        if e_inf is None:
            self.e_inf_minus, self.e_inf_plus = None, None
        else:
            self.e_inf_minus, self.e_inf_plus = float(e_inf[0]), float(e_inf[1])

    def to_dict(self):
        return {'gs': self.gs, 'zhat1': self.zhat1, 'r': self.r, 'lambda_plus': self.lambda_plus,
                'lambda_minus': self.lambda_minus, 'full_rsb_endpoint': self.full_rsb_endpoint,
                'rsb_gap': self.rsb_gap, 'e_inf_minus': self.e_inf_minus, 'e_inf_plus': self.e_inf_plus}


def _weights(m, M):
    return hat_weights(m.polynomial(2), M)


def _value_and_gradient(zhat, m, weights):
    '''
    Q and its gradient with respect to the nodal values of a piecewise-linear zhat.
    '''
    M = zhat.size - 1
    inv, (da, db) = inverse_integrals(zhat[:-1], zhat[1:], 1. / M, derivatives=1)
    xi1_0 = m.polynomial(1)(0.)
    value = 0.5 * (xi1_0 * zhat[0] + np.dot(weights, zhat) + np.sum(inv))
    grad = 0.5 * weights.copy()
    grad[0] += 0.5 * xi1_0
    grad[:-1] += 0.5 * da
    grad[1:] += 0.5 * db
    return value, grad


def evaluate_Q(op, m):
    """
    Evaluates both displayed forms of the zero-temperature functional:

        form_a = 1/2 (xi'(0) L + int xi'' zhat + int 1/zhat)
        form_b = 1/2 (xi'(1) L - int xi'' Z + int 1/zhat),  Z(q) = int_0^q zeta

    :param op: OrderParameter.
    :param m: Mixture.
    """
    zhat = op.zhat
    if np.any(zhat <= 0):
        raise OutsideConeError('Order parameter outside the cone: zhat must stay positive.')
    weights = _weights(m, op.M)
    inv = np.sum(inverse_integrals(zhat[:-1], zhat[1:], op.delta))
    form_a = 0.5 * (m.polynomial(1)(0.) * op.L + np.dot(weights, zhat) + inv)
    form_b = 0.5 * (m.polynomial(1)(1.) * op.L - np.dot(weights, op.Z) + inv)
    return float(form_a), float(form_b)


def box_constant(m):
    """
    Returns (C_L, C_box): L <= C_L = 2 sqrt(xi'(1))/xi(1) holds for the minimizer, and C_box = max(C_L, 4 sqrt(xi''(1))).
    """
    c_l = 2. * np.sqrt(m.polynomial(1)(1.)) / m.polynomial(0)(1.)
    return float(c_l), float(max(c_l, 4. * np.sqrt(m.polynomial(2)(1.))))


def stationarity_report(op, m, tol_g=None):
    """
    Computes G(q) = xi'(q) - int_0^q zhat^-2 and g(s) = int_s^1 G at the grid nodes and the residuals
    of G(1) = 0, min g = 0 and supp(zeta) in T (points of increase of zeta lie where g vanishes).

    :param op: OrderParameter.
    :param m: Mixture.
    :param tol_g: threshold defining T, defaults to 1e-4 (1 + xi'(1)).
    """
    if tol_g is None:
        tol_g = 1e-4 * (1. + m.polynomial(1)(1.))
    q = op.grid
    A, B = inverse_square_integrals(op.zhat[:-1], op.zhat[1:], op.delta, q[:-1])
    prefix = np.concatenate([[0.], np.cumsum(A)])
    suffix = np.concatenate([np.cumsum(B[::-1])[::-1], [0.]])
    G = m.polynomial(1)(q) - prefix
    g = m.polynomial(0)(1.) - m.polynomial(0)(q) - (1. - q) * prefix - suffix
    g[-1] = 0.
    T = np.flatnonzero((g <= tol_g) | (g <= np.min(g) + tol_g))
    if T[-1] != op.M:
        T = np.append(T, op.M)
    jumps = op.jumps
    top = np.max(jumps)
    support = np.flatnonzero(jumps > 1e-6 * top) if top > 0 else np.array([], dtype=int)
    return StationarityReport(q, G, g, T, support, tol_g)


def t_interval_at_one(report, min_width=0.1):
    """
    Width of the run of consecutive T indices ending at q=1, and whether it reaches *min_width*.
    """
    T = np.asarray(report.T_indices)
    M = report.grid.size - 1
    start = M
    members = set(T.tolist())
    while start - 1 in members:
        start -= 1
    width = (M - start) / float(M)
    return width >= min_width, width


def spectral_prediction(op, m, tol_rsb=1e-3):
    """
    Builds the SpectralPrediction of a minimizer.
    """
    gs = evaluate_Q(op, m)[0]
    return SpectralPrediction(gs, op.zhat1, m.polynomial(2)(1.), tol_rsb=tol_rsb, e_inf=e_infinity_pm(m))


def gs_derivative(m, op):
    """
    d/ds GS(xi_s) at s=1 for the dilation family xi_s(q) = xi(s^2 q):
    xi'(0) L + int_0^1 (2 xi''(q) + q xi'''(q)) zhat(q) dq.
    """
    poly = 2. * m.polynomial(2) + Polynomial([0., 1.]) * m.polynomial(3)
    return float(m.polynomial(1)(0.) * op.L + np.dot(hat_weights(poly, op.M), op.zhat))


def full_rsb_density_profile(op, m, report):
    """
    Predicted density (xi''^-1/2)'' of zeta on T, NaN outside T.
    """
    density = np.full(op.M + 1, np.nan)
    T = report.T_indices
    density[T] = full_rsb_density(m, op.grid[T])
    return density


def _zhat_hessian(zhat):
    '''
    Tridiagonal Hessian of Q with respect to the nodal values of zhat, as (diagonal, off-diagonal).
    '''
    M = zhat.size - 1
    _, _, (haa, hab, hbb) = inverse_integrals(zhat[:-1], zhat[1:], 1. / M, derivatives=2)
    diag = np.zeros(M + 1)
    diag[:-1] += 0.5 * haa
    diag[1:] += 0.5 * hbb
    return diag, 0.5 * hab


def cone_jacobian(M):
    """
    Matrix J with zhat = J x for the cone coordinates x = (zhat(1), w).
    """
    return np.column_stack([np.ones(M + 1), ramp_matrix(M)])


def _minimize_lbfgs(m, M, tol, max_iter):
    weights = _weights(m, M)
    c_l, _ = box_constant(m)

    def to_zhat(x):
        return x[0] + ramp_apply(x[1:], M)

    def f_df(x):
        value, grad = _value_and_gradient(to_zhat(x), m, weights)
        return value, np.concatenate([[np.sum(grad)], ramp_adjoint(grad, M)])

    x0 = np.zeros(M + 1)
    x0[0] = min(1. / np.sqrt(m.polynomial(1)(1.)), c_l)
    bounds = [(ZHAT_FLOOR, c_l)] + [(0., None)] * M
    optimizer = choose_optimizer('lbfgs', bounds, maxiter=max_iter, pgtol=tol, restarts=1)
    x, fx = optimizer.optimize(x0, f_df=f_df)
    status = optimizer.status
    if not status['converged']:
        # the cone coordinates are badly conditioned for large M, l-bfgs-b stalls before pgtol
        J = cone_jacobian(M)

        def hess(x):
            diag, off = _zhat_hessian(to_zhat(x))
            HJ = diag[:, None] * J
            HJ[:-1] += off[:, None] * J[1:]
            HJ[1:] += off[:, None] * J[:-1]
            H = J.T.dot(HJ)
            return 0.5 * (H + H.T)

        logger.info('l-bfgs-b stopped at projected gradient %.2e (%s), polishing with projected Newton.',
                    status['projected_gradient'], status['message'])
        newton = choose_optimizer('projected_newton', bounds, maxiter=min(max_iter, NEWTON_ITERATIONS), tol=tol)
        x, fx = newton.optimize(x, f_df=f_df, hess=hess)
        status = dict(newton.status, iterations=status['iterations'] + newton.status['iterations'])
    return OrderParameter.from_cone(x[0], x[1:], check=False), status


def _minimize_projected_gradient(m, M, tol, max_iter):
    weights = _weights(m, M)
    delta = 1. / M

    def to_zhat(u):
        return u[0] - delta * np.concatenate([[0.], np.cumsum(u[1:])])

    def f_df(u):
        zhat = to_zhat(u)
        if np.any(zhat <= 0):
            return np.inf, np.zeros_like(u)
        value, grad = _value_and_gradient(zhat, m, weights)
        tail = np.cumsum(grad[::-1])[::-1]
        return value, np.concatenate([[tail[0]], -delta * tail[1:]])

    halfspace = np.concatenate([[1.], -delta * np.ones(M)])
    projection = DykstraProjection([MonotoneProjection(slice(1, None)),
                                    BoxProjection(slice(1, None), lower=0.),
                                    HalfspaceProjection(halfspace, ZHAT_FLOOR)])
    u0 = np.zeros(M + 1)
    u0[0] = 1. / np.sqrt(m.polynomial(1)(1.))
    optimizer = choose_optimizer('projected_gradient', projection=projection, maxiter=max_iter, tol=tol)
    u, fu = optimizer.optimize(u0, f_df=f_df)
    return OrderParameter(np.maximum(to_zhat(u), ZHAT_FLOOR), check=False), optimizer.status


def minimize_Q(m, M=1000, tol=1e-9, max_iter=20000, method='lbfgs', tol_rsb=1e-3):
    """
    Minimizes the zero-temperature functional over the cone of positive, nonincreasing, concave profiles.

    :param m: Mixture.
    :param M: number of grid cells (>= 64 for certified runs).
    :param tol: tolerance on the projected gradient; a result above it raises NonConvergenceError.
    :param max_iter: iteration budget; exhausting it raises NonConvergenceError.
    :param method: 'lbfgs' (cone coordinates with a projected Newton polish, default) or
                   'projected_gradient' (Dykstra projections).
    :param tol_rsb: relative tolerance of the full-RSB endpoint predicate.
    """
    if int(M) != M or M < 2:
        raise DomainError('Grid size must be an integer >= 2.')
    M = int(M)
    if method == 'lbfgs':
        op, status = _minimize_lbfgs(m, M, tol, max_iter)
    elif method == 'projected_gradient':
        op, status = _minimize_projected_gradient(m, M, tol, max_iter)
    else:
        raise InvalidVariableNameError('Invalid solver method selected: ' + str(method) + '.')

    report = stationarity_report(op, m)
    if not status['converged']:
        raise NonConvergenceError('Zero-temperature solver did not converge (' + str(status['message']) + ').',
                                  best=op, residuals=report.to_dict())
    pred = spectral_prediction(op, m, tol_rsb=tol_rsb)
    c_l, c_box = box_constant(m)
    if op.L > c_box or op.zhat1 < 1. / c_box:
        logger.warning('Minimizer leaves the compactification box (L=%g, zhat(1)=%g, C=%g).', op.L, op.zhat1, c_box)
    logger.info('minimize_Q: %r M=%d GS=%.10f zhat(1)=%.6f iterations=%s residual=%.2e',
                m, M, pred.gs, op.zhat1, status['iterations'], report.max_residual)
    return op, pred


def envelope_check(m, M=1000, h=1e-3, tol=1e-9):
    """
    Central finite difference of GS along the dilation family, compared with gs_derivative and r.

    Returns a dictionary with the three values.
    """
    op, pred = minimize_Q(m, M=M, tol=tol)
    gs_plus = minimize_Q(dilate(m, 1. + h), M=M, tol=tol)[1].gs
    gs_minus = minimize_Q(dilate(m, 1. - h), M=M, tol=tol)[1].gs
    return {'finite_difference': (gs_plus - gs_minus) / (2. * h),
            'gs_derivative': gs_derivative(m, op), 'r': pred.r}


def grid_refinement(m, M, tol=1e-9):
    """
    |GS_M - GS_2M| for the grid refinement check.
    """
    return abs(minimize_Q(m, M=M, tol=tol)[1].gs - minimize_Q(m, M=2 * M, tol=tol)[1].gs)
