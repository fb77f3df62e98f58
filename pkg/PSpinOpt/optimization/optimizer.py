# Copyright (c) 2026, the PSpinOpt Authors
# Licensed under the BSD 3-clause license (see LICENSE.txt)

import logging
import warnings
import numpy as np
import scipy.linalg
import scipy.optimize
from ..core.errors import InvalidVariableNameError

logger = logging.getLogger(__name__)


class Optimizer(object):
    """
    Class for a general local optimizer of a smooth convex objective.

    :param bounds: list of tuple with bounds of the optimizer (or None).

    After a call to *optimize* the attribute *status* holds a dictionary with the keys
    'converged', 'iterations' and 'message'.
    """

    def __init__(self, bounds):
        self.bounds = bounds
        self.status = {}

    def optimize(self, x0, f=None, df=None, f_df=None):
        """
        :param x0: initial point for a local optimizer.
        :param f: function to optimize.
        :param df: gradient of the function to optimize.
        :param f_df: returns both the function to optimize and its gradient.
        """
        raise NotImplementedError("The optimize method is not implemented in the parent class.")


def _as_f_df(f, df, f_df):
    if f_df is None and df is not None:
        f_df = lambda x: (float(f(x)), df(x))
    if f_df is None:
        raise ValueError('A gradient is required: pass df or f_df.')
    return f_df


def bounds_arrays(bounds, n):
    """
    Lower and upper bound arrays of length *n* from a list of (lower, upper) tuples (None is unbounded).
    """
    if bounds is None:
        return np.full(n, -np.inf), np.full(n, np.inf)
    lower = np.array([-np.inf if b[0] is None else b[0] for b in bounds], dtype=float)
    upper = np.array([np.inf if b[1] is None else b[1] for b in bounds], dtype=float)
    return lower, upper


def projected_gradient_norm(x, g, lower, upper):
    """
    Sup norm of x - P(x - g), P the projection onto the box [lower, upper].
    """
    return float(np.max(np.abs(x - np.clip(x - g, lower, upper)))) if x.size else 0.


class OptLbfgs(Optimizer):
    '''
    Wrapper for l-bfgs-b with the true gradients.

    The run counts as converged only when the projected gradient at the returned point is below *pgtol*;
    stops on the relative reduction of f or on a failed line search are restarted from the last iterate
    with fresh memory and factr=0, at most *restarts* times.

    :param bounds: list of (lower, upper) tuples.
    :param maxiter: maximum number of iterations per run.
    :param pgtol: tolerance on the projected gradient (sup norm).
    :param factr: relative decrease tolerance in units of machine epsilon for the first run.
    :param restarts: number of restarts after a premature stop.
    '''
    def __init__(self, bounds, maxiter=1000, pgtol=1e-9, factr=10., restarts=3):
        super(OptLbfgs, self).__init__(bounds)
        self.maxiter = maxiter
        self.pgtol = pgtol
        self.factr = factr
        self.restarts = restarts

    def optimize(self, x0, f=None, df=None, f_df=None):
        f_df = _as_f_df(f, df, f_df)
        x = np.asarray(x0, dtype=float)
        lower, upper = bounds_arrays(self.bounds, x.size)
        fx, g = f_df(x)
        pg = projected_gradient_norm(x, g, lower, upper)
        iterations, task = 0, 'START'
        for attempt in range(self.restarts + 1):
            if pg <= self.pgtol:
                break
            res = scipy.optimize.fmin_l_bfgs_b(f_df, x0=x, bounds=self.bounds,
                                               maxiter=self.maxiter, maxfun=4 * self.maxiter,
                                               pgtol=self.pgtol, factr=self.factr if attempt == 0 else 0.)
            task = res[2]['task']
            if isinstance(task, bytes):
                task = task.decode()
            iterations += res[2]['nit']
            if not np.all(np.isfinite(res[0])) or not res[1] <= fx:
                break
            improved = res[1] < fx
            x, fx = res[0], float(res[1])
            pg = projected_gradient_norm(x, res[2]['grad'], lower, upper)
            logger.debug('l-bfgs-b run %d: %s, projected gradient %.3e', attempt, task, pg)
            if not improved or res[2]['warnflag'] == 1:
                break
        self.status = {'converged': pg <= self.pgtol, 'iterations': iterations,
                       'message': task, 'projected_gradient': pg}
        return x, float(fx)


class OptProjectedNewton(Optimizer):
    '''
    Projected Newton method for smooth convex objectives over a box, with exact Hessians.

    Coordinates within epsilon of a bound and pushed against it by the gradient take a diagonally scaled
    gradient step; the other coordinates take the Newton step of their block. The combined step is
    projected onto the box and backtracked along the projection arc until the Armijo condition holds.
    Once the predicted decrease falls below the resolution of f, a step is accepted when it lowers the
    projected gradient instead.

    :param bounds: list of (lower, upper) tuples.
    :param maxiter: maximum number of Newton iterations.
    :param tol: tolerance on the projected gradient (sup norm).
    :param epsilon: width of the band defining the active bounds.
    '''
    def __init__(self, bounds, maxiter=200, tol=1e-9, epsilon=1e-3, armijo=1e-4):
        super(OptProjectedNewton, self).__init__(bounds)
        self.maxiter = maxiter
        self.tol = tol
        self.epsilon = epsilon
        self.armijo = armijo

    def _direction(self, H, g, free):
        diag = np.maximum(np.diag(H), 1e-300)
        d = -g / diag
        if np.any(free):
            block = H[np.ix_(free, free)]
            try:
                d[free] = -scipy.linalg.cho_solve(scipy.linalg.cho_factor(block), g[free])
            except np.linalg.LinAlgError:
                ridge = 1e-12 * np.trace(block) / block.shape[0]
                try:
                    d[free] = -scipy.linalg.cho_solve(scipy.linalg.cho_factor(block + ridge * np.eye(block.shape[0])),
                                                      g[free])
                except np.linalg.LinAlgError:
                    logger.debug('Newton block not positive definite, keeping the scaled gradient step.')
        return d, diag

    def _search(self, f_df, x, fx, g, pg, d, lower, upper):
        alpha = 1.
        resolution = 1e-12 * max(1., abs(fx))
        while alpha >= 1e-12:
            x_new = np.clip(x + alpha * d, lower, upper)
            predicted = float(np.dot(g, x_new - x))
            f_new, g_new = f_df(x_new)
            if np.isfinite(f_new):
                if predicted < 0 and f_new <= fx + self.armijo * predicted:
                    return x_new, f_new, g_new
                if abs(predicted) <= resolution and projected_gradient_norm(x_new, g_new, lower, upper) < pg:
                    return x_new, f_new, g_new
            alpha *= 0.5
        return None

    def optimize(self, x0, f=None, df=None, f_df=None, hess=None):
        """
        :param hess: returns the dense Hessian at x.
        """
        if hess is None:
            raise ValueError('The projected Newton method needs the Hessian.')
        f_df = _as_f_df(f, df, f_df)
        x = np.asarray(x0, dtype=float)
        lower, upper = bounds_arrays(self.bounds, x.size)
        x = np.clip(x, lower, upper)
        fx, g = f_df(x)
        pg = projected_gradient_norm(x, g, lower, upper)
        it = 0
        for it in range(1, self.maxiter + 1):
            if pg <= self.tol:
                break
            eps = min(self.epsilon, pg)
            active = ((x <= lower + eps) & (g > 0)) | ((x >= upper - eps) & (g < 0))
            d, diag = self._direction(hess(x), g, ~active)
            step = self._search(f_df, x, fx, g, pg, d, lower, upper)
            if step is None:
                step = self._search(f_df, x, fx, g, pg, -g / diag, lower, upper)
            if step is None:
                logger.debug('Projected Newton line search failed at projected gradient %.3e.', pg)
                break
            x, fx, g = step
            pg = projected_gradient_norm(x, g, lower, upper)
        self.status = {'converged': pg <= self.tol, 'iterations': it,
                       'message': 'projected gradient %.3e' % pg, 'projected_gradient': pg}
        return x, float(fx)


class OptProjectedGradient(Optimizer):
    '''
    Monotone accelerated projected gradient with backtracking on the Lipschitz constant.

    :param projection: callable returning the Euclidean projection onto the feasible set.
    :param maxiter: maximum number of iterations.
    :param tol: tolerance on the norm of the gradient mapping.
    '''
    def __init__(self, projection, maxiter=20000, tol=1e-9, lipschitz=1.):
        super(OptProjectedGradient, self).__init__(None)
        self.projection = projection
        self.maxiter = maxiter
        self.tol = tol
        self.lipschitz = lipschitz

    def optimize(self, x0, f=None, df=None, f_df=None):
        f_df = _as_f_df(f, df, f_df)
        if f is None:
            f = lambda x: f_df(x)[0]
        x = self.projection(x0)
        fx = f(x)
        y, t, lip = x.copy(), 1., self.lipschitz
        converged, it, gmap = False, 0, np.inf
        for it in range(1, self.maxiter + 1):
            fy, gy = f_df(y)
            while True:
                z = self.projection(y - gy / lip)
                fz = f(z)
                d = z - y
                if fz <= fy + np.dot(gy, d) + 0.5 * lip * np.dot(d, d) + 1e-15 * abs(fy):
                    break
                lip *= 2.
            gmap = lip * np.sqrt(np.dot(d, d))
            t_new = 0.5 * (1. + np.sqrt(1. + 4. * t * t))
            if fz <= fx:
                x_new, fx_new = z, fz
            else:
                x_new, fx_new = x, fx
            y = x_new + (t / t_new) * (z - x_new) + ((t - 1.) / t_new) * (x_new - x)
            x, fx, t = x_new, fx_new, t_new
            if gmap <= self.tol:
                converged = True
                break
            # restart the momentum when it stalls
            if fz > fy:
                y, t = x.copy(), 1.
        self.status = {'converged': converged, 'iterations': it, 'message': 'gradient mapping %.3e' % gmap}
        return x, float(fx)


class OptTrustConstr(Optimizer):
    '''
    Wrapper for scipy's trust-constr interior point method with exact Hessians.

    :param bounds: scipy.optimize.Bounds instance.
    :param constraints: list of scipy.optimize.LinearConstraint instances.
    :param maxiter: maximum number of iterations.
    :param tol: gradient and barrier tolerance.
    '''
    def __init__(self, bounds, constraints=(), maxiter=3000, tol=1e-10):
        super(OptTrustConstr, self).__init__(bounds)
        self.constraints = list(constraints)
        self.maxiter = maxiter
        self.tol = tol

    def optimize(self, x0, f=None, df=None, f_df=None, hess=None):
        f_df = _as_f_df(f, df, f_df)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            res = scipy.optimize.minimize(f_df, np.asarray(x0, dtype=float), jac=True, hess=hess,
                                          method='trust-constr', bounds=self.bounds,
                                          constraints=self.constraints,
                                          options={'maxiter': self.maxiter, 'gtol': self.tol,
                                                   'xtol': 1e-14, 'barrier_tol': self.tol})
        self.status = {'converged': res.status in (1, 2), 'iterations': res.nit, 'message': res.message}
        return res.x, float(res.fun)


def choose_optimizer(optimizer_name, bounds=None, **kwargs):
        """
        Selects the type of local optimizer.

        For 'projected_gradient' the keyword *projection* is required and *bounds* is ignored.
        """
        if optimizer_name == 'lbfgs':
            optimizer = OptLbfgs(bounds, **kwargs)

        elif optimizer_name == 'projected_newton':
            optimizer = OptProjectedNewton(bounds, **kwargs)

        elif optimizer_name == 'projected_gradient':
            optimizer = OptProjectedGradient(**kwargs)

        elif optimizer_name == 'trust-constr':
            optimizer = OptTrustConstr(bounds, **kwargs)
        else:
            raise InvalidVariableNameError('Invalid optimizer selected.')

        return optimizer
