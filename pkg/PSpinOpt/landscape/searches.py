# Copyright (c) 2026, the PSpinOpt Authors
# Licensed under the BSD 3-clause license (see LICENSE.txt)

import logging
import numpy as np

from ..core.errors import DomainError
from .hamiltonian import tensor_rng, overlap

logger = logging.getLogger(__name__)

SEARCH_STREAM = 102


def pair_angle(eps):
    """
    theta with cos(2 theta) = 1 - eps.
    """
    return float(np.arcsin(np.sqrt(eps / 2.)))


def three_replica_overlaps(eps):
    """
    Target overlap matrix of the three-replica search.
    """
    a = 1. - eps
    b = 1. - 4. * eps + 2. * eps ** 2
    return np.array([[1., a, a], [a, 1., b], [a, b, 1.]])


class _PairObjective(object):
    '''
    H(cos t s + sin t v) + H(cos t s - sin t v) as a function of the frame X = [s, v]/sqrt(N).
    '''
    def __init__(self, h, eps):
        self.h = h
        self.angle = pair_angle(eps)

    def points(self, X):
        s, v = np.sqrt(self.h.N) * X[:, 0], np.sqrt(self.h.N) * X[:, 1]
        c, d = np.cos(self.angle), np.sin(self.angle)
        return [c * s + d * v, c * s - d * v]

    def value(self, X):
        plus, minus = self.points(X)
        return self.h.energy(plus) + self.h.energy(minus)

    def gradient(self, X):
        plus, minus = self.points(X)
        gp, gm = self.h.gradient(plus), self.h.gradient(minus)
        c, d = np.cos(self.angle), np.sin(self.angle)
        return np.sqrt(self.h.N) * np.column_stack([c * (gp + gm), d * (gp - gm)])


class _TripleObjective(object):
    '''
    3 H(s) - H(cos 2t s + sin 2t v) - H(cos 2t s - sin 2t v) on the frame X = [s, v]/sqrt(N).
    '''
    def __init__(self, h, eps):
        self.h = h
        self.angle = 2. * pair_angle(eps)

    def points(self, X):
        s, v = np.sqrt(self.h.N) * X[:, 0], np.sqrt(self.h.N) * X[:, 1]
        c, d = np.cos(self.angle), np.sin(self.angle)
        return [s, c * s + d * v, c * s - d * v]

    def value(self, X):
        s1, s2, s3 = self.points(X)
        return 3. * self.h.energy(s1) - self.h.energy(s2) - self.h.energy(s3)

    def gradient(self, X):
        s1, s2, s3 = self.points(X)
        g1, g2, g3 = self.h.gradient(s1), self.h.gradient(s2), self.h.gradient(s3)
        c, d = np.cos(self.angle), np.sin(self.angle)
        return np.sqrt(self.h.N) * np.column_stack([3. * g1 - c * (g2 + g3), -d * (g2 - g3)])


def _retract(X):
    q, r = np.linalg.qr(X)
    signs = np.sign(np.diag(r))
    signs[signs == 0] = 1.
    return q * signs


def _stiefel_ascent(objective, X, tol, max_steps, armijo=1e-4):
    '''
    Gradient ascent on the Stiefel manifold of orthonormal N x 2 frames with QR retraction.
    '''
    N = X.shape[0]
    value = objective.value(X)
    step = 1. / N
    converged = False
    for it in range(1, max_steps + 1):
        G = objective.gradient(X)
        XtG = X.T.dot(G)
        direction = G - X.dot(0.5 * (XtG + XtG.T))
        norm = np.linalg.norm(direction) / N
        if norm <= tol:
            converged = True
            break
        slope = np.sum(direction * direction)
        t = step
        while True:
            candidate = _retract(X + t * direction)
            candidate_value = objective.value(candidate)
            if candidate_value >= value + armijo * t * slope or t < 1e-16:
                break
            t *= 0.5
        X, value = candidate, candidate_value
        step = 2. * t
    return X, value, converged, it


def _start_frame(N, rng, sigma=None, v=None):
    s = rng.standard_normal(N) if sigma is None else np.asarray(sigma, dtype=float)
    u = rng.standard_normal(N) if v is None else np.asarray(v, dtype=float)
    return _retract(np.column_stack([s, u]))


def _search(objective, h, eps, starts, n_restarts, seed, tol, max_steps):
    if starts is None:
        starts = [(None, None)] * n_restarts
    best = None
    for restart, (sigma, v) in enumerate(starts):
        X0 = _start_frame(h.N, tensor_rng(seed, SEARCH_STREAM, restart), sigma, v)
        X, value, converged, steps = _stiefel_ascent(objective, X0, tol, max_steps)
        if best is None or value > best['value'] * h.N:
            best = {'value': value / h.N, 'X': X, 'converged': converged, 'steps': steps}
    sqrt_n = np.sqrt(h.N)
    best['sigma'] = sqrt_n * best['X'][:, 0]
    best['v'] = sqrt_n * best['X'][:, 1]
    points = objective.points(best.pop('X'))
    best['overlaps'] = np.array([[overlap(a, b) for b in points] for a in points])
    best['eps'] = eps
    if not best['converged']:
        logger.warning('Constrained search did not converge within %d steps (eps=%g).', max_steps, eps)
    return best


def constrained_pair_search(h, eps, starts=None, n_restarts=5, seed=None, tol=1e-6, max_steps=2000):
    """
    Maximizes (H(s+) + H(s-))/N over pairs with overlap 1 - eps, s+- = cos(t) s +- sin(t) v, sin(t)^2 = eps/2,
    jointly over s on the sphere and v tangent to s with norm sqrt(N).

    :param h: HamiltonianInstance.
    :param eps: overlap defect in (0, 0.5).
    :param starts: optional list of (sigma, v) starting pairs, overriding the random restarts.
    Returns a dictionary with the best value per N, its frame, the realized overlaps and a convergence flag.
    """
    if not 0 < eps < 0.5:
        raise DomainError('Pair search needs eps in (0, 0.5).')
    seed = h.seed if seed is None else seed
    result = _search(_PairObjective(h, eps), h, eps, starts, n_restarts, seed, tol, max_steps)
    result['overlap_residual'] = float(abs(result['overlaps'][0, 1] - (1. - eps)))
    logger.info('constrained_pair_search: eps=%g value=%.6f converged=%s', eps, result['value'], result['converged'])
    return result


def constrained_triple_search(h, eps, starts=None, n_restarts=5, seed=None, tol=1e-6, max_steps=2000):
    """
    Maximizes (3 H(s1) - H(s2) - H(s3))/N with s2, s3 = cos(2t) s1 +- sin(2t) v, whose overlap matrix is
    [[1, 1-eps, 1-eps], [1-eps, 1, 1-4eps+2eps^2], [1-eps, 1-4eps+2eps^2, 1]].

    :param eps: overlap defect in (0, 0.25).
    """
    if not 0 < eps < 0.25:
        raise DomainError('Triple search needs eps in (0, 0.25).')
    seed = h.seed if seed is None else seed
    result = _search(_TripleObjective(h, eps), h, eps, starts, n_restarts, seed, tol, max_steps)
    result['overlap_residual'] = float(np.max(np.abs(result['overlaps'] - three_replica_overlaps(eps))))
    if result['overlap_residual'] > 1e-9:
        logger.warning('Realized overlap matrix misses the target by %.2e.', result['overlap_residual'])
    logger.info('constrained_triple_search: eps=%g value=%.6f converged=%s', eps, result['value'], result['converged'])
    return result


def _frame(h, sigma, v):
    sigma = h._check(sigma)
    v = h._check(v)
    if abs(np.dot(sigma, v)) > 1e-8 * h.N:
        raise DomainError('v must be tangent to sigma.')
    return np.column_stack([sigma, v]) / np.sqrt(h.N)


def pair_value(h, sigma, v, eps):
    """
    (H(s+) + H(s-))/N at a fixed sigma and tangent v of norm sqrt(N).
    """
    return _PairObjective(h, eps).value(_frame(h, sigma, v)) / h.N


def triple_value(h, sigma, v, eps):
    """
    (3 H(s1) - H(s2) - H(s3))/N at a fixed sigma and tangent v of norm sqrt(N).
    """
    return _TripleObjective(h, eps).value(_frame(h, sigma, v)) / h.N
