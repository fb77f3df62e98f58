# Copyright (c) 2026, the PSpinOpt Authors
# Licensed under the BSD 3-clause license (see LICENSE.txt)

import logging
from functools import partial
import numpy as np

from ..util.general import parallel_map
from .hamiltonian import project_to_sphere, random_point, spherical_ops, tensor_rng, check_sphere

logger = logging.getLogger(__name__)

# stream tag of the restart starting points, keeps them apart from the tensor streams (seed, p)
RESTART_STREAM = 101


class LandscapeRecord(object):
    """
    Result of one ascent: the final point with its energy and spherical spectrum.

    :param sigma: point on the sphere.
    :param energy_per_N: H(sigma)/N.
    :param grad_sp_norm_per_sqrtN: norm of the spherical gradient over sqrt(N).
    :param radial: radial derivative <sigma, grad H>/N.
    :param eigs: spectrum of the spherical Hessian, sorted descending.
    :param ascent_steps: number of iterations used.
    :param converged: whether the gradient tolerance was reached.
    """

    def __init__(self, sigma, energy_per_N, grad_sp_norm_per_sqrtN, radial, eigs, ascent_steps, converged,
                 seed=None, restart=None):
        self.sigma = sigma
        self.energy_per_N = float(energy_per_N)
        self.grad_sp_norm_per_sqrtN = float(grad_sp_norm_per_sqrtN)
        self.radial = float(radial)
        self.eigs = np.sort(np.asarray(eigs, dtype=float))[::-1]
        self.ascent_steps = int(ascent_steps)
        self.converged = bool(converged)
        self.seed = seed
        self.restart = restart

    @property
    def N(self):
        return self.sigma.size

    @property
    def lambda_1(self):
        return float(self.eigs[0])

    @property
    def lambda_min(self):
        return float(self.eigs[-1])

    def eig(self, j):
        """
        j-th largest eigenvalue, 1-based.
        """
        return float(self.eigs[j - 1])

    def to_row(self, k_frac=0.02):
        j = max(1, int(np.ceil(k_frac * self.N)))
        return [self.seed, self.restart, self.energy_per_N, self.radial, self.lambda_1, self.eig(j),
                self.lambda_min, int(self.converged)]

    def to_dict(self):
        return {'seed': self.seed, 'restart': self.restart, 'energy_per_N': self.energy_per_N,
                'grad_sp_norm_per_sqrtN': self.grad_sp_norm_per_sqrtN, 'radial': self.radial,
                'lambda_1': self.lambda_1, 'lambda_min': self.lambda_min,
                'ascent_steps': self.ascent_steps, 'converged': self.converged}


def _tangent_gradient(h, sigma):
    grad = h.gradient(sigma)
    radial = np.dot(sigma, grad) / h.N
    return grad - radial * sigma


def _newton_step(h, sigma):
    ops = spherical_ops(h, sigma)
    hess = ops['hess_sp']
    if np.max(np.linalg.eigvalsh(hess)) >= 0:
        return None
    direction = -np.linalg.solve(hess, ops['grad_sp'])
    return project_to_sphere(sigma + ops['basis'].dot(direction))


def ascend(h, start, tol_grad=1e-7, max_steps=5000, newton=True, newton_switch=1e-2, armijo=1e-4):
    """
    Riemannian gradient ascent of H on the sphere of radius sqrt(N), with normalization as retraction and
    backtracking line search, switching to Newton steps in the tangent basis near convergence.

    :param h: HamiltonianInstance.
    :param start: starting point on the sphere.
    :param tol_grad: stop when the spherical gradient norm over sqrt(N) falls below this value.
    :param max_steps: iteration budget; exhausting it returns a record with converged=False.
    :param newton: enable the Newton refinement.
    :param newton_switch: gradient norm (over sqrt(N)) below which Newton steps are tried.
    """
    sigma = check_sphere(h._check(start), tol=1e-6)
    sigma = project_to_sphere(sigma)
    sqrt_n = np.sqrt(h.N)
    energy = h.energy(sigma)
    step = 1.
    converged = False
    steps = 0
    for steps in range(1, max_steps + 1):
        direction = _tangent_gradient(h, sigma)
        norm = np.linalg.norm(direction) / sqrt_n
        if norm <= tol_grad:
            converged = True
            break

        if newton and norm < newton_switch:
            candidate = _newton_step(h, sigma)
            if candidate is not None and np.linalg.norm(_tangent_gradient(h, candidate)) / sqrt_n < norm:
                sigma = candidate
                energy = h.energy(sigma)
                continue

        slope = np.dot(direction, direction)
        t = step
        while True:
            candidate = project_to_sphere(sigma + t * direction)
            candidate_energy = h.energy(candidate)
            if candidate_energy >= energy + armijo * t * slope or t < 1e-14:
                break
            t *= 0.5
        sigma, energy = candidate, candidate_energy
        step = min(2. * t, 1e3)
    else:
        direction = _tangent_gradient(h, sigma)
        norm = np.linalg.norm(direction) / sqrt_n
        converged = norm <= tol_grad

    ops = spherical_ops(h, sigma)
    eigs = np.linalg.eigvalsh(ops['hess_sp'])
    logger.debug('ascend: N=%d steps=%d energy/N=%.6f grad=%.2e converged=%s', h.N, steps, energy / h.N, norm, converged)
    return LandscapeRecord(sigma, energy / h.N, np.linalg.norm(ops['grad_sp']) / sqrt_n, ops['radial'], eigs,
                           steps, converged)


def _restart_job(h, seed, opts, restart):
    start = random_point(h.N, tensor_rng(seed, RESTART_STREAM, restart))
    record = ascend(h, start, **opts)
    record.seed = seed
    record.restart = restart
    return record


def run_restarts(h, n_restarts=50, seed=None, workers=1, **opts):
    """
    Ascents from *n_restarts* seeded random starting points, merged in restart order.
    """
    seed = h.seed if seed is None else seed
    job = partial(_restart_job, h, seed, opts)
    records = parallel_map(job, list(range(n_restarts)), workers)
    logger.info('run_restarts: N=%d seed=%d restarts=%d best energy/N=%.6f converged=%d',
                h.N, seed, n_restarts, max(r.energy_per_N for r in records), sum(r.converged for r in records))
    return records
