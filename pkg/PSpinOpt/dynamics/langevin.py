# Copyright (c) 2026, the PSpinOpt Authors
# Licensed under the BSD 3-clause license (see LICENSE.txt)

import logging
from functools import partial
import numpy as np

from ..core.errors import StabilityError, DomainError
from ..landscape.hamiltonian import tensor_rng, check_sphere, project_to_sphere
from ..util.general import parallel_map, log_spaced_times, mean_and_stderr

logger = logging.getLogger(__name__)

PATH_STREAM = 202
STABILITY_LIMIT = 0.1
# default step: this fraction of the stability limit at the start, capped
DEFAULT_DT_FRACTION = 0.2
MAX_DEFAULT_DT = 1e-2


class LangevinConfig(object):
    """
    Parameters of a spherical Langevin run.

    :param h: HamiltonianInstance.
    :param x0: starting point on the sphere.
    :param beta: inverse temperature (>= 0).
    :param horizon: final time T.
    :param dt: step size, defaults to DEFAULT_DT_FRACTION of the stability limit at x0, at most MAX_DEFAULT_DT.
    :param seed: seed of the noise streams.
    :param records: number of log-spaced record times.
    :param record_times: explicit record times, overriding *records*.
    """

    def __init__(self, h, x0, beta, horizon, dt=None, seed=0, records=40, record_times=None):
        if beta < 0 or not np.isfinite(beta):
            raise DomainError('Inverse temperature must be finite and nonnegative.')
        if horizon <= 0:
            raise DomainError('Horizon must be positive.')
        self.h = h
        self.x0 = project_to_sphere(check_sphere(h._check(x0), tol=1e-6))
        self.beta = float(beta)
        self.horizon = float(horizon)
        self.dt = float(dt) if dt is not None else self.default_dt()
        if self.dt <= 0:
            raise DomainError('Step size must be positive.')
        self.seed = int(seed)
        self.n_steps = int(round(self.horizon / self.dt))
        if record_times is None:
            self.record_times = log_spaced_times(self.horizon, records, self.dt)
        else:
            steps = np.unique(np.clip(np.round(np.asarray(record_times, dtype=float) / self.dt).astype(int),
                                      0, self.n_steps))
            self.record_times = np.unique(np.concatenate([[0], steps])) * self.dt

    def stability_rate(self, grad_norm):
        return self.beta * grad_norm / np.sqrt(self.h.N) + 1.

    def default_dt(self):
        rate = self.stability_rate(np.linalg.norm(self.h.gradient(self.x0)))
        return min(MAX_DEFAULT_DT, DEFAULT_DT_FRACTION * STABILITY_LIMIT / rate)

    @property
    def record_steps(self):
        return np.round(self.record_times / self.dt).astype(int)

    def check_stability(self, grad_norm):
        """
        dt (beta |grad H|/sqrt(N) + 1) <= 0.1, else StabilityError with a suggested step.
        """
        rate = self.stability_rate(grad_norm)
        if self.dt * rate > STABILITY_LIMIT:
            suggested = 0.5 * STABILITY_LIMIT / rate
            raise StabilityError('Step size %g violates the stability guard (dt * rate = %g > %g); try dt <= %g.'
                                 % (self.dt, self.dt * rate, STABILITY_LIMIT, suggested), suggested_dt=suggested)


def integrate(cfg, path=0):
    """
    Euler-Maruyama integration of dx = (beta grad_sp H(x) - ((N-1)/N) x) dt + P_x sqrt(2) dB, followed by
    renormalization to radius sqrt(N) at every step.

    :param cfg: LangevinConfig.
    :param path: index of the noise stream.
    Returns a dictionary with the record times, R(x0, x_t) and H(x_t)/N.
    """
    h = cfg.h
    N = h.N
    rng = tensor_rng(cfg.seed, PATH_STREAM, path)
    x = cfg.x0.copy()
    record_steps = cfg.record_steps
    overlaps = np.empty(record_steps.size)
    energies = np.empty(record_steps.size)
    drift_constant = (N - 1.) / N
    noise_scale = np.sqrt(2. * cfg.dt)
    position = 0

    for step in range(cfg.n_steps + 1):
        if position < record_steps.size and step == record_steps[position]:
            overlaps[position] = np.dot(cfg.x0, x) / N
            energies[position] = h.energy(x) / N
            position += 1
        if step == cfg.n_steps:
            break
        grad = h.gradient(x)
        if cfg.beta > 0:
            cfg.check_stability(np.linalg.norm(grad))
        grad_sp = grad - (np.dot(x, grad) / N) * x
        noise = rng.standard_normal(N)
        noise -= (np.dot(x, noise) / N) * x
        x = x + (cfg.beta * grad_sp - drift_constant * x) * cfg.dt + noise_scale * noise
        x *= np.sqrt(N) / np.linalg.norm(x)

    return {'t': cfg.record_times.copy(), 'R': overlaps, 'energy_per_N': energies, 'path': path}


def run_paths(cfg, n_paths, workers=1):
    """
    Independent paths with streams keyed by (seed, path), aggregated in path order.

    Returns the record times with the mean and standard error of R(x0, x_t) and the mean energy per N.
    """
    results = parallel_map(partial(integrate, cfg), list(range(n_paths)), workers)
    R = np.array([r['R'] for r in results])
    E = np.array([r['energy_per_N'] for r in results])
    mean_R, stderr_R = mean_and_stderr(R)
    logger.info('run_paths: beta=%g N=%d paths=%d final mean R=%.4f', cfg.beta, cfg.h.N, n_paths, mean_R[-1])
    return {'t': cfg.record_times.copy(), 'mean_R': mean_R, 'stderr_R': stderr_R, 'mean_energy': E.mean(axis=0),
            'min_mean_R': float(np.min(mean_R))}
