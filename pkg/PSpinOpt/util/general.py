# Copyright (c) 2026, the PSpinOpt Authors
# Licensed under the BSD 3-clause license (see LICENSE.txt)

import logging
import os
import numpy as np

from ..core.errors import InvalidConfigError

logger = logging.getLogger(__name__)

WORKERS_ENV = 'PSPINOPT_WORKERS'


def get_workers(environ=None):
    '''
    Number of worker processes, read from the PSPINOPT_WORKERS environment variable (default 1).
    '''
    environ = os.environ if environ is None else environ
    value = environ.get(WORKERS_ENV, '1')
    try:
        workers = int(value)
    except ValueError:
        raise InvalidConfigError(WORKERS_ENV + ' must be a positive integer, got ' + repr(value) + '.')
    if workers < 1:
        raise InvalidConfigError(WORKERS_ENV + ' must be a positive integer, got ' + repr(value) + '.')
    return workers


def _sequential_map(func, jobs):
    return [func(job) for job in jobs]


def parallel_map(func, jobs, workers=1):
    '''
    Applies *func* to every job and returns the results in job order. Jobs run on a process pool when
    workers > 1; any failure of the pool falls back to a sequential loop.

    :param func: picklable callable.
    :param jobs: list of arguments.
    :param workers: number of processes.
    '''
    jobs = list(jobs)
    if workers <= 1 or len(jobs) <= 1:
        return _sequential_map(func, jobs)
    try:
        from multiprocessing import Pool
        pool = Pool(min(workers, len(jobs)))
        try:
            results = pool.map(func, jobs)
        finally:
            pool.close()
            pool.join()
    except Exception as e:
        logger.warning('Error in parallel computation (%s). Fall back to single process!', e)
        results = _sequential_map(func, jobs)
    return results


def log_spaced_times(horizon, records, dt):
    '''
    Logarithmically spaced record times in (0, horizon], snapped to multiples of dt, with t=0 prepended.
    '''
    if records < 1:
        return np.array([0.])
    n_steps = int(round(horizon / dt))
    raw = np.logspace(np.log10(dt), np.log10(n_steps * dt), records)
    steps = np.unique(np.clip(np.round(raw / dt).astype(int), 1, n_steps))
    return np.concatenate([[0.], steps * dt])


def mean_and_stderr(values, axis=0):
    '''
    Sample mean and standard error along *axis*; the standard error is 0 for a single sample.
    '''
    values = np.asarray(values, dtype=float)
    n = values.shape[axis]
    mean = values.mean(axis=axis)
    if n < 2:
        return mean, np.zeros_like(mean)
    return mean, values.std(axis=axis, ddof=1) / np.sqrt(n)
