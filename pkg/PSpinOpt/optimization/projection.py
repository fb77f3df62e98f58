# Copyright (c) 2026, the PSpinOpt Authors
# Licensed under the BSD 3-clause license (see LICENSE.txt)

import abc
import logging
import numpy as np
from six import with_metaclass

logger = logging.getLogger(__name__)


def isotonic_regression(sequence, weights=None, increasing=True):
    """
    Weighted least-squares projection of a sequence onto monotone sequences (pool adjacent violators).

    :param sequence: array of floats to monotonize.
    :param weights: positive weights, defaults to ones.
    :param increasing: nondecreasing output if True, nonincreasing otherwise.
    """
    sequence = np.array(sequence, dtype=float)
    if sequence.size <= 1:
        return sequence
    if not increasing:
        return -isotonic_regression(-sequence, weights, True)
    if weights is None:
        weights = np.ones_like(sequence)
    else:
        weights = np.array(weights, dtype=float)
        if weights.shape != sequence.shape:
            raise ValueError('Weights must be same size as sequence.')
        if not (weights > 0).all():
            raise ValueError('Weights must be positive.')

    # blocks as parallel stacks: weighted mean, total weight, length
    means = []
    totals = []
    sizes = []
    for value, weight in zip(sequence, weights):
        means.append(value)
        totals.append(weight)
        sizes.append(1)
        while len(means) > 1 and means[-2] > means[-1]:
            w = totals[-2] + totals[-1]
            means[-2] = (means[-2] * totals[-2] + means[-1] * totals[-1]) / w
            totals[-2] = w
            sizes[-2] += sizes[-1]
            means.pop()
            totals.pop()
            sizes.pop()
    return np.repeat(means, sizes)


class Projection(with_metaclass(abc.ABCMeta, object)):
    """
    Euclidean projection onto a closed convex set.
    """

    @abc.abstractmethod
    def project(self, x):
        "Project x onto the set."
        return

    def __call__(self, x):
        return self.project(np.asarray(x, dtype=float))


class MonotoneProjection(Projection):
    """
    Projection of the coordinates *index* onto nondecreasing sequences.
    """
    def __init__(self, index):
        self.index = index

    def project(self, x):
        y = x.copy()
        y[self.index] = isotonic_regression(x[self.index])
        return y


class BoxProjection(Projection):
    """
    Clipping of the coordinates *index* to [lower, upper].
    """
    def __init__(self, index, lower=-np.inf, upper=np.inf):
        self.index = index
        self.lower = lower
        self.upper = upper

    def project(self, x):
        y = x.copy()
        y[self.index] = np.clip(x[self.index], self.lower, self.upper)
        return y


class HalfspaceProjection(Projection):
    """
    Projection onto {x : <a, x> >= b}.
    """
    def __init__(self, a, b):
        self.a = np.asarray(a, dtype=float)
        self.b = float(b)
        self._norm2 = float(np.dot(self.a, self.a))

    def project(self, x):
        slack = self.b - np.dot(self.a, x)
        if slack <= 0:
            return x.copy()
        return x + (slack / self._norm2) * self.a


class DykstraProjection(Projection):
    """
    Projection onto the intersection of convex sets by Dykstra's alternating algorithm.

    :param projections: list of Projection objects, one per set.
    :param max_iter: maximum number of sweeps.
    :param eps: stopping tolerance on the change of the iterate over a sweep.
    """
    def __init__(self, projections, max_iter=1000, eps=1e-13):
        self.projections = list(projections)
        self.max_iter = max_iter
        self.eps = eps
        self.num_iter = 0

    def project(self, x):
        x_k = x.copy()
        corrections = [np.zeros_like(x_k) for _ in self.projections]
        for it in range(1, self.max_iter + 1):
            x_old = x_k
            for i, proj in enumerate(self.projections):
                y = proj.project(x_k + corrections[i])
                corrections[i] = x_k + corrections[i] - y
                x_k = y
            if np.max(np.abs(x_k - x_old)) <= self.eps * (1. + np.max(np.abs(x_k))):
                break
        else:
            logger.debug('Dykstra projection stopped after %d sweeps.', self.max_iter)
        self.num_iter = it
        return x_k
